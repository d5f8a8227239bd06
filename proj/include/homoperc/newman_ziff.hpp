#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <vector>

#include "homoperc/surface_graph.hpp"

namespace homoperc {

// Union-find with union by size and path compression. Optionally keeps a
// descending multiset of component sizes so the three largest components
// can be read off after every merge.
class UnionFind {
public:
    explicit UnionFind(std::size_t n, bool track_top = true);
    std::uint32_t find(std::uint32_t x);
    bool unite(std::uint32_t a, std::uint32_t b);  // false when already joined
    std::size_t components() const { return components_; }
    std::size_t size_of(std::uint32_t x) { return size_[find(x)]; }
    std::array<std::size_t, 3> top3() const;  // padded with zeros

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::size_t components_ = 0;
    bool track_top_ = false;
    std::multiset<std::uint32_t, std::greater<>> sizes_;
};

// One sweep over a random edge order. Arrays are indexed by x = number of
// open primal edges, x = 0..n. Kopen counts components of the open primal
// subgraph, Kdualclosed counts components of the dual subgraph on the edges
// still closed, and kprime is the Euler-formula homology rank
//   kprime(x) = x - |V| + Kopen(x) - Kdualclosed(x) + 1.
struct SweepRecord {
    std::vector<std::uint32_t> order;  // the edge insertion order used
    std::vector<long> kprime;
    std::vector<std::uint32_t> Kopen;
    std::vector<std::uint32_t> Kdualclosed;
    std::vector<std::uint32_t> S1, S2, S3;  // largest open-cluster sizes
};

// Runs one sweep: a reverse union-find pass over the dual subgraph (edges
// are never deleted; the closed set shrinks, so it is built backwards over
// the reversed permutation), then a forward pass over the primal. k is the
// full homology rank and is checked against kprime(n).
SweepRecord run_sweep(const DualPair& pair, long k, std::uint64_t stream_key);

// Euler-formula rank of a single open-edge set, same formula as run_sweep
// but for one subset instead of a whole sweep.
long euler_rank(const DualPair& pair, const std::vector<std::uint32_t>& open_edges);

struct SeriesStat {
    std::vector<double> mean;
    std::vector<double> se;  // standard error of the mean; zero when sweeps == 1
};

// Per-x means over many sweeps. pE is the mean of indicator[kprime > 0]
// (a homologically nontrivial cycle exists), pA the mean of
// indicator[kprime < k] (some nontrivial cycle is missing).
struct CanonicalSeries {
    std::size_t n = 0;
    long k = 0;
    std::size_t sweeps = 0;
    SeriesStat kprime, pE, pA, S1, S2, S3;
};

// Runs `sweeps` independent sweeps with per-sweep streams derived from
// (master_seed, sweep index). Accumulation uses exact integer sums, so the
// result is bit-identical for any thread count.
CanonicalSeries aggregate(const DualPair& pair, long k, std::size_t sweeps,
                          std::uint64_t master_seed, unsigned threads = 1);

}  // namespace homoperc
