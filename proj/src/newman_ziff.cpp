#include "homoperc/newman_ziff.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "homoperc/errors.hpp"
#include "homoperc/rng.hpp"

namespace homoperc {

UnionFind::UnionFind(std::size_t n, bool track_top)
    : parent_(n), size_(n, 1), components_(n), track_top_(track_top) {
    std::iota(parent_.begin(), parent_.end(), 0);
    if (track_top_)
        for (std::size_t i = 0; i < n; ++i) sizes_.insert(sizes_.end(), 1);
}

std::uint32_t UnionFind::find(std::uint32_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(std::uint32_t a, std::uint32_t b) {
    std::uint32_t ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (size_[ra] < size_[rb]) std::swap(ra, rb);
    if (track_top_) {
        sizes_.erase(sizes_.find(size_[ra]));
        sizes_.erase(sizes_.find(size_[rb]));
        sizes_.insert(size_[ra] + size_[rb]);
    }
    size_[ra] += size_[rb];
    parent_[rb] = ra;
    --components_;
    return true;
}

std::array<std::size_t, 3> UnionFind::top3() const {
    std::array<std::size_t, 3> out{0, 0, 0};
    std::size_t i = 0;
    for (auto it = sizes_.begin(); it != sizes_.end() && i < 3; ++it, ++i) out[i] = *it;
    return out;
}

SweepRecord run_sweep(const DualPair& pair, long k, std::uint64_t stream_key) {
    const std::size_t n = pair.primal.num_edges();
    const std::size_t nv = pair.primal.num_vertices;
    const std::size_t nvd = pair.dual.num_vertices;

    SweepRecord rec;
    rec.order.resize(n);
    std::iota(rec.order.begin(), rec.order.end(), 0);
    CounterRng rng(stream_key);
    rng.shuffle(rec.order);

    rec.Kdualclosed.assign(n + 1, 0);
    UnionFind dual_uf(nvd, /*track_top=*/false);
    rec.Kdualclosed[n] = static_cast<std::uint32_t>(dual_uf.components());
    for (std::size_t x = n; x-- > 0;) {
        auto [u, v] = pair.dual.edges[rec.order[x]];
        dual_uf.unite(u, v);
        rec.Kdualclosed[x] = static_cast<std::uint32_t>(dual_uf.components());
    }

    rec.Kopen.assign(n + 1, 0);
    rec.S1.assign(n + 1, 0);
    rec.S2.assign(n + 1, 0);
    rec.S3.assign(n + 1, 0);
    rec.kprime.assign(n + 1, 0);
    UnionFind uf(nv);
    auto record = [&](std::size_t x) {
        rec.Kopen[x] = static_cast<std::uint32_t>(uf.components());
        auto t = uf.top3();
        rec.S1[x] = static_cast<std::uint32_t>(t[0]);
        rec.S2[x] = static_cast<std::uint32_t>(t[1]);
        rec.S3[x] = static_cast<std::uint32_t>(t[2]);
        rec.kprime[x] = static_cast<long>(x) - static_cast<long>(nv) +
                        static_cast<long>(rec.Kopen[x]) -
                        static_cast<long>(rec.Kdualclosed[x]) + 1;
    };
    record(0);
    for (std::size_t x = 1; x <= n; ++x) {
        auto [u, v] = pair.primal.edges[rec.order[x - 1]];
        uf.unite(u, v);
        record(x);
    }

    if (rec.kprime[0] != 0 || rec.kprime[n] != k)
        throw std::logic_error("sweep rank endpoints disagree with homology rank");
    return rec;
}

long euler_rank(const DualPair& pair, const std::vector<std::uint32_t>& open_edges) {
    const std::size_t n = pair.primal.num_edges();
    std::vector<bool> open(n, false);
    for (auto e : open_edges) {
        if (e >= n) throw InvalidArgument("euler_rank: edge index out of range");
        open[e] = true;
    }
    UnionFind uf(pair.primal.num_vertices, false);
    UnionFind dual_uf(pair.dual.num_vertices, false);
    for (std::size_t e = 0; e < n; ++e) {
        if (open[e]) {
            auto [u, v] = pair.primal.edges[e];
            uf.unite(u, v);
        } else {
            auto [u, v] = pair.dual.edges[e];
            dual_uf.unite(u, v);
        }
    }
    return static_cast<long>(open_edges.size()) -
           static_cast<long>(pair.primal.num_vertices) +
           static_cast<long>(uf.components()) -
           static_cast<long>(dual_uf.components()) + 1;
}

namespace {

constexpr std::uint64_t kSweepSalt = 0x4E5A;

struct Accum {
    std::vector<std::int64_t> kp, kp2, pos, miss, s1, s1sq, s2, s2sq, s3, s3sq;

    explicit Accum(std::size_t len)
        : kp(len, 0), kp2(len, 0), pos(len, 0), miss(len, 0), s1(len, 0),
          s1sq(len, 0), s2(len, 0), s2sq(len, 0), s3(len, 0), s3sq(len, 0) {}

    void add(const SweepRecord& rec, long k) {
        const std::size_t len = rec.kprime.size();
        for (std::size_t x = 0; x < len; ++x) {
            std::int64_t v = rec.kprime[x];
            kp[x] += v;
            kp2[x] += v * v;
            if (v > 0) ++pos[x];
            if (v < k) ++miss[x];
            std::int64_t a = rec.S1[x], b = rec.S2[x], c = rec.S3[x];
            s1[x] += a;
            s1sq[x] += a * a;
            s2[x] += b;
            s2sq[x] += b * b;
            s3[x] += c;
            s3sq[x] += c * c;
        }
    }

    void merge(const Accum& o) {
        auto fold = [](std::vector<std::int64_t>& dst, const std::vector<std::int64_t>& src) {
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        };
        fold(kp, o.kp);
        fold(kp2, o.kp2);
        fold(pos, o.pos);
        fold(miss, o.miss);
        fold(s1, o.s1);
        fold(s1sq, o.s1sq);
        fold(s2, o.s2);
        fold(s2sq, o.s2sq);
        fold(s3, o.s3);
        fold(s3sq, o.s3sq);
    }
};

SeriesStat finish(const std::vector<std::int64_t>& sum,
                  const std::vector<std::int64_t>& sumsq, std::size_t sweeps) {
    const std::size_t len = sum.size();
    SeriesStat out;
    out.mean.resize(len);
    out.se.assign(len, 0.0);
    const double N = static_cast<double>(sweeps);
    for (std::size_t x = 0; x < len; ++x) {
        double mean = static_cast<double>(sum[x]) / N;
        out.mean[x] = mean;
        if (sweeps > 1) {
            double var = (static_cast<double>(sumsq[x]) - mean * static_cast<double>(sum[x])) /
                         (N - 1.0);
            if (var < 0) var = 0;
            out.se[x] = std::sqrt(var / N);
        }
    }
    return out;
}

}  // namespace

CanonicalSeries aggregate(const DualPair& pair, long k, std::size_t sweeps,
                          std::uint64_t master_seed, unsigned threads) {
    if (sweeps < 1) throw InvalidArgument("aggregate: need sweeps >= 1");
    if (threads < 1) throw InvalidArgument("aggregate: need threads >= 1");
    const std::size_t n = pair.primal.num_edges();
    const std::size_t len = n + 1;

    // Integer partial sums make the reduction exact, so any split of the
    // sweep range over threads yields the same totals.
    std::vector<Accum> parts;
    parts.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) parts.emplace_back(len);

    auto work = [&](unsigned t, std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            SweepRecord rec = run_sweep(pair, k, derive_stream(master_seed, s, kSweepSalt));
            parts[t].add(rec, k);
        }
    };

    if (threads == 1) {
        work(0, 0, sweeps);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (sweeps + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            std::size_t lo = std::min<std::size_t>(t * chunk, sweeps);
            std::size_t hi = std::min<std::size_t>(lo + chunk, sweeps);
            pool.emplace_back(work, t, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    Accum total(len);
    for (const auto& p : parts) total.merge(p);

    CanonicalSeries out;
    out.n = n;
    out.k = k;
    out.sweeps = sweeps;
    out.kprime = finish(total.kp, total.kp2, sweeps);
    out.pE = finish(total.pos, total.pos, sweeps);  // indicator: square == value
    out.pA = finish(total.miss, total.miss, sweeps);
    out.S1 = finish(total.s1, total.s1sq, sweeps);
    out.S2 = finish(total.s2, total.s2sq, sweeps);
    out.S3 = finish(total.s3, total.s3sq, sweeps);
    return out;
}

}  // namespace homoperc
