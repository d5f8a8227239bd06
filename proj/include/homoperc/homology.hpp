#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "homoperc/bit_matrix.hpp"
#include "homoperc/surface_graph.hpp"

namespace homoperc {

// Result of a minimum-weight search for vectors in ker B outside the row
// space of C. `exact` marks exhaustive strategies; otherwise `weight` is an
// upper bound and `confirmations` counts the trials that rediscovered it.
struct DistanceEstimate {
    std::optional<std::size_t> weight;
    std::size_t confirmations = 0;
    std::size_t trials = 0;
    bool exact = false;
};

struct CodeParams {
    std::size_t n = 0;
    long k = 0;
    std::optional<std::size_t> dZ;  // min nontrivial cycle weight
    std::optional<std::size_t> dX;  // min nontrivial co-cycle weight
    bool dZ_exact = false;
    bool dX_exact = false;
    std::size_t dZ_confirmations = 0;
    std::size_t dX_confirmations = 0;
};

constexpr std::size_t kDefaultExactLimit = std::size_t(1) << 24;

// Homology rank: n - rank J - rank K.
long css_k(const IncidencePair& pair);

// Rank of the first homology group restricted to the open edge set I:
//   |I| - rank K - rank J[I] + rank K[complement of I]
long restricted_rank(const IncidencePair& pair, const std::vector<std::uint32_t>& open_edges);

// k'_I on the primal plus the dual's k' on the complementary edges must
// give back k.
bool duality_check(const IncidencePair& primal, const IncidencePair& dual,
                   const std::vector<std::uint32_t>& open_edges);

// Exhaustive minimum weight over ker B \ rowspace(C). Two strategies: a
// Gray-code walk of the whole kernel when 2^(n - rank B) fits the budget,
// and otherwise subsets by increasing weight while binomial totals fit.
// `weight` empty with completed=true means no nontrivial vector exists.
struct BruteResult {
    std::optional<std::size_t> weight;
    bool completed = false;
};
BruteResult brute_force_distance(const BitMatrix& B, const BitMatrix& C,
                                 std::size_t work_limit);

// Randomized information-set search specialized to incidence structure:
// every column of B must have exactly two set rows, making B the incidence
// matrix of a (multi)graph. Each trial grows a uniformly permuted spanning
// forest and harvests the fundamental cycle of every non-tree column,
// keeping the lightest one outside rowspace(C). Returns an upper bound on
// the true distance, exact with high probability when the distance is
// small. Trials use streams derived from (rng_seed, trial).
DistanceEstimate covering_set_distance(const IncidencePair& pair, std::size_t trials,
                                       std::uint64_t rng_seed);

// k plus both distances; exhaustive search under exact_limit, covering-set
// fallback beyond it. k = 0 yields absent distances, flagged exact.
CodeParams code_params(const IncidencePair& pair,
                       std::size_t exact_limit = kDefaultExactLimit,
                       std::size_t cs_trials = 1000, std::uint64_t cs_seed = 1);

// Cluster-counting lower bound on the erasure threshold of the primal,
// exp(-1/(2A)) / (delta_max - 1), from the self-avoiding-walk bound on
// cycles through a point; A is the distance growth rate d >= A ln n.
double peierls_bounds(double delta_max, double A);

// Dual-side analogue bounding 1 - p for the co-cycle threshold:
// exp(-1/A') / (omega - 1) with omega the dual maximal degree.
double peierls_bounds_dual(double omega, double A_prime);

// The long anisotropic torus pins the threshold between exp(-1/A)/3 and
// exp(-1/A); reported alongside the generic bound above.
std::pair<double, double> torus_strip_bracket(double A);

// Smallest r_f >= 1 with 2 r_f + 1 <= dZ <= 2 r_f + 3, when one exists.
std::optional<int> lemma_bracket(std::size_t dZ);

}  // namespace homoperc
