#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homoperc/surface_graph.hpp"
#include "homoperc/todd_coxeter.hpp"

namespace homoperc {

// Finite {f,d} tiling quotient. The symmetry group <a,b | a^d, b^f, (ab)^2>
// acts on the tiling; adding relators cuts it down to a finite group whose
// elements are flags. Vertices, edges and faces of the quotient are the
// orbits of left multiplication by <a>, <ab> and <b>, with incidence given
// by shared elements. Throws CapacityExceeded when enumeration overruns
// max_cosets and DegenerateQuotient when the result is not a simple closed
// surface graph (collapsed generator orders, loops, multi-edges).
DualPair build_quotient_graph(int d, int f, const std::vector<Word>& extra_relators,
                              std::size_t max_cosets);

// Pseudo random word of total length uniform in [length_min, length_max],
// shaped as u^m for a uniformly chosen divisor m of the length and a freely
// and cyclically reduced u over {a, a^-1, b, b^-1}. Deterministic in seed.
Word random_relator(std::uint64_t seed, std::size_t length_min, std::size_t length_max);

struct FamilyMember {
    DualPair pair;
    Word relator;
    std::uint64_t relator_seed = 0;
};

struct FamilyResult {
    std::vector<FamilyMember> members;       // one per met target, in target order
    std::vector<std::size_t> unmet_targets;  // targets with no usable quotient
};

// Tries relator seeds seed, seed+1, ... for `attempts` rounds, keeping for
// each target the quotient whose edge count lands nearest it (each graph
// used at most once). Capacity and degeneracy failures just use up a round.
FamilyResult generate_family(int d, int f, std::uint64_t seed,
                             const std::vector<std::size_t>& target_sizes,
                             std::size_t max_cosets,
                             std::size_t length_min = 8, std::size_t length_max = 24,
                             std::size_t attempts = 200);

}  // namespace homoperc
