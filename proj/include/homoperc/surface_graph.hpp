#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homoperc/bit_matrix.hpp"

namespace homoperc {

// Graph embedded in a closed orientable surface. Faces are closed boundary
// walks listed as edge indices; walks carry no orientation sign since all
// homology here is over GF(2).
struct SurfaceGraph {
    // (f, d) = face size, vertex degree for regular tilings; absent otherwise.
    std::optional<std::pair<int, int>> schlafli;
    std::size_t num_vertices = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // u < v
    std::vector<std::vector<std::uint32_t>> faces;

    std::size_t num_edges() const { return edges.size(); }
    std::size_t num_faces() const { return faces.size(); }

    bool operator==(const SurfaceGraph&) const = default;
};

// Primal and dual share the edge index space: dual edge i crosses primal
// edge i, joining the two primal faces on either side.
struct DualPair {
    SurfaceGraph primal;
    SurfaceGraph dual;
};

struct IncidencePair {
    BitMatrix J;  // |V| x n, J[v][e] = 1 iff v is an endpoint of e
    BitMatrix K;  // |F| x n, K[f][e] = 1 iff e lies on the boundary walk of f
};

// Square-lattice torus, Lx*Ly vertices. Sides below 3 would create
// multi-edges and are rejected.
DualPair build_torus(int lx, int ly);

// Requires a closed surface (every edge in exactly two faces, vertex links
// single cycles). Dual faces are the edge cycles around primal vertices.
DualPair build_dual(const SurfaceGraph& g);

IncidencePair incidence_matrices(const SurfaceGraph& g);

// Empty when the graph satisfies every structural invariant; otherwise one
// message per violation.
std::vector<std::string> validate(const SurfaceGraph& g);

void save_graph(const SurfaceGraph& g, std::ostream& out,
                const std::vector<std::string>& comments = {});
void save_graph_file(const SurfaceGraph& g, const std::string& path,
                     const std::vector<std::string>& comments = {});
SurfaceGraph load_graph(std::istream& in, bool validate_loaded = true);
SurfaceGraph load_graph_file(const std::string& path, bool validate_loaded = true);

// Walk rotated/reflected to its lexicographically least form; lets two face
// lists be compared without caring where each cycle starts.
std::vector<std::uint32_t> canonical_walk(const std::vector<std::uint32_t>& walk);

// Equality modulo walk rotation/reflection and face order.
bool same_modulo_walks(const SurfaceGraph& a, const SurfaceGraph& b);

}  // namespace homoperc
