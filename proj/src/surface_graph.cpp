#include "homoperc/surface_graph.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "homoperc/errors.hpp"

namespace homoperc {

namespace {

// Unique common endpoint of two distinct edges of a simple graph, or -1.
long shared_vertex(const SurfaceGraph& g, std::uint32_t e1, std::uint32_t e2) {
    auto [a, b] = g.edges[e1];
    auto [c, d] = g.edges[e2];
    if (a == c || a == d) return a;
    if (b == c || b == d) return b;
    return -1;
}

struct VertexUf {
    std::vector<std::uint32_t> parent;
    explicit VertexUf(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<std::string> validate(const SurfaceGraph& g) {
    std::vector<std::string> bad;
    const std::size_t nv = g.num_vertices;
    const std::size_t ne = g.num_edges();

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> seen;
    for (std::size_t e = 0; e < ne; ++e) {
        auto [u, v] = g.edges[e];
        if (u >= nv || v >= nv) {
            bad.push_back("edge " + std::to_string(e) + ": endpoint out of range");
            continue;
        }
        if (u == v) bad.push_back("edge " + std::to_string(e) + ": loop");
        if (u > v) bad.push_back("edge " + std::to_string(e) + ": endpoints not ordered");
        std::pair<std::uint32_t, std::uint32_t> key{std::min(u, v), std::max(u, v)};
        if (seen.count(key))
            bad.push_back("edge " + std::to_string(e) + ": duplicates edge " +
                          std::to_string(seen[key]));
        else
            seen[key] = e;
    }
    if (!bad.empty()) return bad;  // face checks assume a sane edge list

    std::vector<std::size_t> edge_face_count(ne, 0);
    for (std::size_t fi = 0; fi < g.faces.size(); ++fi) {
        const auto& walk = g.faces[fi];
        std::string where = "face " + std::to_string(fi);
        if (walk.size() < 3) {
            bad.push_back(where + ": fewer than 3 edges");
            continue;
        }
        bool in_range = true;
        for (auto e : walk) {
            if (e >= ne) {
                bad.push_back(where + ": edge index out of range");
                in_range = false;
            }
        }
        if (!in_range) continue;
        {
            auto sorted = walk;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                bad.push_back(where + ": repeated edge in boundary walk");
                continue;
            }
        }
        const std::size_t m = walk.size();
        std::vector<long> corner(m);
        bool closed = true;
        for (std::size_t i = 0; i < m; ++i) {
            corner[i] = shared_vertex(g, walk[i], walk[(i + 1) % m]);
            if (corner[i] < 0) {
                bad.push_back(where + ": consecutive edges share no vertex");
                closed = false;
                break;
            }
        }
        if (closed) {
            for (std::size_t i = 0; i < m; ++i) {
                if (corner[i] == corner[(i + 1) % m]) {
                    bad.push_back(where + ": walk doubles back at vertex " +
                                  std::to_string(corner[i]));
                    break;
                }
            }
        }
        for (auto e : walk) ++edge_face_count[e];
    }
    for (std::size_t e = 0; e < ne; ++e) {
        if (edge_face_count[e] != 2)
            bad.push_back("edge " + std::to_string(e) + ": in " +
                          std::to_string(edge_face_count[e]) + " faces, want 2");
    }

    if (nv > 0) {
        VertexUf uf(nv);
        for (auto [u, v] : g.edges) uf.unite(u, v);
        auto root = uf.find(0);
        for (std::uint32_t v = 1; v < nv; ++v) {
            if (uf.find(v) != root) {
                bad.push_back("not connected (vertex " + std::to_string(v) +
                              " unreachable from vertex 0)");
                break;
            }
        }
    }

    if (g.schlafli) {
        auto [f, d] = *g.schlafli;
        if (f < 3 || d < 3) bad.push_back("schlafli symbols below 3");
        std::vector<std::size_t> deg(nv, 0);
        for (auto [u, v] : g.edges) {
            ++deg[u];
            ++deg[v];
        }
        for (std::size_t v = 0; v < nv; ++v) {
            if (deg[v] != static_cast<std::size_t>(d)) {
                bad.push_back("vertex " + std::to_string(v) + ": degree " +
                              std::to_string(deg[v]) + ", want " + std::to_string(d));
                break;
            }
        }
        for (std::size_t fi = 0; fi < g.faces.size(); ++fi) {
            if (g.faces[fi].size() != static_cast<std::size_t>(f)) {
                bad.push_back("face " + std::to_string(fi) + ": length " +
                              std::to_string(g.faces[fi].size()) + ", want " +
                              std::to_string(f));
                break;
            }
        }
    }
    return bad;
}

DualPair build_dual(const SurfaceGraph& g) {
    {
        auto bad = validate(g);
        if (!bad.empty())
            throw InvalidArgument("build_dual: invalid input graph: " + bad.front());
    }
    const std::size_t ne = g.num_edges();

    // Faces containing each edge.
    std::vector<std::array<std::uint32_t, 2>> efaces(ne, {0, 0});
    std::vector<std::size_t> ecount(ne, 0);
    for (std::size_t fi = 0; fi < g.faces.size(); ++fi)
        for (auto e : g.faces[fi]) efaces[e][ecount[e]++] = static_cast<std::uint32_t>(fi);

    SurfaceGraph dual;
    dual.num_vertices = g.num_faces();
    if (g.schlafli) dual.schlafli = std::pair<int, int>{g.schlafli->second, g.schlafli->first};
    dual.edges.resize(ne);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> dual_seen;
    for (std::size_t e = 0; e < ne; ++e) {
        auto [f1, f2] = efaces[e];
        if (f1 == f2)
            throw InvalidArgument("build_dual: edge " + std::to_string(e) +
                                  " would become a dual loop");
        std::pair<std::uint32_t, std::uint32_t> key{std::min(f1, f2), std::max(f1, f2)};
        auto it = dual_seen.find(key);
        if (it != dual_seen.end())
            throw InvalidArgument("build_dual: edges " + std::to_string(it->second) +
                                  " and " + std::to_string(e) +
                                  " would become dual multi-edges");
        dual_seen[key] = static_cast<std::uint32_t>(e);
        dual.edges[e] = key;
    }

    // Dual face per primal vertex: chain the corners of the incident faces.
    // Each face walk contributes one corner (pair of consecutive edges) at
    // the vertex they share; around a closed-surface vertex these corners
    // link into a single cycle through all incident edges.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> corners(g.num_vertices);
    for (const auto& walk : g.faces) {
        const std::size_t m = walk.size();
        for (std::size_t i = 0; i < m; ++i) {
            std::uint32_t e1 = walk[i], e2 = walk[(i + 1) % m];
            long v = shared_vertex(g, e1, e2);
            corners[static_cast<std::size_t>(v)].push_back({e1, e2});
        }
    }
    dual.faces.resize(g.num_vertices);
    for (std::size_t v = 0; v < g.num_vertices; ++v) {
        auto& cs = corners[v];
        if (cs.empty())
            throw InvalidArgument("build_dual: vertex " + std::to_string(v) + " has no corners");
        // partner edges of each incident edge through the two corners it joins
        std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> link;
        for (auto [e1, e2] : cs) {
            link[e1].push_back(e2);
            link[e2].push_back(e1);
        }
        for (auto& [e, nb] : link)
            if (nb.size() != 2)
                throw InvalidArgument("build_dual: vertex " + std::to_string(v) +
                                      ": edge " + std::to_string(e) +
                                      " not in exactly 2 corners");
        std::uint32_t start = cs.front().first;
        for (auto [e1, e2] : cs) start = std::min({start, e1, e2});
        std::vector<std::uint32_t> cycle;
        std::uint32_t prev = link[start][0];
        std::uint32_t cur = start;
        do {
            cycle.push_back(cur);
            auto& nb = link[cur];
            std::uint32_t next = (nb[0] == prev) ? nb[1] : nb[0];
            prev = cur;
            cur = next;
        } while (cur != start && cycle.size() <= cs.size());
        if (cur != start || cycle.size() != link.size())
            throw InvalidArgument("build_dual: vertex " + std::to_string(v) +
                                  ": link is not a single cycle");
        dual.faces[v] = std::move(cycle);
    }

    {
        auto bad = validate(dual);
        if (!bad.empty())
            throw InvalidArgument("build_dual: constructed dual invalid: " + bad.front());
    }
    return DualPair{g, std::move(dual)};
}

DualPair build_torus(int lx, int ly) {
    if (lx < 3 || ly < 3)
        throw InvalidArgument("build_torus: sides must be at least 3");
    const std::uint32_t Lx = static_cast<std::uint32_t>(lx);
    const std::uint32_t Ly = static_cast<std::uint32_t>(ly);
    const std::uint32_t nv = Lx * Ly;

    SurfaceGraph g;
    g.schlafli = std::pair<int, int>{4, 4};
    g.num_vertices = nv;
    auto vid = [&](std::uint32_t x, std::uint32_t y) { return (y % Ly) * Lx + (x % Lx); };
    auto eh = [&](std::uint32_t x, std::uint32_t y) { return (y % Ly) * Lx + (x % Lx); };
    auto ev = [&](std::uint32_t x, std::uint32_t y) { return nv + (y % Ly) * Lx + (x % Lx); };

    g.edges.resize(2 * nv);
    for (std::uint32_t y = 0; y < Ly; ++y)
        for (std::uint32_t x = 0; x < Lx; ++x) {
            std::uint32_t a = vid(x, y), h = vid(x + 1, y), w = vid(x, y + 1);
            g.edges[eh(x, y)] = {std::min(a, h), std::max(a, h)};
            g.edges[ev(x, y)] = {std::min(a, w), std::max(a, w)};
        }
    g.faces.resize(nv);
    for (std::uint32_t y = 0; y < Ly; ++y)
        for (std::uint32_t x = 0; x < Lx; ++x)
            g.faces[y * Lx + x] = {eh(x, y), ev(x + 1, y), eh(x, y + 1), ev(x, y)};

    return build_dual(g);
}

IncidencePair incidence_matrices(const SurfaceGraph& g) {
    IncidencePair inc{BitMatrix(g.num_vertices, g.num_edges()),
                      BitMatrix(g.num_faces(), g.num_edges())};
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        inc.J.set(g.edges[e].first, e, true);
        inc.J.set(g.edges[e].second, e, true);
    }
    for (std::size_t f = 0; f < g.num_faces(); ++f)
        for (auto e : g.faces[f]) inc.K.flip(f, e);
    return inc;
}

void save_graph(const SurfaceGraph& g, std::ostream& out,
                const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "HPG 1\n";
    if (g.schlafli)
        out << g.schlafli->first << " " << g.schlafli->second << "\n";
    else
        out << "0 0\n";
    out << g.num_vertices << " " << g.num_edges() << " " << g.num_faces() << "\n";
    for (auto [u, v] : g.edges) out << u << " " << v << "\n";
    for (const auto& walk : g.faces) {
        out << walk.size();
        for (auto e : walk) out << " " << e;
        out << "\n";
    }
}

void save_graph_file(const SurfaceGraph& g, const std::string& path,
                     const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open for writing: " + path);
    save_graph(g, out, comments);
}

namespace {

struct LineReader {
    std::istream& in;
    std::size_t lineno = 0;

    // next non-blank, non-comment line
    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t i = line.find_first_not_of(" \t\r");
            if (i == std::string::npos) continue;
            if (line[i] == '#') continue;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("line " + std::to_string(lineno) + ": " + msg);
    }
};

std::vector<long long> parse_ints(LineReader& r, const std::string& line) {
    std::istringstream ss(line);
    std::vector<long long> out;
    long long x;
    while (ss >> x) out.push_back(x);
    std::string rest;
    if (ss.clear(), ss >> rest) r.fail("unexpected token '" + rest + "'");
    return out;
}

}  // namespace

SurfaceGraph load_graph(std::istream& in, bool validate_loaded) {
    LineReader r{in};
    std::string line;

    if (!r.next(line)) r.fail("empty file, expected 'HPG 1'");
    {
        std::istringstream ss(line);
        std::string magic;
        int ver = 0;
        ss >> magic >> ver;
        if (magic != "HPG" || ver != 1) r.fail("expected header 'HPG 1'");
    }

    SurfaceGraph g;
    if (!r.next(line)) r.fail("missing schlafli line");
    {
        auto v = parse_ints(r, line);
        if (v.size() != 2) r.fail("expected 'f d'");
        if (v[0] != 0 || v[1] != 0) {
            if (v[0] < 3 || v[1] < 3) r.fail("schlafli symbols must be 0 or >= 3");
            g.schlafli = std::pair<int, int>{static_cast<int>(v[0]), static_cast<int>(v[1])};
        }
    }

    long long nv = 0, ne = 0, nf = 0;
    if (!r.next(line)) r.fail("missing counts line");
    {
        auto v = parse_ints(r, line);
        if (v.size() != 3) r.fail("expected 'NV NE NF'");
        nv = v[0];
        ne = v[1];
        nf = v[2];
        if (nv < 0 || ne < 0 || nf < 0) r.fail("negative count");
    }
    g.num_vertices = static_cast<std::size_t>(nv);

    g.edges.reserve(static_cast<std::size_t>(ne));
    for (long long e = 0; e < ne; ++e) {
        if (!r.next(line)) r.fail("missing edge " + std::to_string(e) + " of " + std::to_string(ne));
        auto v = parse_ints(r, line);
        if (v.size() != 2) r.fail("expected 'u v'");
        if (v[0] < 0 || v[1] < 0 || v[0] >= nv || v[1] >= nv) r.fail("vertex index out of range");
        if (v[0] >= v[1]) r.fail("edge endpoints must satisfy u < v");
        g.edges.push_back({static_cast<std::uint32_t>(v[0]), static_cast<std::uint32_t>(v[1])});
    }

    g.faces.reserve(static_cast<std::size_t>(nf));
    for (long long f = 0; f < nf; ++f) {
        if (!r.next(line)) r.fail("missing face " + std::to_string(f) + " of " + std::to_string(nf));
        auto v = parse_ints(r, line);
        if (v.empty() || v[0] < 1) r.fail("expected 'm e1 ... em'");
        if (static_cast<long long>(v.size()) != v[0] + 1) r.fail("face edge count mismatch");
        std::vector<std::uint32_t> walk;
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (v[i] < 0 || v[i] >= ne) r.fail("edge index out of range");
            walk.push_back(static_cast<std::uint32_t>(v[i]));
        }
        g.faces.push_back(std::move(walk));
    }

    if (r.next(line)) r.fail("trailing content after last face");

    if (validate_loaded) {
        auto bad = validate(g);
        if (!bad.empty())
            throw ParseError("loaded graph invalid: " + bad.front() +
                             (bad.size() > 1 ? " (+" + std::to_string(bad.size() - 1) + " more)" : ""));
    }
    return g;
}

SurfaceGraph load_graph_file(const std::string& path, bool validate_loaded) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open: " + path);
    return load_graph(in, validate_loaded);
}

std::vector<std::uint32_t> canonical_walk(const std::vector<std::uint32_t>& walk) {
    if (walk.empty()) return walk;
    const std::size_t m = walk.size();
    auto rotation = [&](const std::vector<std::uint32_t>& w, std::size_t s) {
        std::vector<std::uint32_t> out(m);
        for (std::size_t i = 0; i < m; ++i) out[i] = w[(s + i) % m];
        return out;
    };
    std::vector<std::uint32_t> rev(walk.rbegin(), walk.rend());
    std::vector<std::uint32_t> best = walk;
    for (std::size_t s = 0; s < m; ++s) {
        best = std::min(best, rotation(walk, s));
        best = std::min(best, rotation(rev, s));
    }
    return best;
}

bool same_modulo_walks(const SurfaceGraph& a, const SurfaceGraph& b) {
    if (a.schlafli != b.schlafli || a.num_vertices != b.num_vertices ||
        a.edges != b.edges || a.faces.size() != b.faces.size())
        return false;
    std::vector<std::vector<std::uint32_t>> fa, fb;
    for (const auto& w : a.faces) fa.push_back(canonical_walk(w));
    for (const auto& w : b.faces) fb.push_back(canonical_walk(w));
    std::sort(fa.begin(), fa.end());
    std::sort(fb.begin(), fb.end());
    return fa == fb;
}

}  // namespace homoperc
