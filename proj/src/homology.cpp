#include "homoperc/homology.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "homoperc/errors.hpp"
#include "homoperc/rng.hpp"

namespace homoperc {

long css_k(const IncidencePair& pair) {
    if (pair.J.cols() != pair.K.cols())
        throw InvalidArgument("css_k: matrices disagree on edge count");
    return static_cast<long>(pair.J.cols()) - static_cast<long>(gf2_rank(pair.J)) -
           static_cast<long>(gf2_rank(pair.K));
}

namespace {

std::vector<std::size_t> complement_of(const std::vector<std::uint32_t>& edges,
                                       std::size_t n) {
    std::vector<bool> in(n, false);
    for (auto e : edges) {
        if (e >= n) throw InvalidArgument("edge index out of range");
        in[e] = true;
    }
    std::vector<std::size_t> out;
    out.reserve(n - edges.size());
    for (std::size_t e = 0; e < n; ++e)
        if (!in[e]) out.push_back(e);
    return out;
}

std::vector<std::size_t> widen(const std::vector<std::uint32_t>& v) {
    return std::vector<std::size_t>(v.begin(), v.end());
}

}  // namespace

long restricted_rank(const IncidencePair& pair, const std::vector<std::uint32_t>& open_edges) {
    const std::size_t n = pair.J.cols();
    auto inside = widen(open_edges);
    auto outside = complement_of(open_edges, n);
    long r = static_cast<long>(open_edges.size());
    r -= static_cast<long>(gf2_rank(pair.K));
    r -= static_cast<long>(gf2_rank(pair.J.select_columns(inside)));
    r += static_cast<long>(gf2_rank(pair.K.select_columns(outside)));
    return r;
}

bool duality_check(const IncidencePair& primal, const IncidencePair& dual,
                   const std::vector<std::uint32_t>& open_edges) {
    const std::size_t n = primal.J.cols();
    auto outside = complement_of(open_edges, n);
    std::vector<std::uint32_t> dual_open(outside.begin(), outside.end());
    return restricted_rank(primal, open_edges) + restricted_rank(dual, dual_open) ==
           css_k(primal);
}

namespace {

// Kernel basis of B from reduced row echelon form.
std::vector<std::vector<std::uint64_t>> kernel_basis(const BitMatrix& B) {
    const std::size_t rows = B.rows(), cols = B.cols();
    BitMatrix m = B;
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rows;
        for (std::size_t r = rank; r < rows; ++r)
            if (m.get(r, c)) { p = r; break; }
        if (p == rows) continue;
        m.swap_rows(rank, p);
        for (std::size_t r = 0; r < rows; ++r)
            if (r != rank && m.get(r, c)) m.row_xor(r, rank);
        pivot_col.push_back(c);
        ++rank;
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;

    const std::size_t wpr = (cols + 63) / 64;
    std::vector<std::vector<std::uint64_t>> basis;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<std::uint64_t> v(wpr, 0);
        v[c / 64] |= 1ULL << (c % 64);
        for (std::size_t i = 0; i < rank; ++i)
            if (m.get(i, c)) v[pivot_col[i] / 64] ^= 1ULL << (pivot_col[i] % 64);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t words_weight(const std::vector<std::uint64_t>& v) {
    std::size_t w = 0;
    for (auto x : v) w += std::popcount(x);
    return w;
}

// Gray-code walk over the whole kernel. Basis is reordered so the low
// counter bits span rowspace(C): a combination lies in rowspace(C) exactly
// when its high (homology) bits vanish, so membership costs nothing.
BruteResult gray_walk(const BitMatrix& B, const BitMatrix& C, std::size_t dim_kernel,
                      const std::vector<std::vector<std::uint64_t>>& raw_basis) {
    const std::size_t wpr = (B.cols() + 63) / 64;
    RowBasis span_c(B.cols());
    std::vector<std::vector<std::uint64_t>> ordered;
    for (std::size_t r = 0; r < C.rows(); ++r) {
        if (span_c.add(C.row(r))) {
            std::vector<std::uint64_t> v(C.row(r), C.row(r) + wpr);
            ordered.push_back(std::move(v));
        }
    }
    const std::size_t c_dim = ordered.size();
    for (const auto& v : raw_basis)
        if (span_c.add(v.data())) ordered.push_back(v);
    if (ordered.size() != dim_kernel)
        throw InvalidArgument("distance search: rowspace(C) not inside ker B");

    const std::uint64_t total = 1ULL << dim_kernel;
    const std::uint64_t h_mask = ~((c_dim < 64 ? (1ULL << c_dim) : 0ULL) - 1ULL);
    std::vector<std::uint64_t> acc(wpr, 0);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::uint64_t x = 1; x < total; ++x) {
        std::size_t flip = static_cast<std::size_t>(std::countr_zero(x));
        const auto& bv = ordered[flip];
        for (std::size_t w = 0; w < wpr; ++w) acc[w] ^= bv[w];
        if (((x ^ (x >> 1)) & h_mask) == 0) continue;  // inside rowspace(C)
        std::size_t wt = words_weight(acc);
        if (wt < best) best = wt;
    }
    BruteResult out;
    out.completed = true;
    if (best != std::numeric_limits<std::size_t>::max()) out.weight = best;
    return out;
}

// Number of weight-w subsets, saturated at cap.
std::size_t binom_capped(std::size_t n, std::size_t w, std::size_t cap) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < w; ++i) {
        if (r > cap) return cap + 1;
        double est = static_cast<double>(r) * static_cast<double>(n - i) /
                     static_cast<double>(i + 1);
        if (est > static_cast<double>(cap) * 2.0) return cap + 1;
        r = r * (n - i) / (i + 1);  // exact: product of i+1 consecutive over (i+1)!
    }
    return r;
}

struct WeightSearch {
    const std::vector<std::vector<std::uint64_t>>& cols;  // column bitsets over rows
    const RowBasis& span_c;
    std::size_t n, rwords, wpr;
    std::vector<std::uint64_t> syndrome;
    std::vector<std::size_t> chosen;
    bool found = false;

    bool dfs(std::size_t start, std::size_t remaining) {
        if (remaining == 0) {
            for (auto x : syndrome)
                if (x) return false;
            std::vector<std::uint64_t> vec(wpr, 0);
            for (auto c : chosen) vec[c / 64] |= 1ULL << (c % 64);
            if (!span_c.contains(vec.data())) { found = true; return true; }
            return false;
        }
        for (std::size_t c = start; c + remaining <= n; ++c) {
            for (std::size_t w = 0; w < rwords; ++w) syndrome[w] ^= cols[c][w];
            chosen.push_back(c);
            if (dfs(c + 1, remaining - 1)) return true;
            chosen.pop_back();
            for (std::size_t w = 0; w < rwords; ++w) syndrome[w] ^= cols[c][w];
        }
        return false;
    }
};

BruteResult weight_ascending(const BitMatrix& B, const BitMatrix& C,
                             std::size_t work_limit) {
    const std::size_t n = B.cols();
    const std::size_t rwords = (B.rows() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> cols(n, std::vector<std::uint64_t>(rwords, 0));
    for (std::size_t r = 0; r < B.rows(); ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (B.get(r, c)) cols[c][r / 64] |= 1ULL << (r % 64);
    RowBasis span_c(n);
    span_c.add_all(C);

    std::size_t spent = 0;
    for (std::size_t w = 1; w <= n; ++w) {
        std::size_t cost = binom_capped(n, w, work_limit);
        if (spent + cost > work_limit) return {std::nullopt, false};
        spent += cost;
        WeightSearch s{cols, span_c, n, rwords, (n + 63) / 64, {}, {}, false};
        s.syndrome.assign(rwords, 0);
        if (s.dfs(0, w)) return {w, true};
    }
    return {std::nullopt, true};  // no nontrivial kernel vector at any weight
}

}  // namespace

BruteResult brute_force_distance(const BitMatrix& B, const BitMatrix& C,
                                 std::size_t work_limit) {
    if (B.cols() != C.cols())
        throw InvalidArgument("distance search: column counts differ");
    auto basis = kernel_basis(B);
    const std::size_t dim = basis.size();
    if (dim == 0) return {std::nullopt, true};
    if (dim < 63 && (std::size_t(1) << dim) <= work_limit)
        return gray_walk(B, C, dim, basis);
    return weight_ascending(B, C, work_limit);
}

DistanceEstimate covering_set_distance(const IncidencePair& pair, std::size_t trials,
                                       std::uint64_t rng_seed) {
    const BitMatrix& B = pair.J;
    const BitMatrix& C = pair.K;
    const std::size_t n = B.cols();
    const std::size_t nv = B.rows();

    DistanceEstimate out;
    out.trials = trials;
    if (css_k(pair) <= 0) {
        out.exact = true;
        return out;
    }

    // columns as graph edges
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ends(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::uint32_t found = 0, u = 0, v = 0;
        for (std::size_t r = 0; r < nv; ++r) {
            if (B.get(r, c)) {
                if (found == 0) u = static_cast<std::uint32_t>(r);
                else if (found == 1) v = static_cast<std::uint32_t>(r);
                ++found;
            }
        }
        if (found != 2)
            throw InvalidArgument("covering_set_distance: column " + std::to_string(c) +
                                  " has " + std::to_string(found) + " entries, want 2");
        ends[c] = {u, v};
    }

    RowBasis span_c(n);
    span_c.add_all(C);
    const std::size_t wpr = (n + 63) / 64;

    std::size_t best = std::numeric_limits<std::size_t>::max();

    std::vector<std::uint32_t> perm(n), parent_vtx(nv), parent_edge(nv), depth(nv);
    std::vector<std::uint32_t> uf(nv);
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> tree(nv);
    auto find = [&](std::uint32_t x) {
        while (uf[x] != x) {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        return x;
    };

    for (std::size_t t = 0; t < trials; ++t) {
        CounterRng rng(derive_stream(rng_seed, t, /*salt=*/0xC0FE));
        for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
        rng.shuffle(perm);

        for (std::size_t v = 0; v < nv; ++v) {
            uf[v] = static_cast<std::uint32_t>(v);
            tree[v].clear();
        }
        std::vector<std::uint32_t> nontree;
        for (std::uint32_t e : perm) {
            auto [u, v] = ends[e];
            std::uint32_t ru = find(u), rv = find(v);
            if (ru == rv) {
                nontree.push_back(e);
            } else {
                uf[ru] = rv;
                tree[u].push_back({v, e});
                tree[v].push_back({u, e});
            }
        }
        const std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();
        std::fill(parent_vtx.begin(), parent_vtx.end(), kNoParent);
        std::fill(depth.begin(), depth.end(), 0);
        std::vector<std::uint32_t> order;
        std::vector<bool> seen(nv, false);
        for (std::uint32_t root = 0; root < nv; ++root) {
            if (seen[root]) continue;
            seen[root] = true;
            order.assign(1, root);
            for (std::size_t head = 0; head < order.size(); ++head) {
                std::uint32_t x = order[head];
                for (auto [y, e] : tree[x]) {
                    if (seen[y]) continue;
                    seen[y] = true;
                    parent_vtx[y] = x;
                    parent_edge[y] = e;
                    depth[y] = depth[x] + 1;
                    order.push_back(y);
                }
            }
        }

        // fundamental cycles, lightest first
        std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> cands;
        for (std::uint32_t e : nontree) {
            auto [u, v] = ends[e];
            std::vector<std::uint32_t> path;
            std::uint32_t x = u, y = v;
            bool aborted = false;
            auto over_budget = [&]() {
                return best != std::numeric_limits<std::size_t>::max() &&
                       path.size() + 1 > best;
            };
            while (depth[x] > depth[y]) {
                path.push_back(parent_edge[x]);
                x = parent_vtx[x];
                if (over_budget()) { aborted = true; break; }
            }
            while (!aborted && depth[y] > depth[x]) {
                path.push_back(parent_edge[y]);
                y = parent_vtx[y];
                if (over_budget()) { aborted = true; break; }
            }
            while (!aborted && x != y) {
                path.push_back(parent_edge[x]);
                path.push_back(parent_edge[y]);
                x = parent_vtx[x];
                y = parent_vtx[y];
                if (over_budget()) { aborted = true; break; }
            }
            if (aborted) continue;
            path.push_back(e);
            cands.push_back({static_cast<std::uint32_t>(path.size()), std::move(path)});
        }
        std::sort(cands.begin(), cands.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::size_t trial_min = std::numeric_limits<std::size_t>::max();
        std::vector<std::uint64_t> vec(wpr);
        for (const auto& [w, edges] : cands) {
            if (best != std::numeric_limits<std::size_t>::max() && w > best) break;
            std::fill(vec.begin(), vec.end(), 0);
            for (auto e : edges) vec[e / 64] ^= 1ULL << (e % 64);
            if (!span_c.contains(vec.data())) {
                trial_min = w;
                break;
            }
        }
        if (trial_min == std::numeric_limits<std::size_t>::max()) continue;
        if (trial_min < best) {
            best = trial_min;
            out.confirmations = 1;
        } else if (trial_min == best) {
            ++out.confirmations;
        }
    }
    if (best != std::numeric_limits<std::size_t>::max()) out.weight = best;
    return out;
}

CodeParams code_params(const IncidencePair& pair, std::size_t exact_limit,
                       std::size_t cs_trials, std::uint64_t cs_seed) {
    if (!rows_orthogonal(pair.J, pair.K))
        throw InvalidArgument("code_params: rows of J and K are not orthogonal");
    CodeParams out;
    out.n = pair.J.cols();
    out.k = css_k(pair);
    if (out.k <= 0) {
        out.dZ_exact = out.dX_exact = true;
        return out;
    }
    auto one_side = [&](const BitMatrix& B, const BitMatrix& C,
                        std::optional<std::size_t>& d, bool& exact, std::size_t& conf) {
        BruteResult br = brute_force_distance(B, C, exact_limit);
        if (br.completed) {
            d = br.weight;
            exact = true;
            conf = 0;
            return;
        }
        DistanceEstimate est = covering_set_distance({B, C}, cs_trials, cs_seed);
        d = est.weight;
        exact = false;
        conf = est.confirmations;
    };
    one_side(pair.J, pair.K, out.dZ, out.dZ_exact, out.dZ_confirmations);
    one_side(pair.K, pair.J, out.dX, out.dX_exact, out.dX_confirmations);
    return out;
}

double peierls_bounds(double delta_max, double A) {
    if (delta_max < 2 || A <= 0)
        throw InvalidArgument("peierls_bounds: need delta_max >= 2, A > 0");
    return std::exp(-1.0 / (2.0 * A)) / (delta_max - 1.0);
}

double peierls_bounds_dual(double omega, double A_prime) {
    if (omega < 2 || A_prime <= 0)
        throw InvalidArgument("peierls_bounds_dual: need omega >= 2, A' > 0");
    return std::exp(-1.0 / A_prime) / (omega - 1.0);
}

std::pair<double, double> torus_strip_bracket(double A) {
    if (A <= 0) throw InvalidArgument("torus_strip_bracket: need A > 0");
    double upper = std::exp(-1.0 / A);
    return {upper / 3.0, upper};
}

std::optional<int> lemma_bracket(std::size_t dZ) {
    if (dZ < 3) return std::nullopt;
    long r = (static_cast<long>(dZ) - 3 + 1) / 2;  // ceil((dZ-3)/2)
    if (r < 1) r = 1;
    return static_cast<int>(r);
}

}  // namespace homoperc
