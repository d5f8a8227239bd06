#include "homoperc/tiling.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <utility>

#include "homoperc/errors.hpp"
#include "homoperc/rng.hpp"

namespace homoperc {

namespace {

// Left multiplication by s as a permutation of group elements, read off a
// regular (trivial-subgroup) coset table. Element x reached from the
// identity by right factors t1..tk satisfies s*x = (s*e)*t1..tk, so the
// permutation propagates along the table's right action.
std::vector<std::uint32_t> left_mult(const CosetTable& t, int s) {
    const std::uint32_t n = static_cast<std::uint32_t>(t.count);
    std::vector<std::uint32_t> L(n, n);
    std::vector<std::uint32_t> bfs{0};
    L[0] = t.act(0, s);
    for (std::size_t head = 0; head < bfs.size(); ++head) {
        std::uint32_t x = bfs[head];
        for (int g = 0; g < 4; ++g) {
            std::uint32_t y = t.act(x, g);
            if (L[y] == n) {
                L[y] = t.act(L[x], g);
                bfs.push_back(y);
            }
        }
    }
    return L;
}

// Orbit ids of a permutation, orbits numbered by smallest member. Returns
// the common orbit size, or 0 when orbits have mixed sizes.
std::size_t orbit_split(const std::vector<std::uint32_t>& perm,
                        std::vector<std::uint32_t>& orbit_id,
                        std::vector<std::uint32_t>& orbit_min) {
    const std::uint32_t n = static_cast<std::uint32_t>(perm.size());
    orbit_id.assign(n, n);
    orbit_min.clear();
    std::size_t common = 0;
    bool mixed = false;
    for (std::uint32_t x = 0; x < n; ++x) {
        if (orbit_id[x] != n) continue;
        std::uint32_t id = static_cast<std::uint32_t>(orbit_min.size());
        orbit_min.push_back(x);
        std::size_t size = 0;
        std::uint32_t y = x;
        do {
            orbit_id[y] = id;
            y = perm[y];
            ++size;
        } while (y != x);
        if (common == 0) common = size;
        else if (common != size) mixed = true;
    }
    return mixed ? 0 : common;
}

}  // namespace

DualPair build_quotient_graph(int d, int f, const std::vector<Word>& extra_relators,
                              std::size_t max_cosets) {
    if (d < 3 || f < 3)
        throw InvalidArgument("build_quotient_graph: need d, f >= 3");

    GroupPresentation p = van_dyck(d, f, extra_relators);
    CosetTable t = todd_coxeter(p, {}, max_cosets);

    std::vector<std::uint32_t> La = left_mult(t, kGenA);
    std::vector<std::uint32_t> Lb = left_mult(t, kGenB);
    std::vector<std::uint32_t> Lab(t.count);
    for (std::uint32_t x = 0; x < t.count; ++x) Lab[x] = La[Lb[x]];

    std::vector<std::uint32_t> vid, vmin, eid, emin, fid, fmin;
    std::size_t a_ord = orbit_split(La, vid, vmin);
    std::size_t ab_ord = orbit_split(Lab, eid, emin);
    std::size_t b_ord = orbit_split(Lb, fid, fmin);
    if (a_ord != static_cast<std::size_t>(d))
        throw DegenerateQuotient("generator a has order " + std::to_string(a_ord) +
                                 " on the quotient, want " + std::to_string(d));
    if (b_ord != static_cast<std::size_t>(f))
        throw DegenerateQuotient("generator b has order " + std::to_string(b_ord) +
                                 " on the quotient, want " + std::to_string(f));
    if (ab_ord != 2)
        throw DegenerateQuotient("generator ab has order " + std::to_string(ab_ord) +
                                 " on the quotient, want 2");

    SurfaceGraph g;
    g.schlafli = std::pair<int, int>{f, d};
    g.num_vertices = vmin.size();

    g.edges.resize(emin.size());
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> seen;
    for (std::uint32_t e = 0; e < emin.size(); ++e) {
        std::uint32_t x = emin[e];
        std::uint32_t u = vid[x], v = vid[Lab[x]];
        if (u == v)
            throw DegenerateQuotient("edge " + std::to_string(e) + " is a loop");
        std::pair<std::uint32_t, std::uint32_t> key{std::min(u, v), std::max(u, v)};
        auto it = seen.find(key);
        if (it != seen.end())
            throw DegenerateQuotient("edges " + std::to_string(it->second) + " and " +
                                     std::to_string(e) + " are parallel");
        seen[key] = e;
        g.edges[e] = key;
    }

    g.faces.resize(fmin.size());
    for (std::uint32_t fi = 0; fi < fmin.size(); ++fi) {
        std::vector<std::uint32_t> walk;
        walk.reserve(static_cast<std::size_t>(f));
        std::uint32_t x = fmin[fi];
        do {
            walk.push_back(eid[x]);
            x = Lb[x];
        } while (x != fmin[fi]);
        auto sorted = walk;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw DegenerateQuotient("face " + std::to_string(fi) +
                                     " repeats an edge");
        g.faces[fi] = std::move(walk);
    }

    {
        auto bad = validate(g);
        if (!bad.empty())
            throw DegenerateQuotient("quotient graph invalid: " + bad.front());
    }
    try {
        return build_dual(g);
    } catch (const InvalidArgument& e) {
        throw DegenerateQuotient(std::string("dual construction failed: ") + e.what());
    }
}

Word random_relator(std::uint64_t seed, std::size_t length_min, std::size_t length_max) {
    if (length_min < 1 || length_min > length_max)
        throw InvalidArgument("random_relator: need 1 <= length_min <= length_max");
    CounterRng rng(derive_stream(seed, 0, /*salt=*/0x52454C41ULL));
    std::size_t len = length_min + rng.next_below(length_max - length_min + 1);

    // A relator of the shape u^m with u cyclically reduced survives the
    // quotient search far more often than a flat random string: u acts as a
    // translation of the tiling and killing its m-th power wraps the
    // tiling onto a finite cover whose size grows with m. Plain strings
    // (m = 1) stay in the mix.
    std::vector<std::size_t> divisors;
    for (std::size_t m = 1; m <= len; ++m)
        if (len % m == 0) divisors.push_back(m);
    std::size_t m = divisors[rng.next_below(divisors.size())];
    std::size_t ulen = len / m;

    Word u;
    while (u.size() < ulen) {
        int g = static_cast<int>(rng.next_below(4));
        if (!u.empty() && u.back() == inverse_gen(g)) continue;
        if (u.size() + 1 == ulen && ulen > 1 && g == inverse_gen(u.front())) continue;
        u.push_back(g);
    }
    Word w;
    w.reserve(len);
    for (std::size_t i = 0; i < m; ++i) w.insert(w.end(), u.begin(), u.end());
    return w;
}

FamilyResult generate_family(int d, int f, std::uint64_t seed,
                             const std::vector<std::size_t>& target_sizes,
                             std::size_t max_cosets,
                             std::size_t length_min, std::size_t length_max,
                             std::size_t attempts) {
    struct Candidate {
        DualPair pair;
        Word relator;
        std::uint64_t relator_seed;
        bool used = false;
    };
    std::vector<Candidate> pool;
    for (std::size_t i = 0; i < attempts; ++i) {
        std::uint64_t s = seed + i;
        Word w = random_relator(s, length_min, length_max);
        try {
            DualPair dp = build_quotient_graph(d, f, {w}, max_cosets);
            pool.push_back({std::move(dp), std::move(w), s, false});
        } catch (const CapacityExceeded&) {
        } catch (const DegenerateQuotient&) {
        }
    }

    FamilyResult out;
    for (std::size_t target : target_sizes) {
        long long best = -1;
        for (std::size_t c = 0; c < pool.size(); ++c) {
            if (pool[c].used) continue;
            auto gap = [&](std::size_t c2) {
                return std::llabs(static_cast<long long>(pool[c2].pair.primal.num_edges()) -
                                  static_cast<long long>(target));
            };
            if (best < 0 || gap(c) < gap(static_cast<std::size_t>(best))) best = static_cast<long long>(c);
        }
        if (best < 0) {
            out.unmet_targets.push_back(target);
            continue;
        }
        auto& c = pool[static_cast<std::size_t>(best)];
        c.used = true;
        out.members.push_back({c.pair, c.relator, c.relator_seed});
    }
    return out;
}

}  // namespace homoperc
