#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "homoperc/errors.hpp"
#include "homoperc/homology.hpp"
#include "homoperc/newman_ziff.hpp"
#include "homoperc/rng.hpp"
#include "homoperc/surface_graph.hpp"
#include "homoperc/tiling.hpp"

using namespace homoperc;

namespace {

// next k-combination of {0..n-1} in lexicographic order
bool next_combination(std::vector<std::uint32_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] + (k - i) < n) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("union-find merge accounting") {
    UnionFind uf(10);
    CHECK(uf.components() == 10);
    CHECK(uf.top3() == std::array<std::size_t, 3>{1, 1, 1});
    CHECK(uf.unite(0, 1));
    CHECK(uf.components() == 9);
    CHECK_FALSE(uf.unite(1, 0));
    CHECK(uf.components() == 9);
    CHECK(uf.unite(1, 2));
    CHECK(uf.size_of(0) == 3);
    CHECK(uf.unite(4, 5));
    CHECK(uf.top3() == std::array<std::size_t, 3>{3, 2, 1});

    // against a naive recount over random unions
    CounterRng rng(derive_stream(5, 0));
    UnionFind big(64);
    std::size_t comps = 64;
    for (int step = 0; step < 200; ++step) {
        auto a = static_cast<std::uint32_t>(rng.next_below(64));
        auto b = static_cast<std::uint32_t>(rng.next_below(64));
        bool merged = big.unite(a, b);
        if (merged) --comps;
        CHECK(big.components() == comps);
        std::vector<std::size_t> rootsize;
        std::size_t total = 0;
        for (std::uint32_t v = 0; v < 64; ++v) {
            if (big.find(v) == v) {
                rootsize.push_back(big.size_of(v));
                total += big.size_of(v);
            }
        }
        CHECK(total == 64);
        CHECK(rootsize.size() == comps);
        std::sort(rootsize.rbegin(), rootsize.rend());
        std::array<std::size_t, 3> expect{0, 0, 0};
        for (std::size_t i = 0; i < 3 && i < rootsize.size(); ++i) expect[i] = rootsize[i];
        CHECK(big.top3() == expect);
    }
}

TEST_CASE("sweep endpoints and monotone structure on the 3x3 torus") {
    auto pair = build_torus(3, 3);
    auto inc = incidence_matrices(pair.primal);
    const long k = css_k(inc);
    const std::size_t n = pair.primal.num_edges();

    for (std::uint64_t s = 0; s < 50; ++s) {
        auto rec = run_sweep(pair, k, derive_stream(77, s));
        CHECK(rec.kprime[0] == 0);
        CHECK(rec.kprime[n] == k);
        CHECK(rec.Kopen[0] == pair.primal.num_vertices);
        CHECK(rec.Kopen[n] == 1);
        CHECK(rec.Kdualclosed[n] == pair.dual.num_vertices);
        CHECK(rec.Kdualclosed[0] == 1);
        CHECK(rec.S1[n] == pair.primal.num_vertices);
        CHECK(rec.S1[0] == 1);

        long increments = 0;
        std::size_t first_positive = n + 1;
        for (std::size_t x = 1; x <= n; ++x) {
            long step = rec.kprime[x] - rec.kprime[x - 1];
            CHECK(step >= 0);
            CHECK(step <= 1);
            increments += step;
            if (rec.kprime[x] > 0 && first_positive > n) first_positive = x;
            // an edge joining two clusters never creates a cycle
            if (rec.Kopen[x] < rec.Kopen[x - 1]) CHECK(step == 0);
            CHECK(rec.S1[x] >= rec.S2[x]);
            CHECK(rec.S2[x] >= rec.S3[x]);
            CHECK(rec.S1[x] >= rec.S1[x - 1]);
        }
        CHECK(increments == k);
        CHECK(first_positive >= 3);  // dZ of the 3x3 torus
    }
}

TEST_CASE("sweep rank equals the GF(2) restricted rank at every prefix") {
    auto pair = build_torus(3, 3);
    auto inc = incidence_matrices(pair.primal);
    const long k = css_k(inc);
    const std::size_t n = pair.primal.num_edges();
    for (std::uint64_t s = 0; s < 1000; ++s) {
        auto rec = run_sweep(pair, k, derive_stream(31, s));
        std::vector<std::uint32_t> open;
        CHECK(rec.kprime[0] == restricted_rank(inc, open));
        for (std::size_t x = 1; x <= n; ++x) {
            open.push_back(rec.order[x - 1]);
            CHECK(rec.kprime[x] == restricted_rank(inc, open));
        }
    }
}

TEST_CASE("single-subset rank helper agrees with sweeps and the GF(2) oracle") {
    auto pair = build_torus(4, 4);
    auto inc = incidence_matrices(pair.primal);
    const std::size_t n = pair.primal.num_edges();
    CounterRng rng(derive_stream(8, 0));
    for (int t = 0; t < 200; ++t) {
        std::vector<std::uint32_t> open;
        for (std::size_t e = 0; e < n; ++e)
            if (rng.next() & 1) open.push_back(static_cast<std::uint32_t>(e));
        CHECK(euler_rank(pair, open) == restricted_rank(inc, open));
    }
}

TEST_CASE("aggregated means match the exhaustive canonical expectation") {
    auto pair = build_torus(3, 3);
    auto inc = incidence_matrices(pair.primal);
    const long k = css_k(inc);
    const std::size_t n = pair.primal.num_edges();

    auto series = aggregate(pair, k, 100000, 12345);
    REQUIRE(series.kprime.mean.size() == n + 1);
    CHECK(series.n == n);
    CHECK(series.sweeps == 100000);

    for (std::size_t x = 0; x <= 6; ++x) {
        double sum_rank = 0, count = 0, positive = 0;
        if (x == 0) {
            sum_rank = 0;
            count = 1;
        } else {
            std::vector<std::uint32_t> c(x);
            std::iota(c.begin(), c.end(), 0);
            do {
                long r = restricted_rank(inc, c);
                sum_rank += static_cast<double>(r);
                positive += r > 0 ? 1 : 0;
                count += 1;
            } while (next_combination(c, n));
        }
        double exact_mean = sum_rank / count;
        double exact_pE = positive / count;
        CHECK(std::abs(series.kprime.mean[x] - exact_mean) <=
              4 * series.kprime.se[x] + 1e-12);
        CHECK(std::abs(series.pE.mean[x] - exact_pE) <= 4 * series.pE.se[x] + 1e-12);
    }
    // exact endpoints
    CHECK(series.kprime.mean[0] == 0.0);
    CHECK(series.kprime.mean[n] == static_cast<double>(k));
    CHECK(series.kprime.se[n] == 0.0);
    CHECK(series.pE.mean[n] == 1.0);
    CHECK(series.pA.mean[0] == 1.0);
    CHECK(series.pA.mean[n] == 0.0);
}

TEST_CASE("indicator means are monotone and bounded") {
    auto pair = build_torus(4, 4);
    const long k = css_k(incidence_matrices(pair.primal));
    auto series = aggregate(pair, k, 2000, 777);
    const std::size_t n = pair.primal.num_edges();
    for (std::size_t x = 0; x <= n; ++x) {
        CHECK(series.pE.mean[x] >= 0.0);
        CHECK(series.pE.mean[x] <= 1.0);
        CHECK(series.pA.mean[x] >= 0.0);
        CHECK(series.pA.mean[x] <= 1.0);
        if (x > 0) {
            CHECK(series.pE.mean[x] >= series.pE.mean[x - 1]);
            CHECK(series.pA.mean[x] <= series.pA.mean[x - 1]);
        }
    }
}

TEST_CASE("single sweep aggregation reports zero standard error") {
    auto pair = build_torus(3, 3);
    const long k = css_k(incidence_matrices(pair.primal));
    auto series = aggregate(pair, k, 1, 5);
    for (double se : series.kprime.se) CHECK(se == 0.0);
    for (double se : series.S1.se) CHECK(se == 0.0);
}

TEST_CASE("aggregation is bit-identical across thread counts") {
    auto pair = build_torus(4, 4);
    const long k = css_k(incidence_matrices(pair.primal));
    auto one = aggregate(pair, k, 1000, 2718, 1);
    auto four = aggregate(pair, k, 1000, 2718, 4);
    auto eight = aggregate(pair, k, 1000, 2718, 8);
    CHECK(one.kprime.mean == four.kprime.mean);
    CHECK(one.kprime.se == four.kprime.se);
    CHECK(one.pE.mean == four.pE.mean);
    CHECK(one.pA.mean == four.pA.mean);
    CHECK(one.S1.mean == eight.S1.mean);
    CHECK(one.S2.se == eight.S2.se);
    CHECK(one.S3.mean == eight.S3.mean);
    CHECK(one.pE.se == eight.pE.se);
}

TEST_CASE("sweeps and aggregation reject bad arguments") {
    auto pair = build_torus(3, 3);
    const long k = css_k(incidence_matrices(pair.primal));
    CHECK_THROWS_AS(aggregate(pair, k, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(aggregate(pair, k, 10, 1, 0), InvalidArgument);
    CHECK_THROWS_AS(euler_rank(pair, {99}), InvalidArgument);
    // wrong k is caught by the endpoint cross-check
    CHECK_THROWS(run_sweep(pair, k + 1, derive_stream(1, 0)));
}

TEST_CASE("hyperbolic quotient sweeps satisfy the same structure") {
    auto fam = generate_family(5, 5, 12345, {300}, 300000, 8, 24, 60);
    REQUIRE(fam.members.size() == 1);
    const auto& pair = fam.members[0].pair;
    auto inc = incidence_matrices(pair.primal);
    const long k = css_k(inc);
    REQUIRE(k >= 1);
    const std::size_t n = pair.primal.num_edges();
    auto rec = run_sweep(pair, k, derive_stream(9, 0));
    CHECK(rec.kprime[0] == 0);
    CHECK(rec.kprime[n] == k);
    for (std::size_t x = 1; x <= n; ++x) {
        long step = rec.kprime[x] - rec.kprime[x - 1];
        CHECK(step >= 0);
        CHECK(step <= 1);
    }
    // spot-check a few prefixes against the GF(2) oracle
    for (std::size_t x : {n / 4, n / 2, 3 * n / 4}) {
        std::vector<std::uint32_t> open(rec.order.begin(),
                                        rec.order.begin() + static_cast<long>(x));
        CHECK(rec.kprime[x] == restricted_rank(inc, open));
    }
}
