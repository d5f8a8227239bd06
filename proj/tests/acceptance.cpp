// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line with its measured numbers; the exit code is the number of failures.
// Tolerances and runtime budgets are pinned here, next to the checks.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "homoperc/ensemble.hpp"
#include "homoperc/estimators.hpp"
#include "homoperc/homology.hpp"
#include "homoperc/newman_ziff.hpp"
#include "homoperc/surface_graph.hpp"
#include "homoperc/tiling.hpp"

using namespace homoperc;

namespace {

constexpr std::size_t kOracleSubsets = 1000;
constexpr double kOracleBudgetSec = 60.0;

constexpr double kWeightSumTol = 1e-9;
constexpr double kMDoublingTol = 1e-8;

constexpr double kTorusP0Target = 0.500;
constexpr double kTorusP0Tol = 0.005;
constexpr double kTorusBudgetSec = 900.0;

constexpr double kAlphaTarget = 0.375;
constexpr double kAlphaTol = 0.05;

constexpr double kPcSquareLoop55 = 0.25416087;  // site-independent bond threshold
constexpr double kSeparationSigmas = 3.0;
constexpr double kHyperbolicBudgetSec = 1800.0;

constexpr double kSyntheticTol = 1e-6;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    va_list ap;
    va_start(ap, f);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

DualPair quotient55(std::uint64_t relator_seed) {
    return build_quotient_graph(5, 5, {random_relator(relator_seed, 8, 32)}, 3000000);
}

// 1. Exact agreement of the sweep-style Euler-formula rank with the GF(2)
//    restricted rank, and the primal/dual rank duality, over random subsets.
Outcome criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    struct Case {
        const char* name;
        DualPair pair;
    };
    std::vector<Case> cases;
    cases.push_back({"torus 3x3", build_torus(3, 3)});
    cases.push_back({"torus 4x4", build_torus(4, 4)});
    cases.push_back({"tetrahedron", build_quotient_graph(3, 3, {}, 10000)});

    std::mt19937_64 rng(20240817);
    std::size_t checked = 0;
    for (auto& c : cases) {
        auto inc_p = incidence_matrices(c.pair.primal);
        auto inc_d = incidence_matrices(c.pair.dual);
        std::size_t n = c.pair.primal.num_edges();
        for (std::size_t t = 0; t < kOracleSubsets; ++t) {
            std::vector<std::uint32_t> open;
            if (t == 0) {
                // empty subset
            } else if (t == 1) {
                for (std::uint32_t e = 0; e < n; ++e) open.push_back(e);
            } else {
                double density = std::uniform_real_distribution<>(0.0, 1.0)(rng);
                std::bernoulli_distribution take(density);
                for (std::uint32_t e = 0; e < n; ++e)
                    if (take(rng)) open.push_back(e);
            }
            long via_euler = euler_rank(c.pair, open);
            long via_gf2 = restricted_rank(inc_p, open);
            if (via_euler != via_gf2)
                return {false, fmt("%s: euler rank %ld != gf2 rank %ld on subset %zu",
                                   c.name, via_euler, via_gf2, t)};
            if (!duality_check(inc_p, inc_d, open))
                return {false, fmt("%s: rank duality failed on subset %zu", c.name, t)};
            ++checked;
        }
    }
    double el = seconds_since(t0);
    bool in_budget = el < kOracleBudgetSec;
    return {in_budget, fmt("euler rank == gf2 restricted rank and duality held on "
                           "%zu random subsets across 3 graphs [%.1f s%s]",
                           checked, el, in_budget ? "" : ", over budget")};
}

// 2. Sweep endpoints kprime(0) = 0 and kprime(n) = k, unit increments, and
//    monotone indicator curves after convolution. No tolerances.
Outcome criterion2() {
    struct Case {
        const char* name;
        DualPair pair;
    };
    std::vector<Case> cases;
    cases.push_back({"torus 3x3", build_torus(3, 3)});
    cases.push_back({"torus 4x4", build_torus(4, 4)});
    cases.push_back({"torus 4x8", build_torus(4, 8)});
    cases.push_back({"tetrahedron", build_quotient_graph(3, 3, {}, 10000)});
    cases.push_back({"{5,4} quotient", build_quotient_graph(4, 5,
                                                            {random_relator(113, 8, 32)},
                                                            500000)});
    cases.push_back({"{5,5} quotient", quotient55(5078)});

    auto grid = make_p_grid(0.0, 1.0, 0.01);
    std::size_t sweeps_checked = 0;
    for (auto& c : cases) {
        long k = css_k(incidence_matrices(c.pair.primal));
        std::size_t n = c.pair.primal.num_edges();
        for (std::uint64_t s = 0; s < 200; ++s) {
            auto rec = run_sweep(c.pair, k, s);
            if (rec.kprime.front() != 0)
                return {false, fmt("%s sweep %llu: kprime(0) = %ld", c.name,
                                   (unsigned long long)s, rec.kprime.front())};
            if (rec.kprime.back() != k)
                return {false, fmt("%s sweep %llu: kprime(n) = %ld, k = %ld", c.name,
                                   (unsigned long long)s, rec.kprime.back(), k)};
            for (std::size_t x = 0; x < n; ++x) {
                long step = rec.kprime[x + 1] - rec.kprime[x];
                if (step != 0 && step != 1)
                    return {false, fmt("%s sweep %llu: increment %ld at x = %zu",
                                       c.name, (unsigned long long)s, step, x)};
            }
            ++sweeps_checked;
        }
        auto curve = convolve(aggregate(c.pair, k, 300, 97, 2), grid);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            if (curve.PE.value[i + 1] < curve.PE.value[i])
                return {false, fmt("%s: PE not monotone at p = %.3f", c.name, grid[i])};
            if (curve.PA.value[i + 1] > curve.PA.value[i])
                return {false, fmt("%s: PA not monotone at p = %.3f", c.name, grid[i])};
        }
    }
    return {true, fmt("endpoints, unit increments and convolved monotonicity held on "
                      "%zu sweeps across %zu graphs",
                      sweeps_checked, cases.size())};
}

// 3. Binomial window normalization, and insensitivity of convolved curves to
//    doubling the truncation parameter M.
Outcome criterion3() {
    double worst_sum = 0.0;
    for (std::size_t n : {std::size_t(10), std::size_t(100), std::size_t(1000),
                          std::size_t(10000)}) {
        for (double p : {0.001, 0.1, 0.3, 0.5, 0.9, 0.999}) {
            for (double M : {30.0, 100.0, 200.0}) {
                double dev = std::abs(binomial_weights(n, p, M).sum() - 1.0);
                worst_sum = std::max(worst_sum, dev);
            }
        }
    }
    if (worst_sum >= kWeightSumTol)
        return {false, fmt("weight sum deviates by %.3g (tolerance %.0e)", worst_sum,
                           kWeightSumTol)};

    double worst_dbl = 0.0;
    auto grid = make_p_grid(0.2, 0.8, 0.01);
    for (auto& pair : {build_torus(4, 4), build_torus(16, 16)}) {
        long k = css_k(incidence_matrices(pair.primal));
        auto series = aggregate(pair, k, 300, 53, 2);
        auto a = convolve(series, grid, 100.0);
        auto b = convolve(series, grid, 200.0);
        for (auto stat : {&GrandCanonicalCurve::PE, &GrandCanonicalCurve::PA,
                          &GrandCanonicalCurve::RE, &GrandCanonicalCurve::S1,
                          &GrandCanonicalCurve::S2, &GrandCanonicalCurve::S3}) {
            const auto& va = (a.*stat).value;
            const auto& vb = (b.*stat).value;
            for (std::size_t i = 0; i < va.size(); ++i)
                worst_dbl = std::max(worst_dbl, std::abs(va[i] - vb[i]));
        }
    }
    bool pass = worst_dbl < kMDoublingTol;
    return {pass, fmt("max |weight sum - 1| = %.2g (< %.0e), M doubling moved curves "
                      "by at most %.2g (< %.0e)",
                      worst_sum, kWeightSumTol, worst_dbl, kMDoublingTol)};
}

struct TorusFitData {
    FitResult fit;
    std::vector<ObservableCurve> curves;
    double elapsed = 0.0;
    std::string error;
};

// Shared data for criteria 4 and 5: five square tori, ten thousand sweeps
// each, degree-6 collective fit of the PE curves in [0.49, 0.51].
TorusFitData torus_fit_data() {
    TorusFitData out;
    auto t0 = std::chrono::steady_clock::now();
    try {
        auto grid = make_p_grid(0.485, 0.515, 2.5e-4);
        for (int L : {8, 12, 16, 24, 32}) {
            auto pair = build_torus(L, L);
            auto series = aggregate(pair, 2, 10000, 1000 + L, 2);
            out.curves.push_back(pE_curve(convolve(series, grid), L));
        }
        out.fit = crossing_fit(out.curves, 6, 0.49, 0.51, false);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    out.elapsed = seconds_since(t0);
    return out;
}

Outcome criterion4(const TorusFitData& d) {
    if (!d.error.empty()) return {false, "fit failed: " + d.error};
    bool in_tol = std::abs(d.fit.p0 - kTorusP0Target) < kTorusP0Tol;
    bool in_budget = d.elapsed < kTorusBudgetSec;
    return {in_tol && in_budget,
            fmt("square tori L in {8..32}: p0 = %.6f (target %.3f +- %.3f), sigma_fit "
                "= %.1e [%.1f s%s]",
                d.fit.p0, kTorusP0Target, kTorusP0Tol, d.fit.sigma_p0, d.elapsed,
                in_budget ? "" : ", over budget")};
}

Outcome criterion5(const TorusFitData& d) {
    if (!d.error.empty()) return {false, "fit failed: " + d.error};
    SlopeFit s = slope_scaling(d.fit, d.curves);
    bool pass = std::abs(s.alpha - kAlphaTarget) < kAlphaTol;
    return {pass, fmt("slope scaling on the same tori: alpha = %.4f +- %.4f (target "
                      "%.3f +- %.2f)",
                      s.alpha, s.sigma_alpha, kAlphaTarget, kAlphaTol)};
}

// 6. Minimum cycle weights: exhaustive search on small tori, covering-set
//    agreement, and the short direction of an anisotropic torus.
Outcome criterion6() {
    for (int L : {3, 4}) {
        auto inc = incidence_matrices(build_torus(L, L).primal);
        auto brute = brute_force_distance(inc.J, inc.K, kDefaultExactLimit);
        if (!brute.completed || !brute.weight)
            return {false, fmt("torus %dx%d: exhaustive search did not finish", L, L)};
        if (long(*brute.weight) != L)
            return {false, fmt("torus %dx%d: dZ = %zu, expected %d", L, L,
                               *brute.weight, L)};
        auto cover = covering_set_distance(inc, 500, 11);
        if (!cover.weight || *cover.weight != *brute.weight)
            return {false, fmt("torus %dx%d: covering-set dZ disagrees", L, L)};
    }
    auto inc48 = incidence_matrices(build_torus(4, 8).primal);
    auto brute48 = brute_force_distance(inc48.J, inc48.K, kDefaultExactLimit);
    if (!brute48.completed || !brute48.weight || *brute48.weight != 4)
        return {false, "torus 4x8: expected dZ = 4 from exhaustive search"};
    auto cover48 = covering_set_distance(inc48, 500, 11);
    if (!cover48.weight || *cover48.weight != 4)
        return {false, "torus 4x8: expected dZ = 4 from covering-set search"};
    return {true, "dZ(3x3) = 3, dZ(4x4) = 4 exhaustively, covering-set agrees, "
                  "dZ(4x8) = 4"};
}

// 7. Rank formula k = 2 + (1 - 2/d - 2/f) n for generated quotients, checked
//    in integers as d f k = 2 d f + (d f - 2 f - 2 d) n.
Outcome criterion7() {
    struct Case {
        int d, f;
        std::uint64_t seed;
    };
    std::vector<Case> cases = {{5, 5, 5078}, {5, 5, 5005}, {5, 5, 5477},
                               {4, 5, 113},  {7, 3, 110},  {3, 7, 168}};
    std::string seen;
    for (auto [d, f, seed] : cases) {
        auto pair = build_quotient_graph(d, f, {random_relator(seed, 8, 32)}, 3000000);
        long long n = (long long)pair.primal.num_edges();
        long long k = css_k(incidence_matrices(pair.primal));
        if ((long long)d * f * k != 2LL * d * f + ((long long)d * f - 2 * f - 2 * d) * n)
            return {false, fmt("{%d,%d} quotient (seed %llu): n = %lld, k = %lld "
                               "violates the rank formula",
                               f, d, (unsigned long long)seed, n, k)};
        seen += fmt("%s{%d,%d} n=%lld k=%lld", seen.empty() ? "" : ", ", f, d, n, k);
    }
    return {true, "rank formula exact in integer arithmetic: " + seen};
}

// 8. Hyperbolic {5,5} family: the shifted crossing estimate sits below the
//    square-lattice threshold by more than three combined sigma, where the
//    combined sigma is the larger of the fit sigma and the spread over three
//    replicate runs.
Outcome criterion8() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::uint64_t> relator_seeds = {5078, 5005, 5477};
    std::vector<DualPair> pairs;
    std::vector<long> ks;
    std::vector<double> ds;
    std::string family;
    for (auto s : relator_seeds) {
        pairs.push_back(quotient55(s));
        ks.push_back(css_k(incidence_matrices(pairs.back().primal)));
        auto est = covering_set_distance(incidence_matrices(pairs.back().primal), 500,
                                         4242);
        if (!est.weight) return {false, fmt("no distance estimate for seed %llu",
                                            (unsigned long long)s)};
        ds.push_back(double(*est.weight));
        family += fmt("%sn=%zu dZ=%zu", family.empty() ? "" : ", ",
                      pairs.back().primal.num_edges(), *est.weight);
    }

    auto grid = make_p_grid(0.18, 0.32, 5e-4);
    std::vector<double> p0s, sig_fits;
    try {
        for (std::uint64_t master : {9000ull, 9100ull, 9200ull}) {
            std::vector<ObservableCurve> curves;
            for (std::size_t g = 0; g < pairs.size(); ++g) {
                auto series = aggregate(pairs[g], ks[g], 30000,
                                        master + relator_seeds[g], 2);
                curves.push_back(pE_curve(convolve(series, grid), ds[g]));
            }
            auto fit = crossing_fit(curves, 4, 0.22, 0.26, true);
            p0s.push_back(fit.p0);
            sig_fits.push_back(fit.sigma_p0);
        }
    } catch (const std::exception& e) {
        return {false, fmt("replicate fit failed: %s", e.what())};
    }

    double mean_p0 = (p0s[0] + p0s[1] + p0s[2]) / 3.0;
    double sigma = std::max({sig_fits[0], sig_fits[1], sig_fits[2],
                             replicate_spread(p0s)});
    double gap = kPcSquareLoop55 - mean_p0;
    double el = seconds_since(t0);
    bool separated = gap > kSeparationSigmas * sigma;
    bool in_budget = el < kHyperbolicBudgetSec;
    return {separated && in_budget,
            fmt("{5,5} family (%s): shifted p0 = %.5f (replicates %.5f/%.5f/%.5f), "
                "%.5f - p0 = %.4f = %.1f sigma (combined sigma %.1e) [%.1f s%s]",
                family.c_str(), mean_p0, p0s[0], p0s[1], p0s[2], kPcSquareLoop55, gap,
                sigma > 0 ? gap / sigma : INFINITY, sigma, el,
                in_budget ? "" : ", over budget")};
}

// 9. Synthetic recovery: a constructed common crossing and a constructed
//    size-scaling family, both noise free, recovered to 1e-6.
Outcome criterion9() {
    auto grid = make_p_grid(0.285, 0.315, 1e-4);
    std::vector<ObservableCurve> crossing;
    int idx = 0;
    for (double slope : {0.8, 1.6, 2.4}) {
        ObservableCurve c;
        c.n = 100 * std::size_t(++idx);
        c.d = 1.0;
        c.p = grid;
        for (double p : grid) {
            c.value.push_back(0.5 + slope * (p - 0.3));
            c.se.push_back(1e-3);
        }
        crossing.push_back(std::move(c));
    }
    FitResult fit = crossing_fit(crossing, 2, 0.29, 0.31, false);
    if (std::abs(fit.p0 - 0.3) > kSyntheticTol)
        return {false, fmt("constructed crossing at 0.3 recovered as %.8f", fit.p0)};

    auto sgrid = make_p_grid(0.30, 0.44, 1e-3);
    std::vector<ObservableCurve> s1s;
    for (std::size_t n : {std::size_t(1000), std::size_t(8000), std::size_t(27000),
                          std::size_t(64000)}) {
        double x = std::pow(double(n), -1.0 / 3.0);
        ObservableCurve c;
        c.n = n;
        c.p = sgrid;
        for (double p : sgrid) {
            c.value.push_back(std::pow(double(n), 2.0 / 3.0) *
                              (1.0 + 0.3 * (p - 0.37) / x));
            c.se.push_back(1.0);
        }
        s1s.push_back(std::move(c));
    }
    SizeScalingResult sc = size_scaling_extrapolate(s1s, {0.8, 1.0, 1.2}, 2);
    if (std::abs(sc.pc - 0.37) > kSyntheticTol)
        return {false, fmt("constructed scaling point at 0.37 recovered as %.8f",
                           sc.pc)};
    return {true, fmt("crossing fit |p0 - 0.3| = %.1e, size scaling |pc - 0.37| = "
                      "%.1e (both <= 1e-6)",
                      std::abs(fit.p0 - 0.3), std::abs(sc.pc - 0.37))};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int num, const Outcome& o) {
        std::printf("criterion %d: %s  %s\n", num, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    };
    report(1, criterion1());
    report(2, criterion2());
    report(3, criterion3());
    TorusFitData torus = torus_fit_data();
    report(4, criterion4(torus));
    report(5, criterion5(torus));
    report(6, criterion6());
    report(7, criterion7());
    report(8, criterion8());
    report(9, criterion9());
    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures;
}
