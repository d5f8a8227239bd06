#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homoperc/newman_ziff.hpp"

namespace homoperc {

constexpr double kDefaultTruncation = 100.0;  // M, in units of binomial sigma
constexpr double kDefaultGridStep = 1e-3;
constexpr std::size_t kDefaultGridPoints = 1000;

// Binomial weights C(n,x) p^x (1-p)^(n-x) on the window |x - pn| < M sigma,
// clipped to [0, n]. w[i] is the weight of x = x_min + i.
struct BinomialWindow {
    std::size_t x_min = 0;
    std::vector<double> w;
    double sum() const;
};

BinomialWindow binomial_weights(std::size_t n, double p, double M);

struct CurveStat {
    std::vector<double> value;
    std::vector<double> se;
};

// Fixed-p observables obtained from fixed-x means by binomial mixing.
struct GrandCanonicalCurve {
    std::string graph_id;
    std::size_t n = 0;
    long k = 0;
    std::size_t sweeps = 0;
    double M = 0;
    std::vector<double> p;
    CurveStat PE, PA, RE, S1, S2, S3;  // RE = mean homology rank per edge
};

std::vector<double> make_p_grid(double p_min, double p_max, double dp);

// A_p = sum_x w(x) A_x per observable. A single sweep spans every x, so
// errors at different x are strongly correlated: for PE and PA the exact
// sweep-to-sweep variance of the mixture follows from the step-position
// distribution encoded by the means, while the other observables carry the
// perfect-correlation bound sum_x w(x) se_x. When the input indicator means
// are monotone in x the output curves are monotone in p up to accumulation
// noise, which is clamped away; larger violations indicate broken weights.
GrandCanonicalCurve convolve(const CanonicalSeries& series,
                             const std::vector<double>& p_grid,
                             double M = kDefaultTruncation);

}  // namespace homoperc
