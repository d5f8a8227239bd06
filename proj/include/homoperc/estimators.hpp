#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homoperc/ensemble.hpp"

namespace homoperc {

// One observable of one graph on a p grid, with the metadata the fits need.
// n is the edge count; d enters the ln(n)/d vertical shift term.
struct ObservableCurve {
    std::size_t n = 0;
    double d = 1.0;
    std::vector<double> p, value, se;
};

ObservableCurve pE_curve(const GrandCanonicalCurve& gc, double d = 1.0);
ObservableCurve s1_curve(const GrandCanonicalCurve& gc);

struct FitResult {
    double p0 = 0.0;     // crossing abscissa
    double A0 = 0.0;     // shared ordinate at p0
    double B = 0.0;      // coefficient of ln(n)/d (zero when shift off)
    std::vector<std::vector<double>> coeffs;  // per curve: A_1..A_degree
    double residual = 0.0;                    // weighted SSR at the optimum
    double sigma_p0 = 0.0;
    int degree = 0;
    double window_lo = 0.0, window_hi = 0.0;
    bool shifted = false;
    std::vector<std::string> warnings;
};

// Collective fit value_g(p) = A0 + sum_i A_{i,g} xi^i + [shift] B ln(n_g)/d_g
// with xi = p - p0: an outer 1-D search over p0 (200-point window scan, then
// parabolic refinement) around an inner weighted linear least squares solve
// (weights 1/se^2, weight 1 where se = 0). sigma_p0 comes from the residual
// curvature; replicate-based spreads can be folded in by the caller via
// replicate_spread.
FitResult crossing_fit(const std::vector<ObservableCurve>& curves, int degree,
                       double window_lo, double window_hi, bool shift);

// Sample standard deviation across replicate estimates of the same quantity.
double replicate_spread(const std::vector<double>& values);

struct SlopeFit {
    double alpha = 0.0;
    double sigma_alpha = 0.0;
    double log_b = 0.0;  // intercept of the ln-ln regression
    std::vector<std::string> warnings;
};

// Power-law fit A_{1,n} = b n^alpha over the curves of a crossing fit.
SlopeFit slope_scaling(const FitResult& fit, const std::vector<ObservableCurve>& curves);

struct SizeScalingResult {
    double pc = 0.0;
    double sigma = 0.0;   // spread over omegas
    bool infinite_uncertainty = false;  // single usable graph
    std::vector<double> omegas;         // omegas that produced an intercept
    std::vector<double> per_omega;      // intercept per omega
    std::vector<std::string> warnings;
};

// For each graph and omega solves S1(p) = omega n^(2/3) on the grid by
// monotone interpolation, fits p against x = n^(-1/3) with a polynomial,
// and averages the x = 0 intercepts over omegas.
SizeScalingResult size_scaling_extrapolate(const std::vector<ObservableCurve>& s1_curves,
                                           const std::vector<double>& omegas,
                                           int degree);

constexpr double kDefaultOmegas[3] = {0.25, 0.5, 1.0};

struct RateDeviation {
    std::optional<double> p_low;   // first p with R_E above epsilon
    std::optional<double> p_high;  // first p with R_E above R - epsilon
};

// First-crossing abscissae of the per-edge rank curves. R defaults to each
// graph's own k/n; pass the family's limiting rate (0 for tori) to override.
// The upper crossing is suppressed when R - epsilon <= 0.
std::vector<RateDeviation> rate_deviation_report(
    const std::vector<GrandCanonicalCurve>& curves, double epsilon,
    std::optional<double> R = std::nullopt);

}  // namespace homoperc
