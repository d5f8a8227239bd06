#include "homoperc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homoperc/errors.hpp"

namespace homoperc {

ObservableCurve pE_curve(const GrandCanonicalCurve& gc, double d) {
    return {gc.n, d, gc.p, gc.PE.value, gc.PE.se};
}

ObservableCurve s1_curve(const GrandCanonicalCurve& gc) {
    return {gc.n, 1.0, gc.p, gc.S1.value, gc.S1.se};
}

namespace {

// Gaussian elimination with partial pivoting on a dense m x m system.
// The normal matrices here mix wildly different column scales (powers of a
// small xi), so rows and columns are rescaled to a unit diagonal first.
bool solve_dense(std::vector<double>& M, std::vector<double>& rhs, std::size_t m) {
    std::vector<double> s(m);
    for (std::size_t a = 0; a < m; ++a) {
        const double diag = M[a * m + a];
        if (!(diag > 0.0) || !std::isfinite(diag)) return false;
        s[a] = 1.0 / std::sqrt(diag);
    }
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) M[a * m + b] *= s[a] * s[b];
        rhs[a] *= s[a];
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        double best = std::abs(M[col * m + col]);
        for (std::size_t r = col + 1; r < m; ++r) {
            double a = std::abs(M[r * m + col]);
            if (a > best) {
                best = a;
                piv = r;
            }
        }
        if (best < 1e-12) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < m; ++c) std::swap(M[piv * m + c], M[col * m + c]);
            std::swap(rhs[piv], rhs[col]);
        }
        const double d = M[col * m + col];
        for (std::size_t r = col + 1; r < m; ++r) {
            double f = M[r * m + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < m; ++c) M[r * m + c] -= f * M[col * m + c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t col = m; col-- > 0;) {
        double acc = rhs[col];
        for (std::size_t c = col + 1; c < m; ++c) acc -= M[col * m + c] * rhs[c];
        rhs[col] = acc / M[col * m + col];
    }
    for (std::size_t a = 0; a < m; ++a) rhs[a] *= s[a];
    return true;
}

struct WindowPoint {
    std::size_t curve;
    double p, y, w;
};

struct InnerFit {
    std::vector<double> beta;
    double residual = 0.0;
};

// Weighted least squares for the crossing model at fixed p0.
InnerFit inner_solve(const std::vector<ObservableCurve>& curves,
                     const std::vector<WindowPoint>& pts, int degree, bool shift,
                     double p0) {
    const std::size_t G = curves.size();
    const std::size_t off = 1 + (shift ? 1 : 0);
    const std::size_t m = off + G * static_cast<std::size_t>(degree);
    std::vector<double> M(m * m, 0.0), rhs(m, 0.0), row(m);
    for (const auto& pt : pts) {
        std::fill(row.begin(), row.end(), 0.0);
        row[0] = 1.0;
        if (shift)
            row[1] = std::log(static_cast<double>(curves[pt.curve].n)) / curves[pt.curve].d;
        const double xi = pt.p - p0;
        double power = 1.0;
        const std::size_t base = off + pt.curve * static_cast<std::size_t>(degree);
        for (int i = 0; i < degree; ++i) {
            power *= xi;
            row[base + static_cast<std::size_t>(i)] = power;
        }
        for (std::size_t a = 0; a < m; ++a) {
            if (row[a] == 0.0) continue;
            const double wa = pt.w * row[a];
            for (std::size_t b = a; b < m; ++b) M[a * m + b] += wa * row[b];
            rhs[a] += wa * pt.y;
        }
    }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < a; ++b) M[a * m + b] = M[b * m + a];

    InnerFit fit;
    fit.beta = rhs;
    if (!solve_dense(M, fit.beta, m))
        throw FitFailure("crossing_fit: singular inner system (degenerate window)");

    for (const auto& pt : pts) {
        double pred = fit.beta[0];
        if (shift)
            pred += fit.beta[1] * std::log(static_cast<double>(curves[pt.curve].n)) /
                    curves[pt.curve].d;
        const double xi = pt.p - p0;
        double power = 1.0;
        const std::size_t base = off + pt.curve * static_cast<std::size_t>(degree);
        for (int i = 0; i < degree; ++i) {
            power *= xi;
            pred += fit.beta[base + static_cast<std::size_t>(i)] * power;
        }
        const double r = pt.y - pred;
        fit.residual += pt.w * r * r;
    }
    return fit;
}

}  // namespace

FitResult crossing_fit(const std::vector<ObservableCurve>& curves, int degree,
                       double window_lo, double window_hi, bool shift) {
    if (curves.size() < 2) throw InvalidArgument("crossing_fit: need at least 2 curves");
    if (degree < 1) throw InvalidArgument("crossing_fit: degree must be >= 1");
    if (!(window_lo < window_hi)) throw InvalidArgument("crossing_fit: empty window");

    std::vector<WindowPoint> pts;
    for (std::size_t g = 0; g < curves.size(); ++g) {
        const auto& c = curves[g];
        if (c.p.empty() || c.p.front() > window_lo + 1e-12 ||
            c.p.back() < window_hi - 1e-12)
            throw InvalidArgument("crossing_fit: window not covered by curve grid");
        std::size_t in_window = 0;
        for (std::size_t j = 0; j < c.p.size(); ++j) {
            if (c.p[j] < window_lo - 1e-12 || c.p[j] > window_hi + 1e-12) continue;
            double w = c.se[j] > 0.0 ? 1.0 / (c.se[j] * c.se[j]) : 1.0;
            pts.push_back({g, c.p[j], c.value[j], w});
            ++in_window;
        }
        if (in_window < static_cast<std::size_t>(degree) + 2)
            throw FitFailure("crossing_fit: too few grid points in window");
    }

    auto residual_at = [&](double p0) {
        return inner_solve(curves, pts, degree, shift, p0).residual;
    };

    // outer scan
    const int kScan = 200;
    std::vector<double> scan_p(kScan), scan_r(kScan);
    for (int i = 0; i < kScan; ++i) {
        scan_p[i] = window_lo + (window_hi - window_lo) * (static_cast<double>(i) + 0.5) /
                                    static_cast<double>(kScan);
        scan_r[i] = residual_at(scan_p[i]);
    }
    int best = 0;
    for (int i = 1; i < kScan; ++i)
        if (scan_r[i] < scan_r[best]) best = i;

    FitResult out;
    out.degree = degree;
    out.window_lo = window_lo;
    out.window_hi = window_hi;
    out.shifted = shift;

    std::vector<std::pair<double, double>> minima;  // (residual, p)
    for (int i = 1; i + 1 < kScan; ++i)
        if (scan_r[i] < scan_r[i - 1] && scan_r[i] < scan_r[i + 1])
            minima.push_back({scan_r[i], scan_p[i]});
    if (minima.size() > 1) {
        std::sort(minima.begin(), minima.end());
        out.warnings.push_back(
            "non-unimodal residual in p0: minima near p0 = " +
            std::to_string(minima[0].second) + " and p0 = " +
            std::to_string(minima[1].second));
    }

    // parabolic refinement inside the bracketing triplet
    double a = scan_p[std::max(0, best - 1)];
    double c = scan_p[std::min(kScan - 1, best + 1)];
    double b = scan_p[best];
    double fa = residual_at(a), fb = scan_r[best], fc = residual_at(c);
    if (best == 0) {
        a = window_lo;
        fa = residual_at(a);
    }
    if (best == kScan - 1) {
        c = window_hi;
        fc = residual_at(c);
    }
    for (int it = 0; it < 60 && c - a > 1e-13; ++it) {
        const double d1 = (b - a) * (fb - fc);
        const double d2 = (b - c) * (fb - fa);
        double v;
        const double denom = 2.0 * (d1 - d2);
        if (std::abs(denom) > 0.0) {
            v = b - ((b - a) * d1 - (b - c) * d2) / denom;
        } else {
            v = 0.5 * (a + c);
        }
        if (!(v > a && v < c) || v == b) v = b + 0.382 * ((c - b > b - a) ? (c - b) : (a - b));
        if (v == b) break;
        const double fv = residual_at(v);
        if (v < b) {
            if (fv < fb) {
                c = b;
                fc = fb;
                b = v;
                fb = fv;
            } else {
                a = v;
                fa = fv;
            }
        } else {
            if (fv < fb) {
                a = b;
                fa = fb;
                b = v;
                fb = fv;
            } else {
                c = v;
                fc = fv;
            }
        }
    }

    out.p0 = std::clamp(b, window_lo, window_hi);
    InnerFit fin = inner_solve(curves, pts, degree, shift, out.p0);
    out.residual = fin.residual;
    out.A0 = fin.beta[0];
    out.B = shift ? fin.beta[1] : 0.0;
    const std::size_t off = 1 + (shift ? 1 : 0);
    out.coeffs.assign(curves.size(), std::vector<double>(degree, 0.0));
    for (std::size_t g = 0; g < curves.size(); ++g)
        for (int i = 0; i < degree; ++i)
            out.coeffs[g][static_cast<std::size_t>(i)] =
                fin.beta[off + g * static_cast<std::size_t>(degree) +
                         static_cast<std::size_t>(i)];

    // profile curvature: residual ~ min + 0.5 R'' (p0 - p*)^2, sigma from
    // the chi-square unit-increase rule
    const double h = std::max(1e-6, (window_hi - window_lo) * 1e-4);
    const double r_plus = residual_at(std::min(out.p0 + h, window_hi));
    const double r_minus = residual_at(std::max(out.p0 - h, window_lo));
    const double curv = (r_plus + r_minus - 2.0 * out.residual) / (h * h);
    if (curv > 0.0) {
        out.sigma_p0 = std::sqrt(2.0 / curv);
    } else {
        out.sigma_p0 = 0.0;
        out.warnings.push_back("flat residual at minimum; sigma_p0 unreliable");
    }

    // data-quality note when the shift lever arm is poor
    if (shift) {
        double lo = std::numeric_limits<double>::max(), hi = 0.0;
        for (const auto& cv : curves) {
            double lever = std::log(static_cast<double>(cv.n)) / cv.d;
            lo = std::min(lo, lever);
            hi = std::max(hi, lever);
        }
        if (hi - lo < 1e-3)
            out.warnings.push_back("ln(n)/d nearly constant across curves");
    }
    return out;
}

double replicate_spread(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

SlopeFit slope_scaling(const FitResult& fit, const std::vector<ObservableCurve>& curves) {
    if (fit.coeffs.size() != curves.size())
        throw InvalidArgument("slope_scaling: fit and curve list disagree");
    SlopeFit out;
    std::vector<double> lx, ly;
    for (std::size_t g = 0; g < curves.size(); ++g) {
        const double a1 = fit.coeffs[g].empty() ? 0.0 : fit.coeffs[g][0];
        if (a1 <= 0.0) {
            out.warnings.push_back("curve with nonpositive linear coefficient skipped");
            continue;
        }
        lx.push_back(std::log(static_cast<double>(curves[g].n)));
        ly.push_back(std::log(a1));
    }
    const std::size_t N = lx.size();
    if (N < 2) throw FitFailure("slope_scaling: fewer than 2 usable curves");
    if (N == 2) out.warnings.push_back("2-point fit; uncertainty not meaningful");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < N; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double nd = static_cast<double>(N);
    const double den = nd * sxx - sx * sx;
    if (std::abs(den) < 1e-12) throw FitFailure("slope_scaling: degenerate sizes");
    out.alpha = (nd * sxy - sx * sy) / den;
    out.log_b = (sy - out.alpha * sx) / nd;
    if (N > 2) {
        double ssr = 0;
        for (std::size_t i = 0; i < N; ++i) {
            double r = ly[i] - (out.log_b + out.alpha * lx[i]);
            ssr += r * r;
        }
        const double s2 = ssr / (nd - 2.0);
        out.sigma_alpha = std::sqrt(s2 * nd / den);
    }
    return out;
}

namespace {

// first p with curve.value rising through `target`, by linear interpolation
std::optional<double> first_crossing(const std::vector<double>& p,
                                     const std::vector<double>& v, double target) {
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (v[j] > target) {
            if (j == 0) return p[0];
            const double span = v[j] - v[j - 1];
            if (span <= 0.0) return p[j];
            return p[j - 1] + (target - v[j - 1]) / span * (p[j] - p[j - 1]);
        }
    }
    return std::nullopt;
}

// polynomial fit y = c0 + c1 x + ... by unweighted normal equations
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y,
                            int degree) {
    const std::size_t m = static_cast<std::size_t>(degree) + 1;
    std::vector<double> M(m * m, 0.0), rhs(m, 0.0), pw(m);
    for (std::size_t i = 0; i < x.size(); ++i) {
        pw[0] = 1.0;
        for (std::size_t j = 1; j < m; ++j) pw[j] = pw[j - 1] * x[i];
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) M[a * m + b] += pw[a] * pw[b];
            rhs[a] += pw[a] * y[i];
        }
    }
    if (!solve_dense(M, rhs, m)) throw FitFailure("polyfit: singular system");
    return rhs;
}

}  // namespace

SizeScalingResult size_scaling_extrapolate(const std::vector<ObservableCurve>& s1_curves,
                                           const std::vector<double>& omegas,
                                           int degree) {
    if (s1_curves.empty()) throw InvalidArgument("size_scaling: no curves");
    if (omegas.empty()) throw InvalidArgument("size_scaling: no omegas");
    if (degree < 0) throw InvalidArgument("size_scaling: negative degree");

    SizeScalingResult out;
    std::vector<double> intercepts;
    for (double omega : omegas) {
        std::vector<double> xs, ps;
        for (const auto& c : s1_curves) {
            const double nd = static_cast<double>(c.n);
            const double target = omega * std::pow(nd, 2.0 / 3.0);
            auto hit = first_crossing(c.p, c.value, target);
            if (!hit) {
                out.warnings.push_back("no S1 crossing in grid for omega = " +
                                       std::to_string(omega) + ", n = " +
                                       std::to_string(c.n));
                continue;
            }
            xs.push_back(std::pow(nd, -1.0 / 3.0));
            ps.push_back(*hit);
        }
        if (xs.empty()) continue;
        if (xs.size() == 1) {
            // single usable graph: no extrapolation possible
            out.omegas.push_back(omega);
            out.per_omega.push_back(ps[0]);
            out.infinite_uncertainty = true;
            continue;
        }
        int deg = degree;
        if (xs.size() < static_cast<std::size_t>(deg) + 1) {
            deg = static_cast<int>(xs.size()) - 1;
            out.warnings.push_back("degree reduced to " + std::to_string(deg) +
                                   " for omega = " + std::to_string(omega));
        }
        auto coef = polyfit(xs, ps, deg);
        out.omegas.push_back(omega);
        out.per_omega.push_back(coef[0]);
    }
    if (out.per_omega.empty())
        throw FitFailure("size_scaling: no omega produced an intercept");
    double mean = 0;
    for (double v : out.per_omega) mean += v;
    mean /= static_cast<double>(out.per_omega.size());
    out.pc = mean;
    out.sigma = out.infinite_uncertainty ? std::numeric_limits<double>::infinity()
                                         : replicate_spread(out.per_omega);
    return out;
}

std::vector<RateDeviation> rate_deviation_report(
    const std::vector<GrandCanonicalCurve>& curves, double epsilon,
    std::optional<double> R) {
    if (epsilon <= 0.0) throw InvalidArgument("rate_deviation_report: epsilon <= 0");
    std::vector<RateDeviation> out;
    out.reserve(curves.size());
    for (const auto& c : curves) {
        RateDeviation rd;
        rd.p_low = first_crossing(c.p, c.RE.value, epsilon);
        const double rate = R ? *R
                              : static_cast<double>(c.k) / static_cast<double>(c.n);
        if (rate - epsilon > 0.0)
            rd.p_high = first_crossing(c.p, c.RE.value, rate - epsilon);
        out.push_back(rd);
    }
    return out;
}

}  // namespace homoperc
