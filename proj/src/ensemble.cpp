#include "homoperc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "homoperc/errors.hpp"

namespace homoperc {

double BinomialWindow::sum() const {
    double s = 0;
    for (double v : w) s += v;
    return s;
}

BinomialWindow binomial_weights(std::size_t n, double p, double M) {
    if (p < 0.0 || p > 1.0) throw InvalidArgument("binomial_weights: p outside [0,1]");
    if (M <= 0.0) throw InvalidArgument("binomial_weights: M must be positive");
    BinomialWindow out;
    if (p == 0.0) {
        out.x_min = 0;
        out.w = {1.0};
        return out;
    }
    if (p == 1.0) {
        out.x_min = n;
        out.w = {1.0};
        return out;
    }
    const double nd = static_cast<double>(n);
    const double mean = nd * p;
    const double half = M * std::sqrt(nd * p * (1.0 - p));
    double lo_d = std::max(0.0, std::floor(mean - half) + 1.0);
    double hi_d = std::min(nd, std::ceil(mean + half) - 1.0);
    std::size_t mode = static_cast<std::size_t>(
        std::min(nd, std::floor(p * (nd + 1.0))));
    std::size_t lo = static_cast<std::size_t>(lo_d);
    std::size_t hi = static_cast<std::size_t>(std::max(lo_d, hi_d));
    lo = std::min(lo, mode);
    hi = std::max(hi, mode);

    out.x_min = lo;
    out.w.assign(hi - lo + 1, 0.0);
    const double md = static_cast<double>(mode);
    double log_mode = std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                      std::lgamma(nd - md + 1.0) + md * std::log(p) +
                      (nd - md) * std::log1p(-p);
    double w_mode = std::exp(log_mode);
    out.w[mode - lo] = w_mode;
    const double ratio = p / (1.0 - p);
    double cur = w_mode;
    for (std::size_t x = mode; x < hi; ++x) {
        cur *= ratio * (nd - static_cast<double>(x)) / (static_cast<double>(x) + 1.0);
        out.w[x + 1 - lo] = cur;
    }
    cur = w_mode;
    for (std::size_t x = mode; x > lo; --x) {
        cur *= static_cast<double>(x) / (ratio * (nd - static_cast<double>(x) + 1.0));
        out.w[x - 1 - lo] = cur;
    }
    return out;
}

std::vector<double> make_p_grid(double p_min, double p_max, double dp) {
    if (dp <= 0.0) throw InvalidArgument("make_p_grid: dp must be positive");
    if (p_min > p_max) throw InvalidArgument("make_p_grid: p_min > p_max");
    std::size_t count = static_cast<std::size_t>(std::llround((p_max - p_min) / dp)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = p_min + dp * static_cast<double>(i);
    if (!grid.empty() && grid.back() > p_max) grid.back() = p_max;
    return grid;
}

namespace {

bool nondecreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1]) return false;
    return true;
}

bool nonincreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) return false;
    return true;
}

// The binomial mixture of a monotone sequence is monotone in p, but the
// summation itself wiggles by a few ulps times the term count. Wiggle under
// the slack is accumulation noise and gets clamped away so callers see the
// exact property; anything larger means a broken input or kernel.
constexpr double kMonotoneSlack = 1e-9;

void clamp_nondecreasing(std::vector<double>& v, const char* what) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] >= v[i - 1]) continue;
        if (v[i] < v[i - 1] - kMonotoneSlack) throw std::logic_error(what);
        v[i] = v[i - 1];
    }
}

void clamp_nonincreasing(std::vector<double>& v, const char* what) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) continue;
        if (v[i] > v[i - 1] + kMonotoneSlack) throw std::logic_error(what);
        v[i] = v[i - 1];
    }
}

// One sweep contributes its whole trajectory, so values at different x share
// all of the sweep's randomness. For general observables the cross-x
// covariances are not recoverable from per-x moments; the perfect-correlation
// bound sum w*se is used instead of the independent-error sum of squares,
// which would understate the error by roughly the window width.
void mix_value(const SeriesStat& in, const BinomialWindow& win, std::size_t gi,
               CurveStat& out, double scale = 1.0) {
    double acc = 0, err = 0;
    for (std::size_t i = 0; i < win.w.size(); ++i) {
        const std::size_t x = win.x_min + i;
        acc += win.w[i] * in.mean[x];
        err += win.w[i] * in.se[x];
    }
    out.value[gi] = acc * scale;
    out.se[gi] = err * scale;
}

// A sweep's indicator trajectory is a single unit step, so the per-x means
// are exactly the empirical distribution of the step position and the
// mixture's sweep-to-sweep variance follows from it: per sweep the mixed
// value is the binomial tail beyond the step, v = P(X >= x_step) for a
// rising indicator and v = P(X < x_step) for a falling one.
void mix_indicator(const SeriesStat& in, const BinomialWindow& win, bool rising,
                   std::size_t n, std::size_t sweeps, std::size_t gi, CurveStat& out) {
    std::vector<double> suffix(win.w.size() + 1, 0.0);
    for (std::size_t i = win.w.size(); i-- > 0;) suffix[i] = suffix[i + 1] + win.w[i];
    auto tail = [&](std::size_t x) {  // P(X >= x)
        if (x <= win.x_min) return suffix[0];
        const std::size_t i = x - win.x_min;
        return i < suffix.size() ? suffix[i] : 0.0;
    };

    double acc = 0, acc2 = 0;
    double prev = rising ? 0.0 : 1.0;
    for (std::size_t x = 0; x <= n; ++x) {
        const double q = rising ? in.mean[x] - prev : prev - in.mean[x];
        prev = in.mean[x];
        if (q <= 0.0) continue;
        const double v = rising ? tail(x) : 1.0 - tail(x);
        acc += q * v;
        acc2 += q * v * v;
    }
    if (!rising) {  // sweeps whose indicator never falls keep v = 1
        const double q = in.mean[n];
        acc += q;
        acc2 += q;
    }
    out.value[gi] = acc;
    const double var = std::max(0.0, acc2 - acc * acc);
    out.se[gi] = sweeps > 1 ? std::sqrt(var / static_cast<double>(sweeps - 1)) : 0.0;
}

}  // namespace

GrandCanonicalCurve convolve(const CanonicalSeries& series,
                             const std::vector<double>& p_grid, double M) {
    const std::size_t n = series.n;
    if (series.kprime.mean.size() != n + 1)
        throw InvalidArgument("convolve: series does not cover x = 0..n");
    for (double p : p_grid)
        if (p < 0.0 || p > 1.0)
            throw InvalidArgument("convolve: p grid outside [0,1]");

    GrandCanonicalCurve curve;
    curve.n = n;
    curve.k = series.k;
    curve.sweeps = series.sweeps;
    curve.M = M;
    curve.p = p_grid;
    const std::size_t m = p_grid.size();
    for (CurveStat* c : {&curve.PE, &curve.PA, &curve.RE, &curve.S1, &curve.S2, &curve.S3}) {
        c->value.assign(m, 0.0);
        c->se.assign(m, 0.0);
    }
    const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
    for (std::size_t gi = 0; gi < m; ++gi) {
        BinomialWindow win = binomial_weights(n, p_grid[gi], M);
        mix_indicator(series.pE, win, true, n, series.sweeps, gi, curve.PE);
        mix_indicator(series.pA, win, false, n, series.sweeps, gi, curve.PA);
        mix_value(series.kprime, win, gi, curve.RE, inv_n);
        mix_value(series.S1, win, gi, curve.S1);
        mix_value(series.S2, win, gi, curve.S2);
        mix_value(series.S3, win, gi, curve.S3);
    }

    const bool grid_sorted = nondecreasing(curve.p);
    if (grid_sorted && nondecreasing(series.pE.mean))
        clamp_nondecreasing(curve.PE.value, "convolve: P_E lost monotonicity");
    if (grid_sorted && nonincreasing(series.pA.mean))
        clamp_nonincreasing(curve.PA.value, "convolve: P_A lost monotonicity");
    return curve;
}

}  // namespace homoperc
