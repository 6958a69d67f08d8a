#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "lfsm/errors.hpp"

namespace lfsm::stats {

/// Compensated (Kahan) summation in the order given.
inline double kahan_sum(std::span<const double> xs) {
    double sum = 0.0, c = 0.0;
    for (double x : xs) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw PowerError("mean of empty sample");
    return kahan_sum(xs) / static_cast<double>(xs.size());
}

/// Unbiased sample variance.
inline double variance(std::span<const double> xs) {
    if (xs.size() < 2) throw PowerError("variance needs at least 2 samples");
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / static_cast<double>(xs.size() - 1);
}

inline double sd(std::span<const double> xs) { return std::sqrt(variance(xs)); }

/// Type-7 quantile (linear interpolation of order statistics), q in [0,1].
inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw PowerError("quantile of empty sample");
    std::sort(xs.begin(), xs.end());
    const double h = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= xs.size()) return xs.back();
    return xs[lo] + (h - std::floor(h)) * (xs[lo + 1] - xs[lo]);
}

inline double iqr(const std::vector<double>& xs) {
    return quantile(xs, 0.75) - quantile(xs, 0.25);
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = a + b x.
inline LineFit ols(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw PowerError("ols needs >= 2 paired points");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double b = sxy / sxx;
    return {b, my - b * mx};
}

/// Slope of log(y) against log(x); all inputs must be positive.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) throw DomainError("loglog_slope needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return ols(lx, ly).slope;
}

inline double correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw PowerError("correlation needs paired data");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov
// ---------------------------------------------------------------------------

/// One-sample KS statistic against a cdf.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw PowerError("ks_statistic of empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::abs((static_cast<double>(i + 1)) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

/// Kolmogorov tail Q(t) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 t^2).
inline double kolmogorov_q(double t) {
    if (t <= 0.0) return 1.0;
    double q = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = 2.0 * std::exp(-2.0 * j * j * t * t);
        q += (j % 2 == 1) ? term : -term;
        if (term < 1e-12) break;
    }
    return std::clamp(q, 0.0, 1.0);
}

/// Approximate one-sample KS p-value with Stephens' small-sample adjustment.
inline double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    return kolmogorov_q(d * (sn + 0.12 + 0.11 / sn));
}

/// Two-sample KS statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw PowerError("ks_two_sample of empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// Critical value for the two-sample KS test at level alpha (asymptotic).
inline double ks_two_sample_critical(double alpha, std::size_t na, std::size_t nb) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt((static_cast<double>(na) + static_cast<double>(nb)) /
                         (static_cast<double>(na) * static_cast<double>(nb)));
}

// ---------------------------------------------------------------------------
// Regularized incomplete gamma (for chi-square tails)
// ---------------------------------------------------------------------------

namespace detail {

inline double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_cfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a,x).
inline double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw DomainError("gamma_p: a > 0, x >= 0 required");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? detail::gamma_p_series(a, x) : 1.0 - detail::gamma_q_cfrac(a, x);
}

/// Chi-square survival function P{X > x} with k degrees of freedom.
inline double chi2_sf(double x, double k) {
    if (x <= 0.0) return 1.0;
    return 1.0 - gamma_p(0.5 * k, 0.5 * x);
}

/// Standard normal cdf.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace lfsm::stats
