#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lfsm/errors.hpp"
#include "lfsm/function_space.hpp"
#include "lfsm/local_time.hpp"
#include "lfsm/rng.hpp"
#include "lfsm/stats.hpp"

namespace lfsm {

/// Disturbance process for the regression responses.
struct NoiseModel {
    double sigma = 0.0;  // 0 = noiseless
    double ar1 = 0.0;    // AR(1) coefficient, |ar1| <= 0.5

    void validate() const {
        if (sigma < 0.0) throw ConfigError("noise sigma must be >= 0");
        if (std::abs(ar1) > 0.5) throw ConfigError("|ar1| <= 0.5 required");
    }
};

/// (x_t, y_t) with y_t = m0(x_t) + u_t; the noise stream is independent of
/// the covariate innovations.
struct RegressionSample {
    std::vector<double> x;
    std::vector<double> y;
    std::function<double(double)> m0;
    NoiseModel noise;
};

inline RegressionSample make_regression_sample(const PathBundle& path,
                                               std::function<double(double)> m0,
                                               NoiseModel noise, std::uint64_t noise_seed) {
    noise.validate();
    RegressionSample s;
    s.x = path.x;
    s.m0 = std::move(m0);
    s.noise = noise;
    s.y.resize(s.x.size());
    Rng rng(noise_seed);
    double u = 0.0;
    for (std::size_t t = 0; t < s.x.size(); ++t) {
        const double innov = noise.sigma > 0.0 ? noise.sigma * rng.normal() : 0.0;
        u = noise.ar1 * u + innov;
        s.y[t] = s.m0(s.x[t]) + u;
    }
    return s;
}

/// A fixed bandwidth or a data-driven interquartile-range rule. The plain
/// rule uses the raw path dispersion, h = c IQR(x) n^e; the normalized rule
/// divides the dispersion by the spatial scale d_n first, so h shrinks on an
/// integrated covariate, h = c IQR(x/d_n) n^e.
struct BandwidthRule {
    enum class Kind { fixed, iqr, iqr_norm } kind = Kind::fixed;
    double value = 1.0;      // fixed h
    double c = 1.0;          // iqr multiplier
    double exponent = -0.2;  // iqr rate

    static BandwidthRule fixed(double h) { return {Kind::fixed, h, 1.0, 0.0}; }
    static BandwidthRule iqr(double c = 1.0, double exponent = -0.2) {
        return {Kind::iqr, 1.0, c, exponent};
    }
    static BandwidthRule iqr_normalized(double c = 1.0, double exponent = -0.2) {
        return {Kind::iqr_norm, 1.0, c, exponent};
    }

    double realize(const std::vector<double>& x, double d_n = 1.0) const {
        if (kind == Kind::fixed) return value;
        const double scale = (kind == Kind::iqr_norm) ? stats::iqr(x) / d_n : stats::iqr(x);
        return c * scale * std::pow(static_cast<double>(x.size()), exponent);
    }
};

struct FitResult {
    std::vector<double> x_grid;       // query points on the x scale
    std::vector<double> m_hat;        // NaN where undefined
    std::vector<double> denominator;  // sum_t K_h(x_t - x)
    std::vector<bool> defined;        // denominator > 0
    double h_realized = 1.0;
    std::size_t n = 0;
    double d_n = 1.0;
    double e_n = 1.0;
};

/// Nadaraya-Watson estimator on a grid of x-scale query points. The kernel
/// must be a nonnegative density; grid points whose denominator vanishes are
/// flagged undefined, never imputed.
inline FitResult nadaraya_watson(const RegressionSample& sample, const RealFunction& K,
                                 const BandwidthRule& rule, std::vector<double> x_grid,
                                 double d_n = 1.0, double e_n = 1.0) {
    if (!K.integral || std::abs(*K.integral - 1.0) > 1e-9)
        throw ConfigError("nadaraya_watson: kernel must integrate to 1");
    for (double xx : {K.window.lo + 1e-3, 0.0, K.window.hi - 1e-3})
        if (K.eval(xx) < 0.0) throw ConfigError("nadaraya_watson: kernel must be nonnegative");
    const double h = rule.realize(sample.x, d_n);
    if (!(h > 0.0)) throw DomainError("nadaraya_watson: realized bandwidth must be positive");

    FitResult fit;
    fit.x_grid = std::move(x_grid);
    fit.h_realized = h;
    fit.n = sample.x.size();
    fit.d_n = d_n;
    fit.e_n = e_n;
    fit.m_hat.assign(fit.x_grid.size(), std::numeric_limits<double>::quiet_NaN());
    fit.denominator.assign(fit.x_grid.size(), 0.0);
    fit.defined.assign(fit.x_grid.size(), false);

    const auto sp = SortedPath::build(sample.x);
    for (std::size_t j = 0; j < fit.x_grid.size(); ++j) {
        const double cx = fit.x_grid[j];
        const auto [b, e] = sp.range(cx + h * K.window.lo, cx + h * K.window.hi);
        double den = 0.0, num = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            const double w = K.eval((sp.xs[i] - cx) / h) / h;
            den += w;
            num += w * sample.y[sp.order[i]];
        }
        fit.denominator[j] = den;
        // a denominator assembled purely from denormal-range kernel tails has
        // almost no significand left; such points count as undefined
        if (den >= 1e-290) {
            fit.m_hat[j] = num / den;
            fit.defined[j] = true;
        }
    }
    return fit;
}

/// Empirical admissibility report for realized bandwidths across an n-ladder:
/// both h_n/d_n and log^2(n)/(h_n e_n) must be heading to zero, and the
/// fitted growth exponent must sit inside the admissible window (H-1, H).
struct BandwidthAssessment {
    double fitted_exponent = 0.0;
    double window_lo = 0.0;  // H - 1
    double window_hi = 0.0;  // H
    std::vector<double> upper_ratio;  // h_n / d_n
    std::vector<double> lower_ratio;  // log^2 n / (h_n e_n)
    bool upper_ok = false;
    bool lower_ok = false;
    bool admissible = false;
};

inline BandwidthAssessment bandwidth_check(const std::vector<std::size_t>& n_ladder,
                                           const std::vector<double>& h_values,
                                           const ProcessSpec& spec, const NormingSequence& rho) {
    if (n_ladder.size() < 3 || n_ladder.size() != h_values.size())
        throw PowerError("bandwidth_check: need >= 3 ladder points with matching h values");
    BandwidthAssessment rep;
    const double H = spec.hurst();
    rep.window_lo = H - 1.0;
    rep.window_hi = H;
    std::vector<double> ns, hs;
    for (std::size_t i = 0; i < n_ladder.size(); ++i) {
        const auto np = norming(spec, rho, n_ladder[i]);
        const double n = static_cast<double>(n_ladder[i]);
        rep.upper_ratio.push_back(h_values[i] / np.d);
        rep.lower_ratio.push_back(std::log(n) * std::log(n) / (h_values[i] * np.e));
        ns.push_back(n);
        hs.push_back(h_values[i]);
    }
    rep.fitted_exponent = stats::loglog_slope(ns, hs);
    auto decreasing = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] >= v[i - 1]) return false;
        return true;
    };
    rep.upper_ok = decreasing(rep.upper_ratio);
    rep.lower_ok = decreasing(rep.lower_ratio);
    rep.admissible = rep.upper_ok && rep.lower_ok &&
                     rep.fitted_exponent > rep.window_lo + 1e-9 &&
                     rep.fitted_exponent < rep.window_hi - 1e-9;
    return rep;
}

struct UniformErrorReport {
    double sup_error = 0.0;
    double inf_denominator = std::numeric_limits<double>::infinity();
    std::size_t points_in_support = 0;
    bool empty_support = false;
};

/// Sup_{grid in A} |m_hat - m0| and inf of the denominator over the same
/// points; undefined grid points never enter the sup.
inline UniformErrorReport uniform_error(const FitResult& fit,
                                        const std::function<double(double)>& m0,
                                        const SupportSet& support) {
    UniformErrorReport rep;
    for (std::size_t j = 0; j < fit.x_grid.size(); ++j) {
        if (!support.contains(fit.x_grid[j])) continue;
        ++rep.points_in_support;
        if (!fit.defined[j]) continue;
        rep.sup_error = std::max(rep.sup_error, std::abs(fit.m_hat[j] - m0(fit.x_grid[j])));
        rep.inf_denominator = std::min(rep.inf_denominator, fit.denominator[j]);
    }
    if (rep.points_in_support == 0) rep.empty_support = true;
    return rep;
}

}  // namespace lfsm
