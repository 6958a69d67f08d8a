#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lfsm/errors.hpp"
#include "lfsm/quadrature.hpp"

namespace lfsm {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// A bounded, Lebesgue-integrable test function together with its analytic
/// metadata. Value object; cheap to copy, safe to share across threads.
struct RealFunction {
    std::function<double(double)> eval;
    std::function<std::complex<double>(double)> fhat;  // null when no closed form
    std::optional<double> integral;                    // exact when known
    double sup_norm = 0.0;
    double l1_norm = 0.0;
    double l2_norm = 0.0;
    std::optional<double> lipschitz;                 // absent for discontinuous f
    std::optional<Interval> support;                 // compact support when present
    Interval window{-40.0, 40.0};                    // |f| is identically 0 outside
    std::function<double(double)> beta_moment_form;  // closed-form beta-moment, may be null
    bool fhat_abs_integrable = false;
    std::string name = "f";

    double operator()(double x) const { return eval(x); }
    bool has_fhat() const { return static_cast<bool>(fhat); }
};

namespace kernels {

/// Triangular kernel (1 - |x|) on [-1, 1]; transform sinc^2(lambda/2).
inline RealFunction triangular() {
    RealFunction f;
    f.eval = [](double x) { return std::abs(x) <= 1.0 ? 1.0 - std::abs(x) : 0.0; };
    f.fhat = [](double lam) -> std::complex<double> {
        const double h = 0.5 * lam;
        const double s = std::abs(h) < 1e-8 ? 1.0 - h * h / 6.0 : std::sin(h) / h;
        return {s * s, 0.0};
    };
    f.integral = 1.0;
    f.sup_norm = 1.0;
    f.l1_norm = 1.0;
    f.l2_norm = std::sqrt(2.0 / 3.0);
    f.lipschitz = 1.0;
    f.support = Interval{-1.0, 1.0};
    f.window = *f.support;
    f.beta_moment_form = [](double b) { return 2.0 / ((b + 1.0) * (b + 2.0)); };
    f.fhat_abs_integrable = true;
    f.name = "triangular";
    return f;
}

/// Standard normal density; transform exp(-lambda^2/2). The window is where
/// the density is representable in double precision (exactly zero outside).
inline RealFunction gaussian() {
    constexpr double c = 0.3989422804014326779;  // (2 pi)^{-1/2}
    RealFunction f;
    f.eval = [](double x) { return c * std::exp(-0.5 * x * x); };
    f.fhat = [](double lam) -> std::complex<double> {
        return {std::exp(-0.5 * lam * lam), 0.0};
    };
    f.integral = 1.0;
    f.sup_norm = c;
    f.l1_norm = 1.0;
    f.l2_norm = std::sqrt(0.5 / std::sqrt(std::numbers::pi));
    f.lipschitz = c * std::exp(-0.5);
    f.support = std::nullopt;
    f.window = Interval{-39.0, 39.0};
    f.beta_moment_form = [](double b) {
        return std::pow(2.0, 0.5 * b) * std::tgamma(0.5 * (b + 1.0)) /
               std::sqrt(std::numbers::pi);
    };
    f.fhat_abs_integrable = true;
    f.name = "gaussian";
    return f;
}

/// Epanechnikov kernel 0.75 (1 - x^2) on [-1, 1].
inline RealFunction epanechnikov() {
    RealFunction f;
    f.eval = [](double x) { return std::abs(x) <= 1.0 ? 0.75 * (1.0 - x * x) : 0.0; };
    f.fhat = [](double lam) -> std::complex<double> {
        // sin(l) - l cos(l) cancels to l^3/3 near 0; the series branch must
        // reach past the cancellation region
        if (std::abs(lam) < 0.1) {
            const double l2 = lam * lam;
            return {1.0 - l2 / 10.0 + l2 * l2 / 280.0 - l2 * l2 * l2 / 15120.0, 0.0};
        }
        return {3.0 * (std::sin(lam) - lam * std::cos(lam)) / (lam * lam * lam), 0.0};
    };
    f.integral = 1.0;
    f.sup_norm = 0.75;
    f.l1_norm = 1.0;
    f.l2_norm = std::sqrt(0.6);
    f.lipschitz = 1.5;
    f.support = Interval{-1.0, 1.0};
    f.window = *f.support;
    f.beta_moment_form = [](double b) { return 3.0 / ((b + 1.0) * (b + 3.0)); };
    f.fhat_abs_integrable = true;
    f.name = "epanechnikov";
    return f;
}

/// Indicator of a bounded interval.
inline RealFunction indicator(double lo, double hi) {
    if (!(lo < hi)) throw DomainError("indicator: lo < hi required");
    RealFunction f;
    f.eval = [lo, hi](double x) { return (x >= lo && x <= hi) ? 1.0 : 0.0; };
    const double mid = 0.5 * (lo + hi), w = hi - lo;
    f.fhat = [mid, w](double lam) -> std::complex<double> {
        const double h = 0.5 * lam * w;
        const double s = std::abs(h) < 1e-8 ? 1.0 - h * h / 6.0 : std::sin(h) / h;
        return std::polar(w * s, lam * mid);
    };
    f.integral = w;
    f.sup_norm = 1.0;
    f.l1_norm = w;
    f.l2_norm = std::sqrt(w);
    f.lipschitz = std::nullopt;  // discontinuous
    f.support = Interval{lo, hi};
    f.window = *f.support;
    f.beta_moment_form = [lo, hi](double b) {
        auto H = [b](double x) {
            return std::copysign(std::pow(std::abs(x), b + 1.0), x) / (b + 1.0);
        };
        return H(hi) - H(lo);
    };
    f.fhat_abs_integrable = false;  // |fhat| ~ 1/|lambda|
    f.name = "indicator";
    return f;
}

/// Plateau: 1 on [lo, hi] with linear ramps of the given width down to 0.
inline RealFunction plateau(double lo, double hi, double ramp) {
    if (!(lo <= hi) || !(ramp > 0.0)) throw DomainError("plateau: lo <= hi and ramp > 0");
    RealFunction f;
    f.eval = [lo, hi, ramp](double x) {
        if (x <= lo - ramp || x >= hi + ramp) return 0.0;
        if (x >= lo && x <= hi) return 1.0;
        return x < lo ? (x - (lo - ramp)) / ramp : ((hi + ramp) - x) / ramp;
    };
    f.integral = (hi - lo) + ramp;
    f.sup_norm = 1.0;
    f.l1_norm = (hi - lo) + ramp;
    f.l2_norm = std::sqrt((hi - lo) + 2.0 * ramp / 3.0);
    f.lipschitz = 1.0 / ramp;
    f.support = Interval{lo - ramp, hi + ramp};
    f.window = *f.support;
    f.fhat_abs_integrable = true;
    f.name = "plateau";
    return f;
}

}  // namespace kernels

// ---------------------------------------------------------------------------
// Derived functions
// ---------------------------------------------------------------------------

namespace detail {

inline Interval union_window(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// Numeric norms of f over its window: (sup, l1, l2). The quadrature is
/// seeded with many panels so localized mass inside a wide window is not
/// missed by the adaptive subdivision.
inline void fill_numeric_norms(RealFunction& f) {
    const auto& ev = f.eval;
    const auto knots = quad::uniform_knots(f.window.lo, f.window.hi, 64);
    f.l1_norm = quad::adaptive_panels([&ev](double x) { return std::abs(ev(x)); }, knots, 1e-11);
    f.l2_norm = std::sqrt(
        quad::adaptive_panels([&ev](double x) { return ev(x) * ev(x); }, knots, 1e-12));
    double sup = 0.0;
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
        const double x = f.window.lo + f.window.width() * i / n;
        sup = std::max(sup, std::abs(ev(x)));
    }
    f.sup_norm = sup;
}

}  // namespace detail

/// b f(b (x - c)): rescaled to inverse bandwidth b and centered at c.
inline RealFunction scale_shift(const RealFunction& g, double center, double inv_bandwidth) {
    if (!(inv_bandwidth > 0.0)) throw DomainError("scale_shift: positive inverse bandwidth");
    const double b = inv_bandwidth, c = center;
    RealFunction f;
    auto gev = g.eval;
    f.eval = [gev, b, c](double x) { return b * gev(b * (x - c)); };
    if (g.fhat) {
        auto gh = g.fhat;
        f.fhat = [gh, b, c](double lam) { return std::polar(1.0, lam * c) * gh(lam / b); };
    }
    f.integral = g.integral;
    f.sup_norm = b * g.sup_norm;
    f.l1_norm = g.l1_norm;
    f.l2_norm = std::sqrt(b) * g.l2_norm;
    if (g.lipschitz) f.lipschitz = b * b * *g.lipschitz;
    if (g.support) f.support = Interval{c + g.support->lo / b, c + g.support->hi / b};
    f.window = Interval{c + g.window.lo / b, c + g.window.hi / b};
    f.fhat_abs_integrable = g.fhat_abs_integrable;
    f.name = g.name + "_scaled";
    return f;
}

/// g(. - a1) - g(. - a2); integral 0 whenever g is integrable.
inline RealFunction shifted_diff(const RealFunction& g, double a1, double a2) {
    RealFunction f;
    auto gev = g.eval;
    f.eval = [gev, a1, a2](double x) { return gev(x - a1) - gev(x - a2); };
    if (g.fhat) {
        auto gh = g.fhat;
        f.fhat = [gh, a1, a2](double lam) {
            return gh(lam) * (std::polar(1.0, lam * a1) - std::polar(1.0, lam * a2));
        };
    }
    f.integral = 0.0;
    const Interval w1{g.window.lo + a1, g.window.hi + a1};
    const Interval w2{g.window.lo + a2, g.window.hi + a2};
    f.window = detail::union_window(w1, w2);
    if (g.support) f.support = f.window;
    if (g.lipschitz) f.lipschitz = 2.0 * *g.lipschitz;
    f.fhat_abs_integrable = g.fhat_abs_integrable;
    f.name = g.name + "_diff";
    if (a1 == a2) {
        f.sup_norm = f.l1_norm = f.l2_norm = 0.0;
    } else {
        detail::fill_numeric_norms(f);
    }
    return f;
}

/// Recentered bandwidth-scaled function b f(b(x - c)) - (int f) phi(x - c),
/// phi the triangular kernel: the zero-integral object whose path sums drive
/// the uniform negligibility of bandwidth smoothing.
inline RealFunction recentered(const RealFunction& g, double center, double inv_bandwidth) {
    if (!g.integral) throw DomainError("recentered: g needs a known integral");
    const auto scaled = scale_shift(g, center, inv_bandwidth);
    const auto phi = scale_shift(kernels::triangular(), center, 1.0);
    const double mu = *g.integral;
    RealFunction f;
    auto se = scaled.eval, pe = phi.eval;
    f.eval = [se, pe, mu](double x) { return se(x) - mu * pe(x); };
    if (scaled.fhat) {
        auto sh = scaled.fhat, ph = phi.fhat;
        f.fhat = [sh, ph, mu](double lam) { return sh(lam) - mu * ph(lam); };
    }
    f.integral = 0.0;
    f.window = detail::union_window(scaled.window, phi.window);
    if (scaled.support) f.support = f.window;
    if (scaled.lipschitz) f.lipschitz = *scaled.lipschitz + std::abs(mu);
    f.fhat_abs_integrable = scaled.fhat_abs_integrable;
    f.name = g.name + "_recentered";
    detail::fill_numeric_norms(f);
    return f;
}

/// Library kernels addressable by name: "triangular", "gaussian",
/// "epanechnikov", "indicator(lo,hi)", "shifted_diff(name,a1,a2)".
inline RealFunction kernel_by_name(const std::string& spec) {
    auto parse_args = [](const std::string& s) {
        std::vector<std::string> out;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            const auto comma = s.find(',', pos);
            out.push_back(s.substr(pos, comma == std::string::npos ? comma : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return out;
    };
    if (spec == "triangular") return kernels::triangular();
    if (spec == "gaussian") return kernels::gaussian();
    if (spec == "epanechnikov") return kernels::epanechnikov();
    const auto open = spec.find('(');
    if (open != std::string::npos && spec.back() == ')') {
        const auto head = spec.substr(0, open);
        const auto args = parse_args(spec.substr(open + 1, spec.size() - open - 2));
        if (head == "indicator" && args.size() == 2)
            return kernels::indicator(std::stod(args[0]), std::stod(args[1]));
        if (head == "shifted_diff" && args.size() == 3)
            return shifted_diff(kernel_by_name(args[0]), std::stod(args[1]), std::stod(args[2]));
    }
    throw ConfigError("unknown kernel spec: " + spec);
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// Moment integral int |f(x)| |x|^beta dx. Closed form when the function
/// carries one, otherwise adaptive quadrature over the window; functions
/// without any window bound go through expanding windows with divergence
/// detection.
inline double beta_moment(const RealFunction& f, double beta) {
    if (beta < 0.0) throw DomainError("beta_moment: beta >= 0 required");
    if (f.beta_moment_form) return f.beta_moment_form(beta);
    auto integrand = [&f, beta](double x) { return std::abs(f.eval(x)) * std::pow(std::abs(x), beta); };
    return quad::adaptive_panels(integrand, quad::uniform_knots(f.window.lo, f.window.hi, 64),
                                 1e-11);
}

/// Grid estimate of the Fourier-domain norm sup_lambda |fhat(lambda)| /
/// |lambda|^beta. The sup is taken over a log-spaced grid refined by density
/// doubling until the estimate moves by < 0.1%; the result is a lower bound
/// of the true norm, reported with its last refinement delta.
struct BetaNormEstimate {
    double value = 0.0;
    double refinement_delta = 0.0;
    std::size_t grid_size = 0;
    operator double() const { return value; }
};

struct LambdaGrid {
    double lambda_min = 1e-4;
    double lambda_max = 1e3;
    std::size_t initial_points = 257;
};

inline BetaNormEstimate beta_norm(const RealFunction& f, double beta,
                                  const LambdaGrid& grid = {}) {
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta_norm: beta in (0, 1] required");
    if (!(grid.lambda_min <= 1e-4 && grid.lambda_max >= 1e3))
        throw DomainError("beta_norm: grid must cover [1e-4, 1e3]");

    std::function<std::complex<double>(double)> fhat = f.fhat;
    if (!fhat) {
        if (!f.support)
            throw UnsupportedError(
                "beta_norm: function without compact support needs a closed-form transform");
        fhat = quad::PiecewiseLinearTransform(f.eval, f.support->lo, f.support->hi, 8192);
    }

    const double llo = std::log(grid.lambda_min), lhi = std::log(grid.lambda_max);
    auto sup_on = [&](std::size_t pts) {
        double sup = 0.0;
        for (std::size_t i = 0; i < pts; ++i) {
            const double lam =
                std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(pts - 1));
            sup = std::max(sup, std::abs(fhat(lam)) / std::pow(lam, beta));
        }
        return sup;
    };

    BetaNormEstimate est;
    std::size_t pts = grid.initial_points;
    double prev = sup_on(pts);
    for (int round = 0; round < 8; ++round) {
        pts = 2 * pts - 1;
        const double cur = sup_on(pts);
        est.refinement_delta = cur - prev;
        prev = cur;
        if (est.refinement_delta <= 1e-3 * std::max(cur, 1e-300)) break;
    }
    est.value = prev;
    est.grid_size = pts;
    return est;
}

}  // namespace lfsm
