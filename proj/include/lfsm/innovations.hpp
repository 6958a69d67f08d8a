#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "lfsm/errors.hpp"
#include "lfsm/rng.hpp"

namespace lfsm {

enum class Family { exact_stable, gaussian, student_t, two_point };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::exact_stable: return "exact_stable";
        case Family::gaussian: return "gaussian";
        case Family::student_t: return "student_t";
        case Family::two_point: return "two_point";
    }
    return "?";
}

/// i.i.d. innovation driver. Draws (after scale_cal) are normalized so that
/// n^{-1/alpha} rho_n^{-1} sum_{t<=n} eps_t has the limit log-cf
///   -|lambda|^alpha [1 + i*skew*sgn(lambda)*tan(pi*alpha/2)],
/// i.e. unit scale constant. For exact_stable this holds at scale_cal = 1;
/// the other families are domain-of-attraction members targeting alpha = 2,
/// corrected through the norming sequence rho.
struct InnovationModel {
    Family family = Family::exact_stable;
    double alpha = 2.0;
    double skew = 0.0;       // forced to 0 when alpha == 1 (use make_stable)
    double scale_cal = 1.0;  // multiplier applied to raw draws
    double df = 5.0;         // student_t only

    /// Collects every violated invariant; throws ConfigError naming them all.
    void validate() const {
        std::string err;
        auto add = [&err](const std::string& m) {
            if (!err.empty()) err += "; ";
            err += m;
        };
        if (!(alpha > 0.0 && alpha <= 2.0)) add("alpha must lie in (0, 2]");
        if (!(skew >= -1.0 && skew <= 1.0)) add("skew must lie in [-1, 1]");
        if (alpha == 1.0 && skew != 0.0) add("skew must be 0 when alpha = 1");
        if (!(scale_cal > 0.0)) add("scale_cal must be positive");
        if (family != Family::exact_stable && alpha != 2.0)
            add(std::string(family_name(family)) + " family requires alpha = 2");
        if (family != Family::exact_stable && skew != 0.0)
            add(std::string(family_name(family)) + " family requires skew = 0");
        if (family == Family::student_t && !(df > 2.0))
            add("student_t requires df > 2 (finite variance)");
        if (!err.empty()) throw ConfigError("invalid innovation model: " + err);
    }

    /// Exact-stable factory; zeroes the skew at alpha = 1.
    static InnovationModel make_stable(double alpha, double skew = 0.0, double scale = 1.0) {
        InnovationModel m;
        m.family = Family::exact_stable;
        m.alpha = alpha;
        m.skew = (alpha == 1.0) ? 0.0 : skew;
        m.scale_cal = scale;
        return m;
    }

    static InnovationModel make_gaussian(double scale = std::numbers::sqrt2) {
        InnovationModel m;
        m.family = Family::gaussian;
        m.alpha = 2.0;
        m.scale_cal = scale;
        return m;
    }

    /// Variance of one draw; defined for the alpha = 2 families.
    double variance() const {
        switch (family) {
            case Family::exact_stable:
                if (alpha != 2.0) throw DomainError("variance undefined for alpha < 2");
                return 2.0 * scale_cal * scale_cal;  // unit-scale stable at alpha=2 is N(0,2)
            case Family::gaussian: return scale_cal * scale_cal;
            case Family::student_t: return scale_cal * scale_cal * df / (df - 2.0);
            case Family::two_point: return scale_cal * scale_cal;
        }
        return 0.0;
    }
};

/// scale_cal that makes the family's limit scale constant exactly 1
/// (variance 2 per unit time for the alpha = 2 families).
inline double canonical_scale(Family family, double df = 5.0) {
    switch (family) {
        case Family::exact_stable: return 1.0;
        case Family::gaussian: return std::numbers::sqrt2;
        case Family::student_t: return std::sqrt(2.0 * (df - 2.0) / df);
        case Family::two_point: return std::numbers::sqrt2;
    }
    return 1.0;
}

/// Slowly varying norming factor rho_k (constant unless a log variant is
/// switched on for exploratory runs).
struct NormingSequence {
    double scale = 1.0;
    double log_exponent = 0.0;

    double operator()(std::size_t k) const {
        if (log_exponent == 0.0) return scale;
        const double kk = static_cast<double>(k < 1 ? 1 : k);
        return scale * std::pow(1.0 + std::log(kk), log_exponent);
    }
};

namespace detail {

/// One draw from the unit-scale strictly stable law with log-cf
/// -|lambda|^alpha [1 + i*beta*sgn(lambda)*tan(pi*alpha/2)]
/// (Chambers-Mallows-Stuck; the output of the classical recipe carries the
/// opposite skewness convention, so it is negated).
inline double stable_draw(double alpha, double beta, Rng& rng) {
    const double v = std::numbers::pi * (rng.uniform() - 0.5);  // U(-pi/2, pi/2)
    if (alpha == 1.0) return std::tan(v);                       // symmetric Cauchy, skew = 0
    const double w = rng.exponential();
    const double ta = std::tan(0.5 * std::numbers::pi * alpha);
    const double b = std::atan(beta * ta) / alpha;
    const double s = std::pow(1.0 + beta * beta * ta * ta, 0.5 / alpha);
    const double x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
    return -x;
}

}  // namespace detail

/// n i.i.d. draws; bit-identical for identical (model, n, seed).
inline std::vector<double> sample_innovations(const InnovationModel& model, std::size_t n,
                                              std::uint64_t seed) {
    model.validate();
    if (n < 1) throw DomainError("sample_innovations: n >= 1 required");
    Rng rng(seed);
    std::vector<double> out(n);
    switch (model.family) {
        case Family::exact_stable:
            for (auto& x : out) x = model.scale_cal * detail::stable_draw(model.alpha, model.skew, rng);
            break;
        case Family::gaussian:
            for (auto& x : out) x = model.scale_cal * rng.normal();
            break;
        case Family::student_t:
            for (auto& x : out) x = model.scale_cal * rng.student_t(model.df);
            break;
        case Family::two_point:
            for (auto& x : out) x = model.scale_cal * rng.rademacher();
            break;
    }
    return out;
}

/// Characteristic function psi(lambda) = E exp(i*lambda*eps_0), closed form.
/// student_t is supported for odd integer df only; other df have no
/// elementary closed form and raise UnsupportedError.
inline std::complex<double> char_fn(const InnovationModel& model, double lambda) {
    model.validate();
    const double s = model.scale_cal;
    switch (model.family) {
        case Family::gaussian:
            return {std::exp(-0.5 * s * s * lambda * lambda), 0.0};
        case Family::two_point:
            return {std::cos(s * lambda), 0.0};
        case Family::exact_stable: {
            const double al = std::pow(std::abs(s * lambda), model.alpha);
            if (model.alpha == 1.0) return {std::exp(-al), 0.0};
            const double ta = std::tan(0.5 * std::numbers::pi * model.alpha);
            const double sgn = (lambda > 0.0) - (lambda < 0.0);
            // log psi = -al * (1 + i*skew*sgn*tan(pi*alpha/2))
            return std::exp(std::complex<double>(-al, -al * model.skew * sgn * ta));
        }
        case Family::student_t: {
            const double m2 = model.df;  // df = 2m+1 required
            const long mi = std::lround((m2 - 1.0) / 2.0);
            if (mi < 0 || std::abs(m2 - (2 * mi + 1)) > 1e-12)
                throw UnsupportedError("student_t characteristic function requires odd integer df");
            const double x = std::sqrt(model.df) * std::abs(s * lambda);
            // e^{-x} * sum_k a_k x^k with a_k = m!(2m-k)! 2^k / ((2m)! k! (m-k)!)
            double poly = 0.0;
            for (long k = 0; k <= mi; ++k) {
                double a = std::exp(std::lgamma(mi + 1.0) + std::lgamma(2.0 * mi - k + 1.0) -
                                    std::lgamma(2.0 * mi + 1.0) - std::lgamma(k + 1.0) -
                                    std::lgamma(mi - k + 1.0)) *
                           std::pow(2.0, k);
                poly += a * std::pow(x, static_cast<double>(k));
            }
            return {std::exp(-x) * poly, 0.0};
        }
    }
    return {1.0, 0.0};
}

/// Norming sequence rho making the scale constant of the limit law equal 1.
/// Exact-stable draws are already normalized; the alpha = 2 families match
/// their second moment to the variance-2 Gaussian limit.
inline NormingSequence calibrate_norming(const InnovationModel& model) {
    model.validate();
    if (model.family == Family::exact_stable) return {1.0, 0.0};
    return {std::sqrt(model.variance() / 2.0), 0.0};
}

}  // namespace lfsm
