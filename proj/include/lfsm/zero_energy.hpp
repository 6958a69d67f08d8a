#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lfsm/detail/fft.hpp"
#include "lfsm/errors.hpp"
#include "lfsm/function_space.hpp"
#include "lfsm/linear_process.hpp"
#include "lfsm/quadrature.hpp"
#include "lfsm/stats.hpp"

namespace lfsm {

/// Largest spatial Holder exponent available below the (1-H)/(2H) barrier.
inline double beta_bar(double H) {
    if (!(H > 0.0 && H < 1.0)) throw DomainError("beta_bar: H in (0,1) required");
    return std::min((1.0 - H) / (2.0 * H), 1.0);
}

/// S_n g = sum_t g(x_t) with compensated summation. Functions with a
/// nonzero integral are rejected unless explicitly overridden (they live at
/// a different normalization scale).
inline double sum_zero_energy(const PathBundle& path, const RealFunction& g,
                              bool allow_nonzero_integral = false) {
    double mu;
    if (g.integral) {
        mu = *g.integral;
    } else {
        auto ge = g.eval;
        mu = quad::adaptive([ge](double x) { return ge(x); }, g.window.lo, g.window.hi, 1e-12);
    }
    if (!allow_nonzero_integral && std::abs(mu) > 1e-10)
        throw ZeroEnergyViolation("sum_zero_energy: integral of g is " + std::to_string(mu) +
                                  ", not 0 (override to run the contrast experiment)");
    double acc = 0.0, c = 0.0;
    for (double xt : path.x) {
        const double y = g.eval(xt) - c;
        const double t = acc + y;
        c = (t - acc) - y;
        acc = t;
    }
    return acc;
}

/// Covariance-type cf object E[e^{-i z1 eps} - psi(-z1)][e^{-i z2 eps} - psi(-z2)]
/// = psi(-(z1+z2)) - psi(-z1) psi(-z2).
inline std::complex<double> cf_diff_product(const InnovationModel& model, double z1, double z2) {
    return char_fn(model, -(z1 + z2)) - char_fn(model, -z1) * char_fn(model, -z2);
}

/// Conditional expectations E_t f(x_{t+k}) by Fourier inversion for the
/// truncated-filter process held in a PathBundle. All quadratures share one
/// absolute tolerance; values are deterministic functions of the bundle.
class ConditionalEngine {
  public:
    ConditionalEngine(const PathBundle& path, RealFunction f, double tol = 1e-9)
        : path_(&path), f_(std::move(f)), tol_(tol) {
        if (!f_.has_fhat())
            throw UnsupportedError("conditional expectations need a closed-form transform of f");
        psi_ = [m = path.model](double lam) { return char_fn(m, lam); };
        psi_(1.0);  // surfaces UnsupportedError for families without closed-form cf
        // minimal horizon from the decay budget
        if (path.model.family != Family::two_point) {
            min_k_.reset();
            for (std::size_t i = 0; i < path.coeff_partial.size(); ++i) {
                if (std::abs(path.a(i)) > 0.0) {
                    min_k_ = static_cast<int>(i) + 1;
                    break;
                }
            }
            if (!min_k_ && f_.fhat_abs_integrable) min_k_ = 1;
        } else {
            min_k_ = f_.fhat_abs_integrable ? std::optional<int>(1) : std::nullopt;
        }
    }

    double tol() const { return tol_; }
    std::optional<int> minimal_horizon() const { return min_k_; }

    /// F_s-measurable part of x_m (weights of the innovations known at s).
    double measurable_part(long s, std::size_t m) const {
        const auto& b = *path_;
        const long lo = 1 - static_cast<long>(b.K);
        const long hi = std::min<long>(s, static_cast<long>(m));
        double acc = 0.0;
        for (long j = lo; j <= hi; ++j) {
            double w = b.a(m - static_cast<std::size_t>(j));
            if (j <= 0) w -= b.a(static_cast<std::size_t>(-j));
            acc += w * b.eps_at(j);
        }
        return acc;
    }

    /// E_t f(x_{t+k}); k = 0 is the measurable case f(x_t).
    double cond_exp(long t, std::size_t k) const {
        const auto& b = *path_;
        if (k == 0) {
            if (t < 1) return f_.eval(0.0);
            return f_.eval(b.x[static_cast<std::size_t>(t - 1)]);
        }
        require_horizon(k);
        const double y = measurable_part(t, static_cast<std::size_t>(t) + k);
        const double lam_max = truncation_point(k);
        // (1/pi) int_0^Lam Re[fhat(l) e^{-i l y} prod_i psi(-l a_i)] dl
        const auto integrand = [this, k, y](double lam) {
            return (f_.fhat(lam) * std::polar(1.0, -lam * y) * cf_product(lam, k)).real();
        };
        const auto panels = static_cast<std::size_t>(
            std::clamp(std::ceil(lam_max * (std::abs(y) + 1.0) / 3.0), 16.0, 8192.0));
        return quad::adaptive_panels(integrand, quad::uniform_knots(0.0, lam_max, panels), tol_) /
               std::numbers::pi;
    }

    /// E_{t-1} xi_{kt}^2: double Fourier integral against
    /// theta(l1 a_k, l2 a_k), reduced to an autoconvolution on a uniform grid.
    double cond_var_term(long t, std::size_t k) const {
        require_horizon(std::max<std::size_t>(k, 1));
        const auto& b = *path_;
        const double ak = b.a(k);
        const double y = measurable_part(t - 1, static_cast<std::size_t>(t) + k);
        const double lam_max = truncation_point(k);
        std::size_t pts = 1 + (1u << 9);
        const auto need =
            static_cast<std::size_t>(std::min(1e6, 8.0 * lam_max * (std::abs(y) + 1.0)));
        while (pts < need) pts = 2 * pts - 1;

        double prev = eval_var_grid(t, k, ak, y, lam_max, pts);
        for (int round = 0; round < 3; ++round) {
            pts = 2 * pts - 1;
            const double cur = eval_var_grid(t, k, ak, y, lam_max, pts);
            const bool ok = std::abs(cur - prev) <= tol_ * (1.0 + std::abs(cur));
            prev = cur;
            if (ok) break;
        }
        return std::max(prev, 0.0);
    }

  private:
    void require_horizon(std::size_t k) const {
        if (!min_k_ || static_cast<int>(k) < *min_k_) {
            std::string msg = "Fourier inversion not integrable at horizon k=" + std::to_string(k);
            if (min_k_) msg += "; smallest valid horizon is " + std::to_string(*min_k_);
            throw IntegrabilityError(msg, min_k_);
        }
    }

    std::complex<double> cf_product(double lam, std::size_t k) const {
        std::complex<double> p{1.0, 0.0};
        for (std::size_t i = 0; i < k; ++i) p *= psi_(-lam * path_->a(i));
        return p;
    }

    /// Doubling search for a truncation point where the integrand magnitude
    /// has decayed past the tolerance budget.
    double truncation_point(std::size_t k) const {
        double lam = 8.0;
        const double budget = tol_ / 16.0;
        while (lam < 1e7) {
            double peak = 0.0;
            for (int s = 0; s < 5; ++s) {
                const double l = lam * (1.0 + 0.08 * s);
                peak = std::max(peak, std::abs(f_.fhat(l)) * std::abs(cf_product(l, k)));
            }
            if (peak * lam < budget) return lam;
            lam *= 2.0;
        }
        throw IntegrabilityError("integrand does not decay within the truncation budget",
                                 min_k_);
    }

    double eval_var_grid(long /*t*/, std::size_t k, double ak, double y, double lam_max,
                         std::size_t pts) const {
        const double step = 2.0 * lam_max / static_cast<double>(pts - 1);
        std::vector<std::complex<double>> u(pts);
        for (std::size_t p = 0; p < pts; ++p) {
            const double lam = -lam_max + step * static_cast<double>(p);
            double w = (p == 0 || p + 1 == pts) ? 1.0 : (p % 2 == 1 ? 4.0 : 2.0);
            w *= step / 3.0;
            u[p] = w * f_.fhat(lam) * std::polar(1.0, -lam * y) * cf_product(lam, k) /
                   (2.0 * std::numbers::pi);
        }
        // separable part: (sum_p u_p psi(-lam_p a_k))^2
        std::complex<double> sep{0.0, 0.0};
        for (std::size_t p = 0; p < pts; ++p) {
            const double lam = -lam_max + step * static_cast<double>(p);
            sep += u[p] * psi_(-lam * ak);
        }
        // coupled part via autoconvolution over lam_p + lam_q
        const auto conv = detail::autoconvolve_fft(u);
        std::complex<double> coupled{0.0, 0.0};
        for (std::size_t s = 0; s < conv.size(); ++s) {
            const double mu = -2.0 * lam_max + step * static_cast<double>(s);
            coupled += conv[s] * psi_(-mu * ak);
        }
        return (coupled - sep * sep).real();
    }

    const PathBundle* path_;
    RealFunction f_;
    double tol_;
    std::function<std::complex<double>(double)> psi_;
    std::optional<int> min_k_;
};

/// E_t f(x_{t+k}) for k >= 1 via the inversion formula.
inline double conditional_expectation(const PathBundle& path, const RealFunction& f, long t,
                                      std::size_t k, double tol = 1e-9) {
    if (k < 1) throw DomainError("conditional_expectation: k >= 1 required");
    if (t < 1 - static_cast<long>(path.K))
        throw DomainError("conditional_expectation: t before the pre-sample window");
    return ConditionalEngine(path, f, tol).cond_exp(t, k);
}

/// Telescoping martingale decomposition S_n f = N_n f + sum_k M_nk f with
/// per-k martingale-difference arrays xi_{kt} and their quadratic variation.
struct MartingaleDecomposition {
    std::size_t n = 0;
    double S_n = 0.0;                     // direct path sum
    double N_n = 0.0;                     // sum_t E_0 f(x_t)
    std::vector<double> M;                // M[k] = sum_{t<=n-k} xi_{kt}
    std::vector<std::vector<double>> xi;  // xi[k][t-1]
    std::vector<double> U;                // U[k] = sum_t xi_{kt}^2
    std::vector<double> V;                // V[k] = sum_t E_{t-1} xi_{kt}^2
    double quadrature_tol = 0.0;

    double reconstruction_residual() const {
        double m_total = 0.0;
        for (double mk : M) m_total += mk;
        return std::abs(S_n - N_n - m_total);
    }
};

struct DecompositionOptions {
    std::size_t n_max = 64;
    double tol = 1e-9;
    bool with_conditional_variance = true;
};

inline MartingaleDecomposition martingale_decomposition(const PathBundle& path,
                                                        const RealFunction& f,
                                                        DecompositionOptions opt = {}) {
    if (path.n > opt.n_max)
        throw ResourceError("martingale_decomposition: n exceeds n_max (O(n^2) quadratures)");
    if (path.model.family != Family::gaussian && path.model.family != Family::exact_stable)
        throw ConfigError("martingale_decomposition: gaussian or exact-stable innovations only");

    ConditionalEngine eng(path, f, opt.tol);
    const auto n = path.n;

    // C[t][k] = E_t f(x_{t+k}) for t+k <= n; each value computed once so the
    // telescoping cancellation is exact in floating point.
    std::vector<std::vector<double>> C(n + 1);
    for (std::size_t t = 0; t <= n; ++t) {
        C[t].resize(n - t + 1);
        for (std::size_t k = 0; k + t <= n; ++k)
            C[t][k] = eng.cond_exp(static_cast<long>(t), k);
    }

    MartingaleDecomposition d;
    d.n = n;
    d.quadrature_tol = opt.tol;
    d.S_n = sum_zero_energy(path, f, true);
    d.N_n = 0.0;
    for (std::size_t t = 1; t <= n; ++t) d.N_n += C[0][t];

    d.M.assign(n, 0.0);
    d.U.assign(n, 0.0);
    d.xi.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        d.xi[k].resize(n - k);
        for (std::size_t t = 1; t + k <= n; ++t) {
            const double x = C[t][k] - C[t - 1][k + 1];
            d.xi[k][t - 1] = x;
            d.M[k] += x;
            d.U[k] += x * x;
        }
    }

    if (opt.with_conditional_variance) {
        d.V.assign(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t t = 1; t + k <= n; ++t)
                d.V[k] += eng.cond_var_term(static_cast<long>(t), k);
    }
    return d;
}

/// ([M], <M>) per martingale index k.
inline std::pair<std::vector<double>, std::vector<double>> quadratic_variation(
    const MartingaleDecomposition& d) {
    if (d.V.empty())
        throw DomainError("quadratic_variation: decomposition built without conditional variance");
    return {d.U, d.V};
}

// ---------------------------------------------------------------------------
// Order bound delta_n and moment proxies
// ---------------------------------------------------------------------------

struct ClassNorms {
    double sup = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double fourier = 0.0;  // sup of grid beta-norm estimates
};

/// Per-norm suprema over the members of a class at a given beta.
inline ClassNorms class_norms(std::span<const RealFunction> members, double beta) {
    ClassNorms nn;
    for (const auto& f : members) {
        nn.sup = std::max(nn.sup, f.sup_norm);
        nn.l1 = std::max(nn.l1, f.l1_norm);
        nn.l2 = std::max(nn.l2, f.l2_norm);
        nn.fourier = std::max(nn.fourier, beta_norm(f, beta).value);
    }
    return nn;
}

/// Scale bound ||F||_inf + e_n^{1/2}(||F||_1 + ||F||_2) + e_n d_n^{-beta} ||F||_[beta]
/// governing max_f |S_n f| up to a log factor.
inline double delta_n(double beta, const ClassNorms& norms, std::size_t n,
                      const ProcessSpec& spec, const NormingSequence& rho) {
    const double bb = beta_bar(spec.hurst());
    if (!(beta > 0.0 && beta < bb))
        throw DomainError("delta_n: beta must lie in (0, " + std::to_string(bb) +
                          "); the modified large-beta bound is not implemented");
    const auto np = norming(spec, rho, n);
    return norms.sup + std::sqrt(np.e) * (norms.l1 + norms.l2) +
           np.e * std::pow(np.d, -beta) * norms.fourier;
}

inline double delta_n(double beta, std::span<const RealFunction> members, std::size_t n,
                      const ProcessSpec& spec, const NormingSequence& rho) {
    return delta_n(beta, class_norms(members, beta), n, spec, rho);
}

enum class OrliczKind { tau1, tau23 };

/// Moment-growth proxy for the Orlicz norms: max over a small p-ladder of
/// ||Z||_p / p!^{1/p} (tau1) or ||Z||_{2p} / (3p)!^{1/2p} (tau23). Used only
/// for monotone comparisons, never as an exact norm.
inline double orlicz_moment_proxy(std::span<const double> samples, OrliczKind kind) {
    if (samples.size() < 1000)
        throw PowerError("orlicz_moment_proxy: at least 10^3 samples required");
    double best = 0.0;
    for (int p = 1; p <= 4; ++p) {
        double acc = 0.0;
        const double q = (kind == OrliczKind::tau1) ? p : 2.0 * p;
        for (double z : samples) acc += std::pow(std::abs(z), q);
        const double norm_q = std::pow(acc / static_cast<double>(samples.size()), 1.0 / q);
        const double scale = (kind == OrliczKind::tau1)
                                 ? std::pow(std::tgamma(p + 1.0), 1.0 / p)
                                 : std::pow(std::tgamma(3.0 * p + 1.0), 1.0 / (2.0 * p));
        best = std::max(best, norm_q / scale);
    }
    return best;
}

/// Lattice of recentered bandwidth-scaled functions used for the maximal
/// order-bound experiments; every member integrates to zero.
inline std::vector<RealFunction> recentered_lattice(const RealFunction& base,
                                                    std::span<const double> a_values,
                                                    std::span<const double> b_values,
                                                    double d_n) {
    std::vector<RealFunction> out;
    out.reserve(a_values.size() * b_values.size());
    for (double a : a_values)
        for (double b : b_values) out.push_back(recentered(base, d_n * a, b));
    return out;
}

/// Smallest horizon from which the ratios |a_l| / c_k (l in [k/2, k]) stay
/// inside a fixed multiplicative band of their overall median; a diagnostic
/// for when the coefficient partial sums behave regularly.
inline std::size_t smallest_sandwich_horizon(const ProcessSpec& spec, const NormingSequence& rho,
                                             std::span<const double> coeff_partial,
                                             double band = 3.0) {
    const std::size_t K = coeff_partial.size() - 1;
    if (K < 4) throw DomainError("smallest_sandwich_horizon: need more coefficients");
    std::vector<double> all;
    auto ratios_at = [&](std::size_t k) {
        std::vector<double> rs;
        for (std::size_t l = k / 2; l <= k; ++l)
            rs.push_back(std::abs(coeff_partial[l]) / std::abs(norming(spec, rho, k).c));
        return rs;
    };
    for (std::size_t k = 2; k <= K; ++k)
        for (double r : ratios_at(k)) all.push_back(r);
    const double med = stats::median(all);
    std::size_t k0 = K;
    for (std::size_t k = K; k >= 2; --k) {
        bool ok = true;
        for (double r : ratios_at(k))
            if (r < med / band || r > med * band) ok = false;
        if (!ok) break;
        k0 = k;
    }
    return k0 - 1;  // ratios are in-band for every k > k0
}

}  // namespace lfsm
