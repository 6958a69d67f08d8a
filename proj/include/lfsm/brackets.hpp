#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "lfsm/errors.hpp"
#include "lfsm/function_space.hpp"

namespace lfsm {

namespace detail {

/// Piecewise-linear function on a uniform grid, zero outside its domain.
/// First and last node values must be zero so the extension is continuous.
struct PiecewiseLinear {
    double lo = 0.0;
    double step = 1.0;
    std::vector<double> nodes;

    double eval(double x) const {
        const double t = (x - lo) / step;
        if (t <= 0.0 || t >= static_cast<double>(nodes.size() - 1)) return 0.0;
        const auto i = static_cast<std::size_t>(t);
        const double w = t - static_cast<double>(i);
        return nodes[i] * (1.0 - w) + nodes[i + 1] * w;
    }

    double abs_integral() const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            const double a = nodes[i], b = nodes[i + 1];
            if (a * b >= 0.0)
                acc += 0.5 * (std::abs(a) + std::abs(b));
            else
                acc += 0.5 * (a * a + b * b) / (std::abs(a) + std::abs(b));
        }
        return acc * step;
    }

    double sq_integral() const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            acc += (nodes[i] * nodes[i] + nodes[i] * nodes[i + 1] +
                    nodes[i + 1] * nodes[i + 1]) / 3.0;
        return acc * step;
    }

    double signed_integral() const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            acc += 0.5 * (nodes[i] + nodes[i + 1]);
        return acc * step;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : nodes) m = std::max(m, std::abs(v));
        return m;
    }

    double max_slope() const {
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            m = std::max(m, std::abs(nodes[i + 1] - nodes[i]) / step);
        return m;
    }
};

inline RealFunction to_function(PiecewiseLinear pl, const std::string& name) {
    auto shared = std::make_shared<PiecewiseLinear>(std::move(pl));
    RealFunction f;
    f.eval = [shared](double x) { return shared->eval(x); };
    f.sup_norm = shared->max_abs();
    f.l1_norm = shared->abs_integral();
    f.l2_norm = std::sqrt(shared->sq_integral());
    f.lipschitz = shared->max_slope();
    const double hi = shared->lo + shared->step * static_cast<double>(shared->nodes.size() - 1);
    f.support = Interval{shared->lo, hi};
    f.window = *f.support;
    f.integral = shared->signed_integral();
    f.fhat_abs_integrable = true;
    f.name = name;
    return f;
}

/// f + c * g. Norms are triangle-inequality bounds (bracket functions are
/// only ever consumed through eval and the exact l1 gap of the pair).
inline RealFunction affine_combo(const RealFunction& f, double c, const RealFunction& g,
                                 const std::string& name) {
    RealFunction out;
    auto fe = f.eval, ge = g.eval;
    out.eval = [fe, c, ge](double x) { return fe(x) + c * ge(x); };
    if (f.fhat && g.fhat) {
        auto fh = f.fhat, gh = g.fhat;
        out.fhat = [fh, c, gh](double lam) { return fh(lam) + c * gh(lam); };
    }
    if (f.integral && g.integral) out.integral = *f.integral + c * *g.integral;
    out.sup_norm = f.sup_norm + std::abs(c) * g.sup_norm;
    out.l1_norm = f.l1_norm + std::abs(c) * g.l1_norm;
    out.l2_norm = f.l2_norm + std::abs(c) * g.l2_norm;
    out.window = union_window(f.window, g.window);
    if (f.support && g.support) out.support = out.window;
    if (f.lipschitz && g.lipschitz) out.lipschitz = *f.lipschitz + std::abs(c) * *g.lipschitz;
    out.fhat_abs_integrable = f.fhat_abs_integrable && g.fhat_abs_integrable;
    out.name = name;
    return out;
}

}  // namespace detail

/// A continuous L1 bracket pair l <= u covering some members of a class.
struct Bracket {
    RealFunction lower;
    RealFunction upper;
    double l1_gap = 0.0;  // ||upper - lower||_1
};

struct BracketCover {
    std::vector<Bracket> brackets;
    std::size_t count() const { return brackets.size(); }
};

/// Index of a bracket containing f, verified pointwise at grid_points spots
/// over the joint window; nullopt when no bracket covers f.
inline std::optional<std::size_t> find_bracket(const BracketCover& cover, const RealFunction& f,
                                               std::size_t grid_points = 1000) {
    for (std::size_t j = 0; j < cover.brackets.size(); ++j) {
        const auto& b = cover.brackets[j];
        const Interval w = detail::union_window(b.upper.window, f.window);
        bool ok = true;
        for (std::size_t i = 0; i <= grid_points && ok; ++i) {
            const double x =
                w.lo + w.width() * static_cast<double>(i) / static_cast<double>(grid_points);
            const double v = f.eval(x);
            const double tol = 1e-12 * (1.0 + std::abs(v));
            if (v < b.lower.eval(x) - tol || v > b.upper.eval(x) + tol) ok = false;
        }
        if (ok) return j;
    }
    return std::nullopt;
}

/// Function classes of the three supported shapes: an explicit finite list,
/// a parametric family with a Holder-in-parameter modulus, or a Holder
/// smoothness ball under a compactly supported envelope.
class FunctionClass {
  public:
    enum class Kind { finite, parametric, smoothness_ball };

    static FunctionClass finite(std::vector<RealFunction> members, RealFunction envelope) {
        FunctionClass c;
        c.kind_ = Kind::finite;
        c.members_ = std::move(members);
        c.envelope_ = std::move(envelope);
        return c;
    }

    /// Members g(., theta), theta in [lo, hi], with
    /// |g(x,t) - g(x,t')| <= modulus(x) |t - t'|^tau; modulus continuous.
    static FunctionClass parametric(std::function<RealFunction(double)> family, double theta_lo,
                                    double theta_hi, double tau, RealFunction modulus,
                                    RealFunction envelope) {
        if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("parametric class: tau in (0,1]");
        if (!(theta_lo < theta_hi)) throw DomainError("parametric class: empty parameter range");
        FunctionClass c;
        c.kind_ = Kind::parametric;
        c.family_ = std::move(family);
        c.theta_lo_ = theta_lo;
        c.theta_hi_ = theta_hi;
        c.tau_ = tau;
        c.modulus_ = std::move(modulus);
        c.envelope_ = std::move(envelope);
        return c;
    }

    /// {f : |f| <= F, |f(x)-f(y)| <= L|x-y|^tau} with compactly supported F.
    static FunctionClass smoothness_ball(double tau, double L, RealFunction envelope) {
        if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("smoothness ball: tau in (0,1]");
        if (!(L > 0.0)) throw DomainError("smoothness ball: L > 0");
        if (!envelope.support)
            throw UnsupportedError("smoothness ball net needs a compactly supported envelope");
        FunctionClass c;
        c.kind_ = Kind::smoothness_ball;
        c.ball_tau_ = tau;
        c.ball_L_ = L;
        c.envelope_ = std::move(envelope);
        return c;
    }

    Kind kind() const { return kind_; }
    const RealFunction& envelope() const { return envelope_; }
    const std::vector<RealFunction>& members() const { return members_; }

    /// Representatives for validity checks: the list itself, a parameter
    /// sweep, or envelope-clipped cosine waves inside the Holder ball.
    std::vector<RealFunction> sample_members(std::size_t count) const {
        switch (kind_) {
            case Kind::finite: return members_;
            case Kind::parametric: {
                std::vector<RealFunction> out;
                const auto denom = static_cast<double>(std::max<std::size_t>(count - 1, 1));
                for (std::size_t i = 0; i < count; ++i)
                    out.push_back(
                        family_(theta_lo_ + (theta_hi_ - theta_lo_) * static_cast<double>(i) / denom));
                return out;
            }
            case Kind::smoothness_ball: {
                std::vector<RealFunction> out;
                for (std::size_t i = 0; i < count; ++i) {
                    const double omega = 0.25 + 0.5 * static_cast<double>(i);
                    // |d/dx amp*cos(omega x)| <= amp*omega kept under L
                    const double amp = 0.8 * ball_L_ / std::max(1.0, omega);
                    auto Fe = envelope_.eval;
                    RealFunction g;
                    g.eval = [Fe, amp, omega](double x) {
                        const double cap = std::abs(Fe(x));
                        return std::clamp(amp * std::cos(omega * x), -cap, cap);
                    };
                    g.support = envelope_.support;
                    g.window = envelope_.window;
                    g.name = "ball_member";
                    detail::fill_numeric_norms(g);
                    out.push_back(std::move(g));
                }
                return out;
            }
        }
        return {};
    }

    friend BracketCover bracket_cover(const FunctionClass& cls, double eps);

  private:
    Kind kind_ = Kind::finite;
    std::vector<RealFunction> members_;
    std::function<RealFunction(double)> family_;
    double theta_lo_ = 0.0, theta_hi_ = 0.0, tau_ = 1.0;
    RealFunction modulus_;
    double ball_tau_ = 1.0, ball_L_ = 1.0;
    RealFunction envelope_;
};

namespace detail {

/// Hull bracket for one (possibly discontinuous) compactly supported
/// function: running min/max over a +-delta window, piecewise-linearly
/// interpolated and clipped to the envelope.
inline Bracket hull_bracket(const RealFunction& f, const RealFunction& envelope, double eps) {
    if (!f.support)
        throw RefinementError("hull bracket needs compact support: " + f.name);
    double delta = 0.25;
    for (int round = 0; round < 22; ++round, delta *= 0.5) {
        const double lo = f.support->lo - 2.0 * delta, hi = f.support->hi + 2.0 * delta;
        const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / delta)) + 2;
        if (n > 2000000) break;
        PiecewiseLinear up, dn;
        up.lo = dn.lo = lo;
        up.step = dn.step = (hi - lo) / static_cast<double>(n - 1);
        up.nodes.assign(n, 0.0);
        dn.nodes.assign(n, 0.0);
        // node window +-1.25*delta sampled at delta/8 so any point within one
        // grid step of the node sees a full sample net around it
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double x = lo + up.step * static_cast<double>(i);
            double mx = f.eval(x), mn = mx, cap = std::abs(envelope.eval(x));
            for (int s = -10; s <= 10; ++s) {
                const double xs = x + delta * static_cast<double>(s) / 8.0;
                const double v = f.eval(xs);
                mx = std::max(mx, v);
                mn = std::min(mn, v);
                cap = std::max(cap, std::abs(envelope.eval(xs)));
            }
            // clip to the window maximum of the envelope; the point value
            // could cut below f just off the node
            up.nodes[i] = std::min(mx, cap);
            dn.nodes[i] = std::max(mn, -cap);
        }
        // both hulls sit on the same grid; the gap integral is exact
        const double gap = up.signed_integral() - dn.signed_integral();
        Bracket b{to_function(std::move(dn), f.name + "_lower"),
                  to_function(std::move(up), f.name + "_upper"), gap};
        if (b.l1_gap < eps) return b;
    }
    throw RefinementError("hull bracket cannot reach the requested epsilon for " + f.name);
}

inline Bracket bump_bracket(const RealFunction& f, double eps) {
    const auto bump = kernels::triangular();
    return Bracket{affine_combo(f, -eps / 3.0, bump, f.name + "_lower"),
                   affine_combo(f, +eps / 3.0, bump, f.name + "_upper"), 2.0 * eps / 3.0};
}

inline BracketCover ball_cover(const RealFunction& F, double tau, double L, double eps) {
    const Interval sup = *F.support;
    const double range = sup.width();
    const double ramp = std::clamp(0.125 * range, 0.125, 1.0);
    // total gap 2*margin*(range + ramp) stays under eps with margin below
    const double margin = 0.4 * eps / (range + ramp);
    const double q = margin;                                    // value quantization
    const double eta = std::pow(0.5 * margin / L, 1.0 / tau);   // x-grid step
    const auto cells = static_cast<std::size_t>(std::ceil(range / eta));
    if (cells > 64)
        throw RefinementError("smoothness-ball net: epsilon below the grid resolution cap");
    const std::size_t n = cells + 1;
    const double step = range / static_cast<double>(cells);

    std::vector<double> caps(n);
    for (std::size_t i = 0; i < n; ++i)
        caps[i] = std::abs(F.eval(sup.lo + step * static_cast<double>(i)));
    const double max_jump = L * std::pow(step, tau) + q;

    constexpr std::size_t hard_cap = 50000;
    std::vector<std::vector<double>> nets;
    std::vector<double> cur(n, 0.0);
    auto levels_at = [&](std::size_t i) {
        std::vector<double> ls;
        const auto jmax = static_cast<long>(std::floor(caps[i] / q + 0.5));
        for (long j = -jmax; j <= jmax; ++j) ls.push_back(std::clamp(q * static_cast<double>(j), -caps[i], caps[i]));
        if (ls.empty()) ls.push_back(0.0);
        return ls;
    };
    std::function<void(std::size_t)> dfs = [&](std::size_t i) {
        if (nets.size() > hard_cap) return;
        if (i == n) {
            nets.push_back(cur);
            return;
        }
        for (double v : levels_at(i)) {
            if (i > 0 && std::abs(v - cur[i - 1]) > max_jump + 1e-12) continue;
            cur[i] = v;
            dfs(i + 1);
        }
    };
    dfs(0);
    if (nets.size() > hard_cap)
        throw RefinementError("smoothness-ball net: bracket count exceeds the enumeration cap");

    const auto pad = kernels::plateau(sup.lo, sup.hi, ramp);
    BracketCover cover;
    cover.brackets.reserve(nets.size());
    for (auto& nodes : nets) {
        PiecewiseLinear pl;
        pl.lo = sup.lo - step;
        pl.step = step;
        pl.nodes.resize(n + 2, 0.0);
        std::copy(nodes.begin(), nodes.end(), pl.nodes.begin() + 1);
        pl.nodes.front() = pl.nodes.back() = 0.0;
        auto center = to_function(std::move(pl), "ball_net");
        cover.brackets.push_back(Bracket{affine_combo(center, -margin, pad, "ball_net_lower"),
                                         affine_combo(center, +margin, pad, "ball_net_upper"),
                                         2.0 * margin * pad.l1_norm});
    }
    return cover;
}

}  // namespace detail

/// Continuous epsilon-brackets covering the class; every bracket function is
/// Lipschitz with compact support, hence has finite beta-moments. The count
/// is nondecreasing as epsilon decreases.
inline BracketCover bracket_cover(const FunctionClass& cls, double eps) {
    if (!(eps > 0.0)) throw DomainError("bracket_cover: eps > 0 required");

    // a single [-F, F] bracket suffices for coarse eps
    const auto& F = cls.envelope();
    if (eps > 2.0 * F.l1_norm) {
        RealFunction neg = F;
        auto Fe = F.eval;
        neg.eval = [Fe](double x) { return -Fe(x); };
        neg.fhat = nullptr;
        if (F.integral) neg.integral = -*F.integral;
        neg.name = F.name + "_neg";
        BracketCover cover;
        cover.brackets.push_back(Bracket{std::move(neg), F, 2.0 * F.l1_norm});
        return cover;
    }

    switch (cls.kind_) {
        case FunctionClass::Kind::finite: {
            BracketCover cover;
            for (const auto& f : cls.members_)
                cover.brackets.push_back(f.lipschitz ? detail::bump_bracket(f, eps)
                                                     : detail::hull_bracket(f, F, eps));
            return cover;
        }
        case FunctionClass::Kind::parametric: {
            const double range = cls.theta_hi_ - cls.theta_lo_;
            const double delta_max =
                2.0 * std::pow(0.9 * eps / (2.0 * cls.modulus_.l1_norm), 1.0 / cls.tau_);
            const auto cells = static_cast<std::size_t>(std::ceil(range / delta_max));
            const double delta = range / static_cast<double>(cells);
            const double margin = std::pow(0.5 * delta, cls.tau_);
            BracketCover cover;
            for (std::size_t j = 0; j < cells; ++j) {
                const double theta = cls.theta_lo_ + delta * (static_cast<double>(j) + 0.5);
                const auto g = cls.family_(theta);
                cover.brackets.push_back(
                    Bracket{detail::affine_combo(g, -margin, cls.modulus_, g.name + "_lower"),
                            detail::affine_combo(g, +margin, cls.modulus_, g.name + "_upper"),
                            2.0 * margin * cls.modulus_.l1_norm});
            }
            return cover;
        }
        case FunctionClass::Kind::smoothness_ball:
            return detail::ball_cover(F, cls.ball_tau_, cls.ball_L_, eps);
    }
    throw Error("unreachable");
}

}  // namespace lfsm
