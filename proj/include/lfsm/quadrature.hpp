#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "lfsm/errors.hpp"

namespace lfsm::quad {

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance tol.
template <class F>
double adaptive(const F& f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    if (!(a < b)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Adaptive quadrature over a panel list; each panel gets its share of tol.
/// Oscillatory integrands should be pre-split so panels hold O(1) periods.
template <class F>
double adaptive_panels(const F& f, const std::vector<double>& knots, double tol = 1e-10) {
    if (knots.size() < 2) return 0.0;
    double total = 0.0;
    const double per = tol / static_cast<double>(knots.size() - 1);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        total += adaptive(f, knots[i], knots[i + 1], per);
    return total;
}

/// Uniform panel knots: [a, b] split into n equal panels.
inline std::vector<double> uniform_knots(double a, double b, std::size_t n) {
    std::vector<double> k(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        k[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    return k;
}

/// Integral of |f| over an unbounded domain by expanding windows; throws
/// DivergenceError when window contributions stop decaying.
template <class F>
double expanding(const F& f, double tol = 1e-10) {
    double total = adaptive(f, -1.0, 1.0, tol);
    double lo = -1.0, hi = 1.0, width = 1.0;
    double prev = 1e300;
    for (int round = 0; round < 60; ++round) {
        const double left = adaptive(f, lo - width, lo, tol);
        const double right = adaptive(f, hi, hi + width, tol);
        const double shell = left + right;
        total += shell;
        lo -= width;
        hi += width;
        if (std::abs(shell) < tol) return total;
        if (round > 6 && std::abs(shell) > 0.5 * std::abs(prev) + tol)
            throw DivergenceError("integral tail is not decaying; integral diverges");
        prev = shell;
        width *= 2.0;
    }
    throw DivergenceError("integral tail did not converge within the window budget");
}

/// Fourier transform fhat(lambda) = int e^{i lambda x} f(x) dx of a compactly
/// supported f, via the exact transform of a piecewise-linear interpolant on
/// [lo, hi] with n nodes. Error is O((hi-lo)^2/n^2), uniform in lambda, and the
/// interpolant's sinc^2 factor reproduces the correct large-lambda decay.
class PiecewiseLinearTransform {
  public:
    PiecewiseLinearTransform(const std::function<double(double)>& f, double lo, double hi,
                             std::size_t n = 4096)
        : lo_(lo), step_((hi - lo) / static_cast<double>(n - 1)), values_(n) {
        for (std::size_t j = 0; j < n; ++j)
            values_[j] = f(lo_ + step_ * static_cast<double>(j));
    }

    std::complex<double> operator()(double lambda) const {
        // sum_j f(x_j) * step * sinc^2(lambda*step/2) * e^{i lambda x_j}
        const double h = 0.5 * lambda * step_;
        const double s = (std::abs(h) < 1e-8) ? 1.0 - h * h / 3.0 : std::sin(h) / h;
        std::complex<double> acc{0.0, 0.0};
        const std::complex<double> rot{std::cos(lambda * step_), std::sin(lambda * step_)};
        std::complex<double> phase{std::cos(lambda * lo_), std::sin(lambda * lo_)};
        for (double v : values_) {
            acc += v * phase;
            phase *= rot;
        }
        return acc * (step_ * s * s);
    }

  private:
    double lo_, step_;
    std::vector<double> values_;
};

}  // namespace lfsm::quad
