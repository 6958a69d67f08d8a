#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lfsm/errors.hpp"
#include "lfsm/function_space.hpp"
#include "lfsm/linear_process.hpp"
#include "lfsm/stats.hpp"

namespace lfsm {

/// Sorted view of a path for windowed kernel sums.
struct SortedPath {
    std::vector<double> xs;            // ascending
    std::vector<std::uint32_t> order;  // original indices

    static SortedPath build(std::span<const double> x) {
        SortedPath sp;
        sp.order.resize(x.size());
        std::iota(sp.order.begin(), sp.order.end(), 0u);
        std::sort(sp.order.begin(), sp.order.end(),
                  [&x](std::uint32_t a, std::uint32_t b) { return x[a] < x[b]; });
        sp.xs.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) sp.xs[i] = x[sp.order[i]];
        return sp;
    }

    std::pair<std::size_t, std::size_t> range(double lo, double hi) const {
        const auto b = std::lower_bound(xs.begin(), xs.end(), lo) - xs.begin();
        const auto e = std::upper_bound(xs.begin(), xs.end(), hi) - xs.begin();
        return {static_cast<std::size_t>(b), static_cast<std::size_t>(e)};
    }
};

inline std::vector<double> make_grid(double lo, double hi, double mesh) {
    if (!(mesh > 0.0) || !(lo <= hi)) throw DomainError("make_grid: bad grid parameters");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / mesh + 1e-9)) + 1;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + mesh * static_cast<double>(i);
    return g;
}

/// The additive functional (e_n h)^{-1} sum_t f((x_t - d_n a)/h) sampled on a
/// spatial grid of normalized locations a.
struct LocalTimeField {
    std::vector<double> a_grid;
    std::vector<double> values;
    std::string f_name = "f";
    double h = 1.0;
    std::size_t n = 0;
    double d_n = 1.0;
    double e_n = 1.0;

    /// Linear interpolation in a; 0 outside the grid.
    double value_at(double a) const {
        if (a_grid.empty() || a < a_grid.front() || a > a_grid.back()) return 0.0;
        const auto it = std::upper_bound(a_grid.begin(), a_grid.end(), a);
        if (it == a_grid.begin()) return values.front();
        const auto j = static_cast<std::size_t>(it - a_grid.begin());
        if (j >= a_grid.size()) return values.back();
        const double w = (a - a_grid[j - 1]) / (a_grid[j] - a_grid[j - 1]);
        return values[j - 1] * (1.0 - w) + values[j] * w;
    }

    /// Exact grid-point lookup (tolerance 1e-9); throws when absent.
    std::size_t index_of(double a) const {
        const auto it = std::lower_bound(a_grid.begin(), a_grid.end(), a - 1e-9);
        if (it == a_grid.end() || std::abs(*it - a) > 1e-9)
            throw DomainError("grid point not present in the field");
        return static_cast<std::size_t>(it - a_grid.begin());
    }

    /// Trapezoidal integral over the grid.
    double trapz() const {
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < a_grid.size(); ++j)
            acc += 0.5 * (values[j] + values[j + 1]) * (a_grid[j + 1] - a_grid[j]);
        return acc;
    }

    /// Cumulative trapezoidal integral up to each grid point.
    std::vector<double> cumulative() const {
        std::vector<double> c(a_grid.size(), 0.0);
        for (std::size_t j = 1; j < a_grid.size(); ++j)
            c[j] = c[j - 1] + 0.5 * (values[j] + values[j - 1]) * (a_grid[j] - a_grid[j - 1]);
        return c;
    }
};

/// Evaluate the field for one path. Compactly windowed f is summed over a
/// sorted-path window per grid point; cost O(n log n + total window size).
inline LocalTimeField local_time_field(const PathBundle& path, const RealFunction& f, double h,
                                       std::vector<double> a_grid) {
    if (!(h > 0.0)) throw DomainError("local_time_field: h > 0 required");
    LocalTimeField field;
    field.a_grid = std::move(a_grid);
    field.values.assign(field.a_grid.size(), 0.0);
    field.f_name = f.name;
    field.h = h;
    field.n = path.n;
    field.d_n = path.d_n;
    field.e_n = path.e_n;

    const auto sp = SortedPath::build(path.x);
    const double inv = 1.0 / (path.e_n * h);
    for (std::size_t j = 0; j < field.a_grid.size(); ++j) {
        const double center = path.d_n * field.a_grid[j];
        const auto [b, e] = sp.range(center + h * f.window.lo, center + h * f.window.hi);
        double acc = 0.0, c = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            const double y = f.eval((sp.xs[i] - center) / h) - c;
            const double t = acc + y;
            c = (t - acc) - y;
            acc = t;
        }
        field.values[j] = inv * acc;
    }
    return field;
}

/// Exact value of the mass integral int_R L_n^f(a) da for bandwidth-1 fields:
/// (1/(e_n d_n)) * n * int f.
inline double mass_closed_form(const PathBundle& path, const RealFunction& f) {
    if (!f.integral) throw DomainError("mass_closed_form: f needs a known integral");
    return static_cast<double>(path.n) / (path.e_n * path.d_n) * *f.integral;
}

/// Occupation cdf mu_n(a) = n^{-1} #{t : x_t <= d_n a}.
inline std::vector<double> occupation_cdf(const PathBundle& path,
                                          const std::vector<double>& a_grid) {
    std::vector<double> xs(path.x);
    std::sort(xs.begin(), xs.end());
    std::vector<double> mu(a_grid.size());
    for (std::size_t j = 0; j < a_grid.size(); ++j) {
        const auto c = std::upper_bound(xs.begin(), xs.end(), path.d_n * a_grid[j]) - xs.begin();
        mu[j] = static_cast<double>(c) / static_cast<double>(path.n);
    }
    return mu;
}

/// Occupation density of a limit path on [0,1]: normalized histogram over
/// bins of the given width centered at the grid points, optionally smoothed
/// by the triangular kernel.
inline std::vector<double> reference_local_time(const std::vector<double>& X,
                                                const std::vector<double>& a_grid,
                                                double bin_width, bool smooth = false) {
    if (!(bin_width > 0.0)) throw DomainError("reference_local_time: bin_width > 0 required");
    if (X.empty() || a_grid.empty()) throw DomainError("reference_local_time: empty input");
    std::vector<double> L(a_grid.size(), 0.0);
    const double w = 1.0 / (static_cast<double>(X.size()) * bin_width);
    if (smooth) {
        const auto phi = kernels::triangular();
        for (double v : X)
            for (std::size_t j = 0; j < a_grid.size(); ++j)
                L[j] += w * phi.eval((v - a_grid[j]) / bin_width);
        return L;
    }
    const double lo = a_grid.front() - 0.5 * bin_width;
    for (double v : X) {
        const auto j = static_cast<long>(std::floor((v - lo) / bin_width));
        if (j >= 0 && j < static_cast<long>(L.size())) L[static_cast<std::size_t>(j)] += w;
    }
    return L;
}

/// Random level set A = {x : L_n(x/d_n) >= eps} together with the fraction
/// of the trajectory it misses.
struct SupportSet {
    double epsilon = 0.0;
    double coverage = 0.0;  // (1/n) #{t : x_t not in A}
    std::shared_ptr<const LocalTimeField> field;

    bool contains(double x) const { return field->value_at(x / field->d_n) >= epsilon; }
};

inline SupportSet support_set(const LocalTimeField& field, const PathBundle& path,
                              double epsilon) {
    if (epsilon < 0.0) throw DomainError("support_set: epsilon >= 0 required");
    SupportSet s;
    s.epsilon = epsilon;
    s.field = std::make_shared<LocalTimeField>(field);
    std::size_t missed = 0;
    for (double xt : path.x)
        if (!s.contains(xt)) ++missed;
    s.coverage = static_cast<double>(missed) / static_cast<double>(path.n);
    return s;
}

/// Empirical spatial increment moment E|L(a1) - L(a2)|^p across replicated
/// fields (both locations must be grid points of every field).
inline double increment_moment(const std::vector<LocalTimeField>& fields, double a1, double a2,
                               int p) {
    if (fields.size() < 200)
        throw PowerError("increment_moment: at least 200 replications required");
    if (p < 2 || p % 2 != 0) throw DomainError("increment_moment: p must be even and >= 2");
    if (a1 == a2) return 0.0;
    double acc = 0.0;
    for (const auto& f : fields) {
        const double d = f.values[f.index_of(a1)] - f.values[f.index_of(a2)];
        acc += std::pow(std::abs(d), p);
    }
    return acc / static_cast<double>(fields.size());
}

struct IncrementMomentReport {
    int p = 2;
    std::vector<double> gaps;     // spatial gaps Delta
    std::vector<double> moments;  // E|L(a+Delta) - L(a)|^p
    double slope = 0.0;           // log-log slope of moments^{1/p} against Delta
};

/// Moment ladder over spatial gaps and the fitted Holder slope of the p-th
/// root moment.
inline IncrementMomentReport increment_moments(const std::vector<LocalTimeField>& fields,
                                               double a_base, std::vector<double> gaps, int p) {
    IncrementMomentReport rep;
    rep.p = p;
    rep.gaps = std::move(gaps);
    std::vector<double> roots;
    for (double gap : rep.gaps) {
        rep.moments.push_back(increment_moment(fields, a_base + gap, a_base, p));
        roots.push_back(std::pow(rep.moments.back(), 1.0 / static_cast<double>(p)));
    }
    rep.slope = stats::loglog_slope(rep.gaps, roots);
    return rep;
}

}  // namespace lfsm
