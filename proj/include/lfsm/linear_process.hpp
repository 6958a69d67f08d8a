#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "lfsm/detail/fft.hpp"
#include "lfsm/errors.hpp"
#include "lfsm/innovations.hpp"

namespace lfsm {

/// Coefficient regimes of the linear filter v_t = sum_k phi_k eps_{t-k}:
///   short_memory    (a): summable coefficients with nonzero sum phi
///   long_memory     (b): phi_k ~ k^{H-1-1/alpha} pi_k, H > 1/alpha
///   anti_persistent (c): same tail order, H < 1/alpha, coefficients sum to 0
enum class ProcessCase { short_memory, long_memory, anti_persistent };

inline const char* process_case_name(ProcessCase c) {
    switch (c) {
        case ProcessCase::short_memory: return "a";
        case ProcessCase::long_memory: return "b";
        case ProcessCase::anti_persistent: return "c";
    }
    return "?";
}

struct ProcessSpec {
    ProcessCase pcase = ProcessCase::short_memory;
    double H = 0.5;          // cases b/c; by convention H = 1/alpha in case a
    double alpha = 2.0;      // copied from the innovation model
    std::vector<double> phi_case_a = {1.0};
    NormingSequence pi{1.0, 0.0};  // slowly varying factor, default constant 1

    double hurst() const {
        return pcase == ProcessCase::short_memory ? 1.0 / alpha : H;
    }

    /// Long-run coefficient sum (case a only).
    double phi_sum() const {
        return std::accumulate(phi_case_a.begin(), phi_case_a.end(), 0.0);
    }

    void validate() const {
        std::string err;
        auto add = [&err](const std::string& m) {
            if (!err.empty()) err += "; ";
            err += m;
        };
        if (!(alpha > 0.0 && alpha <= 2.0)) add("alpha must lie in (0, 2]");
        switch (pcase) {
            case ProcessCase::short_memory:
                if (phi_case_a.empty()) add("case (a) needs an explicit coefficient list");
                else if (!(phi_sum() > 0.0))
                    add("case (a) requires a positive coefficient sum (norming positivity)");
                if (!(alpha > 1.0)) add("case (a) requires alpha in (1, 2]");
                break;
            case ProcessCase::long_memory:
                if (!(H > 0.0 && H < 1.0)) add("H must lie in (0, 1)");
                if (!(H > 1.0 / alpha)) add("case (b) requires H > 1/alpha");
                break;
            case ProcessCase::anti_persistent:
                if (!(H > 0.0 && H < 1.0)) add("H must lie in (0, 1)");
                if (!(H < 1.0 / alpha)) add("case (c) requires H < 1/alpha");
                break;
        }
        if (!err.empty()) throw ConfigError("invalid process spec: " + err);
    }
};

/// Filter coefficients phi_0..phi_K. Case (c) renormalizes the tail weights
/// so the zero-sum constraint holds exactly at the truncation horizon.
inline std::vector<double> coefficients(const ProcessSpec& spec, std::size_t K) {
    spec.validate();
    if (K < 1) throw ConfigError("coefficient truncation K >= 1 required");
    std::vector<double> phi(K + 1, 0.0);
    switch (spec.pcase) {
        case ProcessCase::short_memory: {
            if (spec.phi_case_a.size() > K + 1)
                throw ConfigError("K too small for the case (a) coefficient list");
            std::copy(spec.phi_case_a.begin(), spec.phi_case_a.end(), phi.begin());
            break;
        }
        case ProcessCase::long_memory: {
            phi[0] = 1.0;
            const double p = spec.H - 1.0 - 1.0 / spec.alpha;
            for (std::size_t k = 1; k <= K; ++k)
                phi[k] = std::pow(static_cast<double>(k), p) * spec.pi(k);
            break;
        }
        case ProcessCase::anti_persistent: {
            phi[0] = 1.0;
            const double p = spec.H - 1.0 - 1.0 / spec.alpha;
            double total = 0.0;
            for (std::size_t k = 1; k <= K; ++k) {
                phi[k] = std::pow(static_cast<double>(k), p) * spec.pi(k);
                total += phi[k];
            }
            for (std::size_t k = 1; k <= K; ++k) phi[k] = -phi[k] / total;
            break;
        }
    }
    return phi;
}

struct NormingPoint {
    double c = 1.0;
    double d = 1.0;
    double e = 1.0;
};

/// Norming constants (c_k, d_k, e_k); regularly varying with indices
/// H - 1/alpha, H and 1 - H. k = 0 is only meaningful for c (c_0 = 1).
inline NormingPoint norming(const ProcessSpec& spec, const NormingSequence& rho, std::size_t k) {
    spec.validate();
    NormingPoint out;
    if (k == 0) {
        out.c = 1.0;
        out.d = out.e = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    if (spec.pcase == ProcessCase::short_memory) {
        out.c = spec.phi_sum();
    } else {
        const double idx = spec.H - 1.0 / spec.alpha;
        out.c = std::pow(static_cast<double>(k), idx) * spec.pi(k) / std::abs(idx);
    }
    out.d = std::pow(static_cast<double>(k), 1.0 / spec.alpha) * out.c * rho(k);
    out.e = static_cast<double>(k) / out.d;
    return out;
}

inline double norming_d(const ProcessSpec& spec, const NormingSequence& rho, std::size_t k) {
    if (k == 0) throw DomainError("d_k requires k >= 1");
    return norming(spec, rho, k).d;
}

inline double norming_e(const ProcessSpec& spec, const NormingSequence& rho, std::size_t k) {
    if (k == 0) throw DomainError("e_k requires k >= 1");
    return norming(spec, rho, k).e;
}

/// One simulated trajectory with its norming constants. Pre-sample
/// innovations eps_{1-K}..eps_0 are drawn explicitly so v_t is stationary
/// from t = 1. Immutable after construction.
struct PathBundle {
    std::size_t n = 0;
    std::size_t K = 0;
    std::vector<double> eps;     // eps[i] = eps_{i-K+1}, i = 0..n+K-1
    std::vector<double> v;       // v[t-1] = v_t, t = 1..n
    std::vector<double> x;       // x[t-1] = x_t, t = 1..n  (x_0 = 0)
    std::vector<double> coeffs;  // realized phi_0..phi_K
    std::vector<double> coeff_partial;  // a_i = phi_0 + ... + phi_i
    double d_n = 1.0;
    double e_n = 1.0;
    std::uint64_t seed = 0;
    ProcessSpec spec;
    InnovationModel model;

    double eps_at(long t) const {  // t in [1-K, n]
        return eps[static_cast<std::size_t>(t + static_cast<long>(K) - 1)];
    }

    /// Partial coefficient sum a_i; constant for i beyond the truncation.
    double a(std::size_t i) const {
        return coeff_partial[std::min(i, coeff_partial.size() - 1)];
    }
};

enum class ConvolutionMode { automatic, direct, fft };

inline std::size_t default_truncation(const ProcessSpec& spec, std::size_t n) {
    if (spec.pcase == ProcessCase::short_memory)
        return std::max<std::size_t>(1, spec.phi_case_a.size() - 1);
    return n;  // matches the path length's memory horizon
}

/// Simulate x_t = sum_{s<=t} v_s with the K-truncated filter.
inline PathBundle partial_sums(const ProcessSpec& spec, const InnovationModel& model,
                               std::size_t n, std::size_t K, std::uint64_t seed,
                               ConvolutionMode mode = ConvolutionMode::automatic) {
    spec.validate();
    model.validate();
    if (n < 1) throw DomainError("partial_sums: n >= 1 required");
    if (K < 1) throw ConfigError("partial_sums: truncation K >= 1 required");

    PathBundle b;
    b.n = n;
    b.K = K;
    b.seed = seed;
    b.spec = spec;
    b.model = model;
    b.coeffs = coefficients(spec, K);
    b.coeff_partial.resize(K + 1);
    std::partial_sum(b.coeffs.begin(), b.coeffs.end(), b.coeff_partial.begin());
    b.eps = sample_innovations(model, n + K, seed);

    const bool use_fft = (mode == ConvolutionMode::fft) ||
                         (mode == ConvolutionMode::automatic &&
                          static_cast<double>(n) * static_cast<double>(K + 1) > double(1 << 22));
    b.v.assign(n, 0.0);
    if (use_fft) {
        const auto conv = detail::convolve_fft(b.coeffs, b.eps);
        for (std::size_t t = 1; t <= n; ++t) b.v[t - 1] = conv[t + K - 1];
    } else {
        for (std::size_t t = 1; t <= n; ++t) {
            double acc = 0.0;
            for (std::size_t k = 0; k <= K; ++k)
                acc += b.coeffs[k] * b.eps[t - k + K - 1];
            b.v[t - 1] = acc;
        }
    }
    b.x.resize(n);
    std::partial_sum(b.v.begin(), b.v.end(), b.x.begin());

    const auto rho = calibrate_norming(model);
    const auto np = norming(spec, rho, n);
    b.d_n = np.d;
    b.e_n = np.e;
    return b;
}

/// Columnar dump (t, eps, v, x); pre-sample rows carry empty v and x.
inline void write_csv(const PathBundle& b, std::ostream& os) {
    os << "t,eps,v,x\n";
    for (long t = 1 - static_cast<long>(b.K); t <= static_cast<long>(b.n); ++t) {
        os << t << ',' << b.eps_at(t) << ',';
        if (t >= 1) {
            os << b.v[static_cast<std::size_t>(t - 1)] << ','
               << b.x[static_cast<std::size_t>(t - 1)];
        } else {
            os << ',';
        }
        os << '\n';
    }
}

/// Direct Riemann-sum simulation of the limit process on r_j = j/m, j=0..m:
/// a moving-average integral of alpha-stable increments against the kernel
/// (r-s)^{H-1/alpha}, with the past integral truncated at -T and integrands
/// evaluated at cell midpoints. At H = 1/alpha the past part vanishes and the
/// output is exactly the alpha-stable Levy motion on the cell lattice.
inline std::vector<double> simulate_lfsm(double H, double alpha, std::size_t m, double T,
                                         std::size_t M, std::uint64_t seed) {
    if (!(H > 0.0 && H < 1.0)) throw DomainError("simulate_lfsm: H in (0,1) required");
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("simulate_lfsm: alpha in (0,2] required");
    if (m < 1 || M < 1) throw DomainError("simulate_lfsm: m, M >= 1 required");
    if (!(T > 0.0)) throw DomainError("simulate_lfsm: T > 0 required");

    const double delta = 1.0 / static_cast<double>(M);
    const double expo = H - 1.0 / alpha;
    const bool levy = (expo == 0.0);
    const std::size_t past_cells = levy ? 0 : static_cast<std::size_t>(std::ceil(T * M));

    Rng rng(seed);
    // Cell draws in a fixed order (most-negative past cell first), so that
    // the same (seed, M, T) reuses the same increments at any grid m.
    std::vector<double> zeta_past(past_cells), zeta_fwd(M);
    for (std::size_t i = 0; i < past_cells; ++i)
        zeta_past[i] = detail::stable_draw(alpha, 0.0, rng);
    for (std::size_t i = 0; i < M; ++i)
        zeta_fwd[i] = detail::stable_draw(alpha, 0.0, rng);

    const double cell_scale = std::pow(delta, 1.0 / alpha);
    std::vector<double> out(m + 1, 0.0);
    for (std::size_t j = 1; j <= m; ++j) {
        const double r = static_cast<double>(j) / static_cast<double>(m);
        double acc = 0.0;
        // past: kernel difference (r-s)^expo - (-s)^expo, s < 0
        for (std::size_t i = 0; i < past_cells; ++i) {
            const double s_mid = -(static_cast<double>(past_cells - i) - 0.5) * delta;
            acc += (std::pow(r - s_mid, expo) - std::pow(-s_mid, expo)) * zeta_past[i];
        }
        // cells fully inside [0, r]; midpoint distance to r stays >= delta/2
        const auto full = static_cast<std::size_t>(std::floor(r / delta + 1e-12));
        for (std::size_t i = 0; i < std::min(full, M); ++i) {
            const double s_mid = (static_cast<double>(i) + 0.5) * delta;
            acc += (levy ? 1.0 : std::pow(r - s_mid, expo)) * zeta_fwd[i];
        }
        out[j] = cell_scale * acc;
    }
    return out;
}

}  // namespace lfsm
