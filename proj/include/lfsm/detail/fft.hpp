#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace lfsm::detail {

/// In-place iterative radix-2 FFT. Length must be a power of two.
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? -1.0 : 1.0);
        const std::complex<double> wl{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Linear convolution of two real sequences via zero-padded FFT.
inline std::vector<double> convolve_fft(const std::vector<double>& a,
                                        const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out = a.size() + b.size() - 1;
    const std::size_t n = next_pow2(out);
    std::vector<std::complex<double>> fa(n), fb(n);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
    fft_pow2(fa, false);
    fft_pow2(fb, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft_pow2(fa, true);
    std::vector<double> r(out);
    for (std::size_t i = 0; i < out; ++i) r[i] = fa[i].real();
    return r;
}

/// Linear autoconvolution of a complex sequence (c_s = sum_{p+q=s} u_p u_q).
inline std::vector<std::complex<double>> autoconvolve_fft(
    const std::vector<std::complex<double>>& u) {
    if (u.empty()) return {};
    const std::size_t out = 2 * u.size() - 1;
    const std::size_t n = next_pow2(out);
    std::vector<std::complex<double>> fu(n);
    for (std::size_t i = 0; i < u.size(); ++i) fu[i] = u[i];
    fft_pow2(fu, false);
    for (auto& z : fu) z = z * z;
    fft_pow2(fu, true);
    fu.resize(out);
    return fu;
}

}  // namespace lfsm::detail
