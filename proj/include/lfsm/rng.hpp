#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lfsm {

// Self-contained generators so that streams are bit-identical across
// platforms and standard libraries. std::*_distribution is unspecified
// per implementation and would break frozen expected values.

/// SplitMix64 mixing step. Bijective on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic seed fan-out: replication r of a master seed gets its own
/// 64-bit stream seed. Distinct r always give distinct seeds (the counter
/// offsets are distinct and the mix is a bijection).
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t r) {
    std::uint64_t s = master + (r + 1) * 0x9E3779B97F4A7C15ULL;
    return splitmix64(s);
}

/// xoshiro256++ with SplitMix64 state expansion.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on (0,1]. Strictly positive so that log() is always finite.
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform on [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Exponential(1).
    double exponential() { return -std::log(uniform_pos()); }

    /// Student-t with df > 0 degrees of freedom (Bailey's polar method).
    double student_t(double df) {
        for (;;) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double w = u * u + v * v;
            if (w > 0.0 && w <= 1.0)
                return u * std::sqrt(df * (std::pow(w, -2.0 / df) - 1.0) / w);
        }
    }

    /// +1 or -1 with equal probability.
    double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace lfsm
