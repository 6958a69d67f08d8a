#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace lfsm {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid model/spec/experiment configuration. The message names every
/// violated invariant.
struct ConfigError : Error {
    using Error::Error;
};

/// Argument outside the operation's domain (negative bandwidth, k = 0, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Requested a closed form that this family/function does not have.
struct UnsupportedError : Error {
    using Error::Error;
};

/// Too few samples/replications/ladder points for a statistical check.
struct PowerError : Error {
    using Error::Error;
};

/// The Fourier-inversion integrand is not absolutely integrable for the
/// requested horizon. `minimal_k`, when present, is the smallest horizon
/// that would be valid; absent means no horizon works for this pair.
struct IntegrabilityError : Error {
    std::optional<int> minimal_k;
    IntegrabilityError(const std::string& msg, std::optional<int> min_k)
        : Error(msg), minimal_k(min_k) {}
};

/// Exact computation refused because it would exceed a hard cost cap.
struct ResourceError : Error {
    using Error::Error;
};

/// A numerically detected divergent integral.
struct DivergenceError : Error {
    using Error::Error;
};

/// Bracket builder cannot meet the requested epsilon at its resolution.
struct RefinementError : Error {
    using Error::Error;
};

/// Zero-energy gate: the function's integral is not (numerically) zero.
struct ZeroEnergyViolation : Error {
    using Error::Error;
};

}  // namespace lfsm
