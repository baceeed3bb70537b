#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace quadenv {

/// Precondition or domain violation (invalid parameter, u < v in a pinch, ...).
/// The CLI maps this to exit code 3.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input file. The CLI maps this to exit code 2.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Default comparison tolerance: 1e-12 relative to 1 + max|u|.
inline double fp_eps(double max_abs) { return 1e-12 * (1.0 + max_abs); }

/// splitmix64: tiny deterministic generator; all randomness in the
/// repository flows through explicit 64-bit seeds.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::int64_t below(std::int64_t n) {
        return static_cast<std::int64_t>(uniform() * static_cast<double>(n)) % n;
    }

private:
    std::uint64_t state_;
};

}  // namespace quadenv
