#pragma once

#include <cstdint>

namespace lqdiv {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Inverse of the standard normal CDF (Wichura, AS241 PPND16; ~1e-16 relative).
double inverse_normal_cdf(double p) noexcept;

/**
 * Counter-based stream: the n-th draw is a pure function of (key, n), so
 * streams can be split per path and replayed in any order.
 */
class CounterStream {
public:
    enum : std::uint64_t { brownian = 1, jumps = 2 };

    CounterStream(std::uint64_t seed, std::uint64_t path, std::uint64_t stream) noexcept
        : key_(mix64(mix64(seed ^ 0x6a09e667f3bcc908ULL) ^ mix64(path + 0x3c6ef372fe94f82bULL) ^
                     (stream * 0xa54ff53a5f1d36f1ULL))) {}

    std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix64(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform in the open interval (0, 1).
    double uniform(std::uint64_t counter) const noexcept {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal(std::uint64_t counter) const noexcept {
        return inverse_normal_cdf(uniform(counter));
    }

private:
    std::uint64_t key_;
};

}  // namespace lqdiv
