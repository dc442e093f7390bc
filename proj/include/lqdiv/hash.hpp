#pragma once

#include <bit>
#include <cstdint>
#include <string_view>

namespace lqdiv {

/// 64-bit FNV-1a, used for provenance hashes of inputs.
class Fnv1a {
public:
    Fnv1a& bytes(const void* data, std::size_t n) noexcept {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
        return *this;
    }
    Fnv1a& add(double v) noexcept {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        return bytes(&bits, sizeof bits);
    }
    Fnv1a& add(std::int64_t v) noexcept { return bytes(&v, sizeof v); }
    Fnv1a& add(std::uint64_t v) noexcept { return bytes(&v, sizeof v); }
    Fnv1a& add(std::string_view s) noexcept { return bytes(s.data(), s.size()); }

    std::uint64_t value() const noexcept { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace lqdiv
