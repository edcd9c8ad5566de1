#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace impbench {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable across platforms, unlike std::hash.
constexpr std::uint64_t hash_string(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept
{
    return splitmix64(seed ^ splitmix64(salt));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

} // namespace impbench
