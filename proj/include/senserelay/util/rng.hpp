#pragma once

#include <cstdint>
#include <initializer_list>

namespace senserelay {

// Counter-based random stream: a value is a pure function of the words fed
// in, so draws are independent of evaluation order and identical across
// platforms. Mixer is the splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t counter_hash(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0x8f1bbcdcbfa53e0bULL;
    for (std::uint64_t w : words) h = mix64(h ^ w);
    return h;
}

// Uniform double in [0, 1) from 53 random bits. Exact in binary64.
constexpr double uniform01_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double counter_uniform01(std::initializer_list<std::uint64_t> words) {
    return uniform01_from_bits(counter_hash(words));
}

} // namespace senserelay
