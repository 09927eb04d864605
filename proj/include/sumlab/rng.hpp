// rng.hpp
// Counter-based pseudo-randomness for reproducible sampling. Every draw is a
// pure function of (seed, stream, index), so samples can be generated in any
// order or in parallel and still come out identical.

#pragma once

#include <cstdint>
#include <string_view>

namespace sumlab {

// splitmix64 finalizer
inline uint64_t mix_u64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// FNV-1a, used to derive stream ids from names.
inline uint64_t stream_id(std::string_view name) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

inline uint64_t sample_u64(uint64_t seed, uint64_t stream, uint64_t index) {
    return mix_u64(mix_u64(seed ^ stream) + index);
}

// Uniform draw from [0, bound]; bound + 1 must not be 0. Modulo bias is below
// 2^-32 for every bound used at desk scale.
inline uint64_t sample_in(uint64_t seed, uint64_t stream, uint64_t index, uint64_t bound) {
    return sample_u64(seed, stream, index) % (bound + 1);
}

} // namespace sumlab
