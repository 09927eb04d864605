// kernels.hpp
// Bit-level inner loops shared by the sieve and window-statistics code:
// popcounts over bit ranges, bit-run accumulation into counter arrays, and
// moment reductions over counter arrays.
//
// Every kernel has a scalar reference implementation (namespace scalar) and,
// on x86-64, an AVX2 variant (namespace avx2). The top-level functions
// dispatch once at startup based on CPUID; SUMLAB_KERNELS=scalar|avx2 in the
// environment overrides the choice. The two paths are equivalence-tested
// against each other in the unit suite.
//
// Contract for all word-array arguments: bit i of the stream lives at
// words[i >> 6] bit (i & 63), and the array must stay addressable one full
// word PAST the last referenced bit (callers pad their buffers; PrimeSegment
// does this). Kernels may read, but never use, those padding bits.

#pragma once

#include <cstddef>
#include <cstdint>

namespace sumlab::kernels {

struct Moments {
    uint64_t sum = 0;         // Σ counts[i]
    uint64_t sum_squares = 0; // Σ counts[i]^2
    uint64_t support = 0;     // #{i : counts[i] > 0}

    bool operator==(const Moments&) const = default;
};

// Number of set bits at positions [bit_begin, bit_end).
uint64_t popcount_range(const uint64_t* words, uint64_t bit_begin, uint64_t bit_end);

// acc[i] += bit(words, bit_begin + i) for i in [0, count).
void add_bit_run(uint16_t* acc, const uint64_t* words, uint64_t bit_begin, size_t count);

// Sum, sum of squares and support of counts[0..n). Exact for all uint16 inputs.
Moments tally_counts(const uint16_t* counts, size_t n);

// Σ over i < count of bitA(off_a + i) & bitB(off_b + i). Scalar only; the
// extraction of two misaligned streams dominates and does not vectorize well.
uint64_t and_popcount_ranges(const uint64_t* words_a, uint64_t off_a,
                             const uint64_t* words_b, uint64_t off_b, uint64_t count);

// Name of the dispatched backend: "avx2" or "scalar".
const char* active_backend();

namespace scalar {
uint64_t popcount_range(const uint64_t* words, uint64_t bit_begin, uint64_t bit_end);
void add_bit_run(uint16_t* acc, const uint64_t* words, uint64_t bit_begin, size_t count);
Moments tally_counts(const uint16_t* counts, size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SUMLAB_X86_64 1
namespace avx2 {
bool available();
uint64_t popcount_range(const uint64_t* words, uint64_t bit_begin, uint64_t bit_end);
void add_bit_run(uint16_t* acc, const uint64_t* words, uint64_t bit_begin, size_t count);
Moments tally_counts(const uint16_t* counts, size_t n);
} // namespace avx2
#endif

} // namespace sumlab::kernels
