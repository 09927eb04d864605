// AVX2 kernel variants. Compiled with -mavx2 in its own translation unit;
// only reached after the runtime CPUID check in kernels_dispatch.cpp.

#include "sumlab/kernels.hpp"

#if defined(SUMLAB_X86_64) || defined(__x86_64__) || defined(_M_X64)

#include <algorithm>
#include <bit>
#include <immintrin.h>

namespace sumlab::kernels::avx2 {

bool available() {
    return __builtin_cpu_supports("avx2");
}

namespace {

// Per-byte popcount via two nibble table lookups (Mula's method), folded to
// per-quadword sums with SAD.
inline __m256i popcount_epi64(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

inline uint64_t hsum_epi64(__m256i v) {
    __m128i lo = _mm256_castsi256_si128(v);
    __m128i hi = _mm256_extracti128_si256(v, 1);
    __m128i s = _mm_add_epi64(lo, hi);
    return static_cast<uint64_t>(_mm_cvtsi128_si64(s)) +
           static_cast<uint64_t>(_mm_extract_epi64(s, 1));
}

inline uint32_t extract32(const uint64_t* w, uint64_t off) {
    uint64_t q = off >> 6, r = off & 63;
    uint64_t v = w[q] >> r;
    if (r > 32) v |= w[q + 1] << (64 - r);
    return static_cast<uint32_t>(v);
}

} // namespace

uint64_t popcount_range(const uint64_t* words, uint64_t bit_begin, uint64_t bit_end) {
    if (bit_begin >= bit_end) return 0;
    uint64_t first_word = bit_begin >> 6;
    uint64_t last_word = (bit_end - 1) >> 6;
    uint64_t head_mask = ~uint64_t{0} << (bit_begin & 63);
    uint64_t tail_mask = ~uint64_t{0} >> (63 - ((bit_end - 1) & 63));
    if (first_word == last_word) {
        return std::popcount(words[first_word] & head_mask & tail_mask);
    }
    uint64_t total = std::popcount(words[first_word] & head_mask);
    uint64_t w = first_word + 1;
    __m256i acc = _mm256_setzero_si256();
    for (; w + 4 <= last_word; w += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + w));
        acc = _mm256_add_epi64(acc, popcount_epi64(v));
    }
    total += hsum_epi64(acc);
    for (; w < last_word; ++w) {
        total += std::popcount(words[w]);
    }
    total += std::popcount(words[last_word] & tail_mask);
    return total;
}

void add_bit_run(uint16_t* acc, const uint64_t* words, uint64_t bit_begin, size_t count) {
    // Expand 32 bits to 32 0/1 bytes (broadcast + shuffle + bit-test), widen
    // to u16 and add. The shuffle index replicates source byte j across its
    // group of eight lanes within each 128-bit half.
    const __m256i shuf = _mm256_setr_epi8(0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1,
                                          2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3);
    const __m256i bit_sel = _mm256_set1_epi64x(static_cast<long long>(0x8040201008040201ULL));
    const __m256i one = _mm256_set1_epi8(1);
    size_t i = 0;
    for (; i + 32 <= count; i += 32) {
        __m256i v = _mm256_set1_epi32(static_cast<int>(extract32(words, bit_begin + i)));
        v = _mm256_shuffle_epi8(v, shuf);
        v = _mm256_and_si256(v, bit_sel);
        v = _mm256_cmpeq_epi8(v, bit_sel);
        v = _mm256_and_si256(v, one);
        __m256i lo16 = _mm256_cvtepu8_epi16(_mm256_castsi256_si128(v));
        __m256i hi16 = _mm256_cvtepu8_epi16(_mm256_extracti128_si256(v, 1));
        __m256i* dst_lo = reinterpret_cast<__m256i*>(acc + i);
        __m256i* dst_hi = reinterpret_cast<__m256i*>(acc + i + 16);
        _mm256_storeu_si256(dst_lo, _mm256_add_epi16(_mm256_loadu_si256(dst_lo), lo16));
        _mm256_storeu_si256(dst_hi, _mm256_add_epi16(_mm256_loadu_si256(dst_hi), hi16));
    }
    for (; i < count; ++i) {
        uint64_t b = bit_begin + i;
        acc[i] += static_cast<uint16_t>((words[b >> 6] >> (b & 63)) & 1u);
    }
}

Moments tally_counts(const uint16_t* counts, size_t n) {
    Moments m;
    const __m256i zero = _mm256_setzero_si256();
    size_t i = 0;
    __m256i sq_acc = _mm256_setzero_si256(); // 4 x u64
    while (i + 16 <= n) {
        // each u32 accumulator lane takes two lanes of <= 65535 per step;
        // 16383 iterations stay below 2^31 before a flush
        __m256i sum32 = _mm256_setzero_si256();
        size_t block_end = i + std::min<size_t>((n - i) / 16, 16383) * 16;
        for (; i < block_end; i += 16) {
            __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(counts + i));
            __m256i lo32 = _mm256_cvtepu16_epi32(_mm256_castsi256_si128(v));
            __m256i hi32 = _mm256_cvtepu16_epi32(_mm256_extracti128_si256(v, 1));
            sum32 = _mm256_add_epi32(sum32, _mm256_add_epi32(lo32, hi32));

            __m256i lo_sq = _mm256_mullo_epi32(lo32, lo32); // < 2^32, exact
            __m256i hi_sq = _mm256_mullo_epi32(hi32, hi32);
            sq_acc = _mm256_add_epi64(sq_acc, _mm256_unpacklo_epi32(lo_sq, zero));
            sq_acc = _mm256_add_epi64(sq_acc, _mm256_unpackhi_epi32(lo_sq, zero));
            sq_acc = _mm256_add_epi64(sq_acc, _mm256_unpacklo_epi32(hi_sq, zero));
            sq_acc = _mm256_add_epi64(sq_acc, _mm256_unpackhi_epi32(hi_sq, zero));

            __m256i is_zero = _mm256_cmpeq_epi16(v, zero);
            uint32_t mask = static_cast<uint32_t>(_mm256_movemask_epi8(is_zero));
            m.support += 16 - std::popcount(mask) / 2;
        }
        // flush the 8 x u32 partial sums
        __m256i s_lo = _mm256_cvtepu32_epi64(_mm256_castsi256_si128(sum32));
        __m256i s_hi = _mm256_cvtepu32_epi64(_mm256_extracti128_si256(sum32, 1));
        m.sum += hsum_epi64(_mm256_add_epi64(s_lo, s_hi));
    }
    m.sum_squares += hsum_epi64(sq_acc);
    for (; i < n; ++i) {
        uint64_t c = counts[i];
        m.sum += c;
        m.sum_squares += c * c;
        m.support += c > 0;
    }
    return m;
}

} // namespace sumlab::kernels::avx2

#endif // x86-64
