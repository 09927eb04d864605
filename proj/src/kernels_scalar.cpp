// Scalar reference kernels. These are the semantics; the SIMD variants must
// match them bit for bit on every input.

#include "sumlab/kernels.hpp"

#include <bit>

namespace sumlab::kernels::scalar {

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
    for (uint64_t w = first_word + 1; w < last_word; ++w) {
        total += std::popcount(words[w]);
    }
    total += std::popcount(words[last_word] & tail_mask);
    return total;
}

void add_bit_run(uint16_t* acc, const uint64_t* words, uint64_t bit_begin, size_t count) {
    for (size_t i = 0; i < count; ++i) {
        uint64_t b = bit_begin + i;
        acc[i] += static_cast<uint16_t>((words[b >> 6] >> (b & 63)) & 1u);
    }
}

Moments tally_counts(const uint16_t* counts, size_t n) {
    Moments m;
    for (size_t i = 0; i < n; ++i) {
        uint64_t c = counts[i];
        m.sum += c;
        m.sum_squares += c * c;
        m.support += c > 0;
    }
    return m;
}

} // namespace sumlab::kernels::scalar

namespace sumlab::kernels {

uint64_t and_popcount_ranges(const uint64_t* words_a, uint64_t off_a,
                             const uint64_t* words_b, uint64_t off_b, uint64_t count) {
    // Pulls 64 bits at a time from each stream, realigning with shifts. The
    // one-word padding contract makes the q+1 read safe at the end.
    auto extract64 = [](const uint64_t* w, uint64_t off) -> uint64_t {
        uint64_t q = off >> 6, r = off & 63;
        uint64_t v = w[q] >> r;
        if (r != 0) v |= w[q + 1] << (64 - r);
        return v;
    };
    uint64_t total = 0;
    uint64_t i = 0;
    for (; i + 64 <= count; i += 64) {
        total += std::popcount(extract64(words_a, off_a + i) & extract64(words_b, off_b + i));
    }
    if (i < count) {
        uint64_t mask = ~uint64_t{0} >> (64 - (count - i));
        total += std::popcount(extract64(words_a, off_a + i) & extract64(words_b, off_b + i) & mask);
    }
    return total;
}

} // namespace sumlab::kernels
