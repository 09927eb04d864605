// prime.hpp
// Exact primality infrastructure: bit-packed segmented sieving, interval
// prime counts (also in arithmetic progressions), deterministic 64-bit
// primality, and the logarithmic integral.
//
// Interval convention everywhere: half-open on the left, closed on the
// right, (lo, hi].

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace sumlab {

// Default cap on hi - lo for a single segment, in integers.
inline constexpr uint64_t kSegmentSpanLimit = uint64_t{1} << 25;

// Primality table for [lo, hi): one flag per odd number, plus an explicit
// flag for 2 when 2 lies in the range. Immutable after construction; all
// queries are read-only.
class PrimeSegment {
public:
    // Sieves [lo, hi). Throws std::invalid_argument if lo >= hi and
    // std::length_error if hi - lo exceeds span_limit.
    static PrimeSegment sieve(uint64_t lo, uint64_t hi, uint64_t span_limit = kSegmentSpanLimit);

    uint64_t lo() const { return lo_; }
    uint64_t hi() const { return hi_; }
    bool contains(uint64_t n) const { return n >= lo_ && n < hi_; }

    // n must lie in [lo, hi).
    bool is_prime(uint64_t n) const;

    // Primes p with a < p <= b, intersected with [lo, hi).
    uint64_t count_in(uint64_t a, uint64_t b) const;

    template <typename F>
    void for_each_prime(F&& f) const {
        if (has_two_) f(uint64_t{2});
        for (size_t w = 0; w < words_used_; ++w) {
            uint64_t bits = words_[w];
            while (bits != 0) {
                unsigned tz = static_cast<unsigned>(__builtin_ctzll(bits));
                f(odd_base_ + 2 * (64 * w + tz));
                bits &= bits - 1;
            }
        }
    }

    // Raw bit array for the kernels. Bit i corresponds to the odd number
    // odd_base() + 2i; the buffer carries one word of zero padding.
    const uint64_t* words() const { return words_.data(); }
    uint64_t odd_base() const { return odd_base_; }
    // Bit index of odd n within [lo, hi).
    uint64_t odd_bit_index(uint64_t n) const { return (n - odd_base_) / 2; }
    uint64_t odd_bit_count() const { return bit_count_; }

private:
    PrimeSegment() = default;

    uint64_t lo_ = 0;
    uint64_t hi_ = 0;
    uint64_t odd_base_ = 1;
    uint64_t bit_count_ = 0;
    size_t words_used_ = 0;
    bool has_two_ = false;
    std::vector<uint64_t> words_;
};

// Deterministic primality for any 64-bit n (fixed Miller-Rabin witness set).
bool is_prime_u64(uint64_t n);

// #{p prime : lo < p <= hi}. Throws std::invalid_argument if lo > hi.
uint64_t count_primes_in(uint64_t lo, uint64_t hi);

// #{p prime : lo < p <= hi, p = residue (mod modulus)}. Requires
// gcd(residue, modulus) = 1 and residue < modulus.
uint64_t count_primes_in_ap(uint64_t lo, uint64_t hi, uint64_t modulus, uint64_t residue);

// Integral of dt / log t over [2, x], relative error <= 1e-9. Requires x >= 2.
double logarithmic_integral(double x);

// All primes <= limit, ascending. Cached and grown on demand; the returned
// snapshot is immutable and safe to hold across further growth.
std::shared_ptr<const std::vector<uint32_t>> base_primes_upto(uint64_t limit);

// floor(sqrt(n)) for 64-bit n.
uint64_t integer_sqrt(uint64_t n);

} // namespace sumlab
