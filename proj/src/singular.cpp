#include "sumlab/singular.hpp"

#include "sumlab/kernels.hpp"
#include "sumlab/prime.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace sumlab {

TwinPrimeConstant twin_prime_constant(uint64_t P) {
    if (P < 1000) throw std::invalid_argument("twin_prime_constant requires P >= 1000");
    long double product = 1.0L;
    uint64_t cur = 3;
    while (cur <= P) {
        uint64_t end = cur + std::min(P - cur, kSegmentSpanLimit - 1);
        PrimeSegment seg = PrimeSegment::sieve(cur, end + 1);
        seg.for_each_prime([&](uint64_t p) {
            long double q = static_cast<long double>(p - 1);
            product *= 1.0L - 1.0L / (q * q);
        });
        cur = end + 1;
    }
    TwinPrimeConstant c;
    c.value = static_cast<double>(product);
    c.truncation_bound = P;
    c.tail_bound = 2.0 / static_cast<double>(P);
    return c;
}

double twin_prime_constant_cached() {
    static const double value = twin_prime_constant(kTwinConstantBound).value;
    return value;
}

std::vector<std::pair<uint64_t, unsigned>> factorize(uint64_t n) {
    std::vector<std::pair<uint64_t, unsigned>> factors;
    if (n < 2) return factors;
    auto primes = base_primes_upto(integer_sqrt(n));
    for (uint32_t p : *primes) {
        if (uint64_t{p} * p > n) break;
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        factors.emplace_back(p, e);
    }
    if (n > 1) factors.emplace_back(n, 1);
    return factors;
}

SingularValue singular_series(int64_t delta) {
    if (delta == 0) throw std::invalid_argument("singular series is undefined at 0");
    SingularValue sv;
    sv.delta = delta;
    uint64_t mag = delta > 0 ? static_cast<uint64_t>(delta)
                             : static_cast<uint64_t>(-(delta + 1)) + 1;
    if (mag % 2 != 0) return sv; // odd shift: local obstruction at 2
    double value = 2.0 * twin_prime_constant_cached();
    for (auto [p, e] : factorize(mag)) {
        if (p == 2) continue;
        value *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
    }
    sv.value = value;
    return sv;
}

double small_prime_divisor_sum(uint64_t delta, double threshold) {
    if (delta < 1) throw std::invalid_argument("small_prime_divisor_sum requires delta >= 1");
    if (!(threshold > 1.0)) return 0.0; // even d = 1 has P+(1) = 1
    double sum = 1.0;
    for (auto [p, e] : factorize(delta)) {
        if (p == 2) continue;
        if (static_cast<double>(p) < threshold) sum *= 1.0 + 1.0 / static_cast<double>(p);
    }
    return sum;
}

DifferenceAverage average_over_differences(const LacunarySet& set) {
    if (set.size() < 2) {
        throw std::invalid_argument("average_over_differences requires at least two elements");
    }
    double threshold = std::log(2.0 * static_cast<double>(set.scale()));
    DifferenceAverage avg;
    double unordered = 0.0;
    set.for_each_difference([&](uint64_t d) {
        unordered += singular_series(static_cast<int64_t>(d)).value;
        avg.divisor_sum_aggregate += small_prime_divisor_sum(d, threshold);
    });
    avg.total = 2.0 * unordered; // ordered pairs
    double log_x = std::log(static_cast<double>(set.scale()));
    avg.normalized = avg.total / (log_x * log_x);
    return avg;
}

PairCount pair_count_vs_prediction(uint64_t y, uint64_t h, int64_t delta) {
    if (delta == 0) throw std::invalid_argument("pair count requires a nonzero shift");
    if (h < 2) throw std::invalid_argument("pair count requires h >= 2");

    PairCount pc;
    uint64_t mag = delta > 0 ? static_cast<uint64_t>(delta)
                             : static_cast<uint64_t>(-(delta + 1)) + 1;

    if (mag % 2 != 0) {
        // opposite parities: a pair needs one member equal to 2
        uint64_t m = 2;
        if (m > y && m <= y + h && delta > 0 && is_prime_u64(m + mag)) ++pc.count;
        if (delta < 0 && mag + 2 > y && mag + 2 <= y + h && is_prime_u64(mag + 2)) ++pc.count;
    } else {
        // both members odd (m = 2 would force m+delta even > 2); sieve the two
        // shifted ranges and AND their odd-indexed bit runs
        uint64_t m_lo = std::max<uint64_t>(y + 1, 3);
        if (delta < 0 && mag + 3 > m_lo) m_lo = mag + 3; // keep m + delta >= 3
        uint64_t m_hi = y + h; // inclusive
        if (m_lo <= m_hi) {
            uint64_t first = m_lo | 1;
            if (first <= m_hi) {
                uint64_t count = (m_hi - first) / 2 + 1;
                uint64_t last = first + 2 * (count - 1);
                PrimeSegment seg_a = PrimeSegment::sieve(first, last + 1);
                uint64_t shifted_first = delta > 0 ? first + mag : first - mag;
                uint64_t shifted_last = delta > 0 ? last + mag : last - mag;
                PrimeSegment seg_b = PrimeSegment::sieve(shifted_first, shifted_last + 1);
                pc.count = kernels::and_popcount_ranges(
                    seg_a.words(), seg_a.odd_bit_index(first), seg_b.words(),
                    seg_b.odd_bit_index(shifted_first), count);
            }
        }
    }

    double log_h = std::log(static_cast<double>(h));
    pc.prediction = static_cast<double>(h) / (log_h * log_h) *
                        singular_series(delta).value +
                    1.0;
    pc.ratio = static_cast<double>(pc.count) / pc.prediction;
    return pc;
}

} // namespace sumlab
