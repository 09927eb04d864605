#include "sumlab/romanoff.hpp"

#include "sumlab/prime.hpp"
#include "sumlab/rng.hpp"
#include "sumlab/window.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sumlab {

uint64_t romanoff_rep(uint64_t n, RomanoffConvention conv) {
    if (conv.min_exponent != 0 && conv.min_exponent != 1) {
        throw std::invalid_argument("min_exponent must be 0 or 1");
    }
    uint64_t count = 0;
    for (int k = conv.min_exponent; k < 64; ++k) {
        uint64_t power = uint64_t{1} << k;
        if (power >= n) break;
        if (is_prime_u64(n - power)) ++count;
    }
    return count;
}

SmoothModulus build_modulus(double prime_bound, const std::set<uint32_t>& excluded) {
    if (!(prime_bound >= 3.0)) throw std::invalid_argument("prime_bound must be >= 3");
    if (prime_bound > 1e6) {
        throw std::overflow_error("modulus would exceed 64 bits; lower the prime bound");
    }
    SmoothModulus d;
    auto primes = base_primes_upto(static_cast<uint64_t>(prime_bound));
    for (uint32_t p : *primes) {
        if (p == 2 || static_cast<double>(p) > prime_bound) continue;
        if (excluded.count(p)) continue;
        if (d.modulus > UINT64_MAX / p) {
            throw std::overflow_error("modulus exceeds 64 bits; lower the prime bound");
        }
        d.modulus *= p;
        d.totient *= p - 1;
        d.primes.push_back(p);
    }
    d.ratio = static_cast<double>(d.modulus) / static_cast<double>(d.totient);
    return d;
}

std::optional<HuntResult> hunt_large_multiplicity(uint64_t X, uint64_t window_length,
                                                  const SmoothModulus& d,
                                                  RomanoffConvention conv) {
    uint64_t first = (X / d.modulus + 1) * d.modulus;
    if (first > X + window_length) return std::nullopt;

    HuntResult best;
    uint64_t sum = 0;
    for (uint64_t n = first; n <= X + window_length; n += d.modulus) {
        uint64_t rep = romanoff_rep(n, conv);
        sum += rep;
        ++best.multiples_scanned;
        if (best.multiples_scanned == 1 || rep > best.multiplicity) {
            best.n = n;
            best.multiplicity = rep;
        }
    }
    best.window_average = static_cast<double>(sum) / static_cast<double>(best.multiples_scanned);
    return best;
}

ProportionResult positive_proportion_scan(uint64_t X, double theta, const SmoothModulus& d,
                                          uint64_t threshold, uint64_t sample_count,
                                          uint64_t seed, RomanoffConvention conv) {
    if (X < 3) throw std::invalid_argument("X must be >= 3");
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
    uint64_t h = floor_power(X, theta);
    if (h < d.modulus) {
        throw std::invalid_argument("window length below the modulus; no multiple guaranteed");
    }
    if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");

    const uint64_t stream = stream_id("proportion.x");
    ProportionResult result;
    result.sample_count = sample_count;
    double sum_of_sums = 0.0;
    for (uint64_t i = 0; i < sample_count; ++i) {
        uint64_t x = X + 1 + sample_in(seed, stream, i, X - 1); // x in (X, 2X]
        uint64_t window_sum = 0;
        bool hit = false;
        for (uint64_t n = (x / d.modulus + 1) * d.modulus; n <= x + h; n += d.modulus) {
            uint64_t rep = romanoff_rep(n, conv);
            window_sum += rep;
            if (rep >= threshold) hit = true;
        }
        if (hit) ++result.hits;
        double ws = static_cast<double>(window_sum);
        sum_of_sums += ws;
        if (i == 0) {
            result.window_sum_min = ws;
            result.window_sum_max = ws;
        } else {
            result.window_sum_min = std::min(result.window_sum_min, ws);
            result.window_sum_max = std::max(result.window_sum_max, ws);
        }
    }
    result.fraction = static_cast<double>(result.hits) / static_cast<double>(sample_count);
    result.window_sum_mean = sum_of_sums / static_cast<double>(sample_count);
    return result;
}

namespace {

uint64_t pow_mod_small(uint64_t base, uint64_t exp, uint64_t mod) {
    uint64_t result = 1 % mod;
    base %= mod;
    while (exp > 0) {
        if (exp & 1) result = result * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return result;
}

} // namespace

std::vector<uint32_t> AdmissibleShiftSet::residues_mod(uint32_t p) const {
    std::vector<uint32_t> residues;
    for (uint64_t e : exponents) {
        uint64_t r = (p - pow_mod_small(2, e, p)) % p;
        residues.push_back(static_cast<uint32_t>(r));
    }
    std::sort(residues.begin(), residues.end());
    residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
    return residues;
}

AdmissibleShiftSet admissible_shift_set(uint32_t r, uint32_t count) {
    if (r < 2) throw std::invalid_argument("admissible_shift_set requires r >= 2");
    if (r > 1'000'000) throw std::invalid_argument("admissible_shift_set requires r <= 1e6");
    if (count < 1) throw std::invalid_argument("admissible_shift_set requires count >= 1");

    AdmissibleShiftSet set;
    auto primes = base_primes_upto(std::max<uint64_t>(uint64_t{r} + 200, 256));
    for (uint32_t p : *primes) {
        if (p > r) break;
        set.exponent_lcm = std::lcm(set.exponent_lcm, uint64_t{p - 1});
    }
    for (uint32_t j = 1; j <= count; ++j) {
        set.exponents.push_back(j * set.exponent_lcm);
    }

    set.verified = true;
    unsigned informational_left = 3;
    for (uint32_t p : *primes) {
        bool in_scope = p <= r;
        if (!in_scope && informational_left == 0) break;
        if (!in_scope) --informational_left;
        auto residues = set.residues_mod(p);
        AdmissibleShiftSet::ResidueCheck check;
        check.p = p;
        check.distinct_residues = static_cast<uint32_t>(residues.size());
        check.omits_class = residues.size() < p;
        check.informational = !in_scope;
        set.checks.push_back(check);
        if (in_scope && !check.omits_class) set.verified = false;
    }
    return set;
}

namespace {

// Odd-indexed primality bitmap for [0, limit]: bit (m-1)/2 set iff the odd
// number m is prime. Built from span-limited segments; chunk boundaries are
// word-aligned so segment words copy straight in.
std::vector<uint64_t> odd_prime_bits_upto(uint64_t limit) {
    uint64_t bits = limit / 2 + 1;
    std::vector<uint64_t> words(bits / 64 + 2, 0);
    uint64_t chunk = kSegmentSpanLimit; // even, multiple of 128
    for (uint64_t lo = 0; lo <= limit; lo += chunk) {
        uint64_t hi = std::min(limit, lo + chunk - 1);
        PrimeSegment seg = PrimeSegment::sieve(lo, hi + 1);
        // segment bit i is odd number lo + 1 + 2i -> global bit lo/2 + i
        uint64_t base_word = lo / 128;
        uint64_t seg_words = (seg.odd_bit_count() + 63) / 64;
        for (uint64_t w = 0; w < seg_words; ++w) {
            words[base_word + w] |= seg.words()[w];
        }
    }
    return words;
}

inline bool odd_bit(const std::vector<uint64_t>& words, uint64_t m) {
    uint64_t idx = (m - 1) / 2;
    return (words[idx >> 6] >> (idx & 63)) & 1u;
}

} // namespace

RepresentableSequence enumerate_representable_odds(uint64_t limit, RomanoffConvention conv) {
    if (limit < 5) throw std::invalid_argument("enumerate_representable_odds requires limit >= 5");
    if (conv.min_exponent != 0 && conv.min_exponent != 1) {
        throw std::invalid_argument("min_exponent must be 0 or 1");
    }

    auto prime_bits = odd_prime_bits_upto(limit);
    RepresentableSequence seq;
    seq.limit = limit;
    seq.convention = conv;

    for (uint64_t n = 3; n <= limit; n += 2) {
        bool representable = false;
        // k = 0 gives the even shift n - 1, prime only when it equals 2
        if (conv.min_exponent == 0 && n == 3) representable = true;
        for (int k = 1; !representable && k < 64; ++k) {
            uint64_t power = uint64_t{1} << k;
            if (power >= n) break;
            uint64_t m = n - power; // odd
            if (m >= 3 && odd_bit(prime_bits, m)) representable = true;
        }
        if (representable) {
            seq.values.push_back(n);
        } else {
            seq.non_representable.push_back(n);
        }
    }
    return seq;
}

GapStatistics gap_statistics(const RepresentableSequence& seq) {
    if (seq.values.size() < 2) {
        throw std::invalid_argument("gap_statistics requires at least two values");
    }
    GapStatistics stats;
    stats.gaps.reserve(seq.values.size() - 1);
    stats.normalized.reserve(seq.values.size() - 1);
    for (size_t m = 0; m + 1 < seq.values.size(); ++m) {
        uint64_t gap = seq.values[m + 1] - seq.values[m];
        double log_s = std::log(static_cast<double>(seq.values[m]));
        stats.gaps.push_back(gap);
        stats.normalized.push_back(static_cast<double>(gap) / (log_s * log_s));
        if (gap > stats.max_gap) {
            stats.max_gap = gap;
            stats.at_value = seq.values[m];
        }
    }
    return stats;
}

} // namespace sumlab
