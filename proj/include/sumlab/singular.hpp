// singular.hpp
// Prime-pair singular series: the twin-prime constant with a certified
// truncation tail, the series itself via factorization, the small-prime
// squarefree divisor sum, its average over differences of a lacunary set,
// and empirical prime-pair counts against the sieve-shaped prediction.

#pragma once

#include "sumlab/lacunary.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace sumlab {

struct TwinPrimeConstant {
    double value = 0.0;         // truncated product over odd primes <= truncation_bound
    uint64_t truncation_bound = 0;
    double tail_bound = 0.0;    // bound on the truncation error, 2 / truncation_bound
};

// Default truncation; gives tail_bound = 1e-8.
inline constexpr uint64_t kTwinConstantBound = 200'000'000;

// prod_{2 < p <= P} (1 - 1/(p-1)^2). Requires P >= 1000.
TwinPrimeConstant twin_prime_constant(uint64_t P);

// The constant at the default truncation, computed once and cached.
double twin_prime_constant_cached();

struct SingularValue {
    int64_t delta = 0;
    double value = 0.0; // 0 for odd delta
};

// 2 C2 prod_{p | delta, p > 2} (p-1)/(p-2) for even delta, 0 for odd delta.
// Throws std::invalid_argument for delta = 0.
SingularValue singular_series(int64_t delta);

// Sum of 1/d over odd squarefree divisors d of delta whose largest prime
// factor is below threshold (d = 1 qualifies whenever threshold > 1).
// Requires delta >= 1.
double small_prime_divisor_sum(uint64_t delta, double threshold);

struct DifferenceAverage {
    double total = 0.0;                 // sum of the series over ordered pairs a1 != a2
    double normalized = 0.0;            // total / (ln X)^2
    double divisor_sum_aggregate = 0.0; // sum over a1 < a2 of the divisor sums at ln(2X)
};

// Requires at least two elements.
DifferenceAverage average_over_differences(const LacunarySet& set);

struct PairCount {
    uint64_t count = 0;      // #{y < m <= y+h : m and m+delta both prime}
    double prediction = 0.0; // h/(ln h)^2 * series(delta) + 1
    double ratio = 0.0;
};

// Exact pair count by sieving, against the sieve upper-bound shape.
// Requires h >= 2 and delta != 0.
PairCount pair_count_vs_prediction(uint64_t y, uint64_t h, int64_t delta);

// Trial-division factorization, (prime, exponent) pairs in ascending order.
std::vector<std::pair<uint64_t, unsigned>> factorize(uint64_t n);

} // namespace sumlab
