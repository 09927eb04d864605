// romanoff.hpp
// The prime-plus-power-of-two model: its representation function, the
// large-multiplicity hunt over multiples of a smooth modulus, the positive
// proportion window scan, admissible power-of-two shift sets, and the
// sequence of representable odd numbers with its gap statistics.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace sumlab {

// Whether 2^0 counts as a power of two. The classical statements use k >= 0,
// the construction here uses k >= 1; both are supported.
struct RomanoffConvention {
    int min_exponent = 1; // 0 or 1
};

// #{k >= min_exponent : 2^k < n and n - 2^k prime}.
uint64_t romanoff_rep(uint64_t n, RomanoffConvention conv = {});

// Product of the odd primes up to prime_bound, minus the excluded ones.
struct SmoothModulus {
    uint64_t modulus = 1;
    std::vector<uint32_t> primes;
    uint64_t totient = 1;
    double ratio = 1.0; // modulus / totient
};

// Requires prime_bound >= 3; throws std::overflow_error when the product
// leaves 64 bits.
SmoothModulus build_modulus(double prime_bound, const std::set<uint32_t>& excluded = {});

struct HuntResult {
    uint64_t n = 0;            // smallest maximizer
    uint64_t multiplicity = 0; // its representation count
    double window_average = 0.0;
    uint64_t multiples_scanned = 0;
};

// Scans the multiples of the modulus in (X, X + window_length]; empty
// optional when the window contains none.
std::optional<HuntResult> hunt_large_multiplicity(uint64_t X, uint64_t window_length,
                                                  const SmoothModulus& d,
                                                  RomanoffConvention conv = {});

struct ProportionResult {
    double fraction = 0.0; // sampled windows containing a multiple with rep >= threshold
    uint64_t hits = 0;
    uint64_t sample_count = 0;
    double window_sum_mean = 0.0; // stats of the per-window sum over multiples
    double window_sum_min = 0.0;
    double window_sum_max = 0.0;
};

// Windows (x, x+h] with h = floor(X^theta) at sampled x in (X, 2X].
// Requires h >= modulus so every window holds at least one multiple.
ProportionResult positive_proportion_scan(uint64_t X, double theta, const SmoothModulus& d,
                                          uint64_t threshold, uint64_t sample_count,
                                          uint64_t seed, RomanoffConvention conv = {});

// Shifts -2^e for e = L, 2L, ..., count*L where L = lcm of (p-1) over primes
// p <= r. Kept symbolic: the exponents are stored, residues are computed by
// modular exponentiation (the shifts themselves overflow quickly).
struct AdmissibleShiftSet {
    uint64_t exponent_lcm = 1; // L
    std::vector<uint64_t> exponents;
    bool verified = false; // residue check passed for every prime p <= r

    struct ResidueCheck {
        uint32_t p = 0;
        uint32_t distinct_residues = 0;
        bool omits_class = false;
        bool informational = false; // p > r, not part of the verdict
    };
    std::vector<ResidueCheck> checks;

    // residues of -2^e mod p over the stored exponents, deduplicated
    std::vector<uint32_t> residues_mod(uint32_t p) const;
};

// Requires r >= 2, count >= 1.
AdmissibleShiftSet admissible_shift_set(uint32_t r, uint32_t count);

struct RepresentableSequence {
    uint64_t limit = 0;
    RomanoffConvention convention;
    std::vector<uint64_t> values;            // odd representable n <= limit, ascending
    std::vector<uint64_t> non_representable; // odd n in [3, limit] with no representation
};

// Requires limit >= 5.
RepresentableSequence enumerate_representable_odds(uint64_t limit, RomanoffConvention conv = {});

struct GapStatistics {
    uint64_t max_gap = 0;
    uint64_t at_value = 0;           // left endpoint of the first maximal gap
    std::vector<uint64_t> gaps;      // values[m+1] - values[m]
    std::vector<double> normalized;  // gap / (ln values[m])^2
};

// Requires at least two values.
GapStatistics gap_statistics(const RepresentableSequence& seq);

} // namespace sumlab
