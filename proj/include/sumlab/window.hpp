// window.hpp
// Window statistics of the sumset of the primes with a lacunary set: the
// representation function, per-window first/second moments and element
// counts, the restricted first moment, reproducible window scans, and the
// empirical short-interval prime deviation.

#pragma once

#include "sumlab/lacunary.hpp"

#include <cstdint>
#include <vector>

namespace sumlab {

// floor(X^theta) with a snap for values within 1e-6 (relative) of an integer,
// so exact powers do not round down spuriously.
uint64_t floor_power(uint64_t X, double theta);

struct ScanConfig {
    uint64_t X = 0;
    double theta = 0.0;
    uint64_t sample_count = 0;
    uint64_t seed = 0;

    uint64_t window_length() const { return floor_power(X, theta); }
    // Throws std::invalid_argument on violation (needs 2 <= h <= X,
    // sample_count >= 1, 0 < theta < 1).
    void validate() const;
};

struct WindowRecord {
    uint64_t x = 0;
    uint64_t h = 0;
    uint64_t rep_sum = 0;      // R: representations in (x, x+h]
    uint64_t rep_sq_sum = 0;   // Q: sum of squared multiplicities
    uint64_t element_count = 0; // S: distinct represented integers
    double cs_bound = 0.0;      // R^2 / Q, 0 when Q = 0
};

// #{a in set : n - a prime}; shifts below 2 contribute nothing.
uint64_t rep_function(uint64_t n, const LacunarySet& set);

// Exact R, Q, S over (x, x+h] via per-shift block sieves. Requires x >= 1.
WindowRecord window_record(uint64_t x, uint64_t h, const LacunarySet& set);

// Sum over a in set with 2a <= h of the prime count in (x-a, x+h-a].
uint64_t restricted_first_moment(uint64_t x, uint64_t h, const LacunarySet& set);

struct SampleStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct ScanResult {
    std::vector<WindowRecord> records; // in sampling order
    SampleStats rep_over_h;
    SampleStats sq_over_h;
    SampleStats elements_over_h;
    double cs_tight_fraction = 0.0; // windows with S >= 0.999 * R^2/Q
};

// sample_count windows at reproducibly pseudo-random x in [X, 2X]. Windows
// are distributed over workers (SUMLAB_WORKERS, default: hardware) and the
// output is deterministic regardless of worker count.
ScanResult scan(const ScanConfig& config, const LacunarySet& set);

struct DeviationSummary {
    uint64_t X = 0;
    uint64_t y = 0;
    uint64_t sample_count = 0;
    double p50 = 0.0;
    double p90 = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
    double max = 0.0;
    double exceed_half_fraction = 0.0; // samples with relative deviation > 0.5
};

// For sampled t in [X, 2X], the relative deviation of the prime count in
// (t, t+y] from y/log t. Requires 3 <= y <= X.
DeviationSummary prime_window_deviation(uint64_t X, uint64_t y, uint64_t sample_count,
                                        uint64_t seed);

} // namespace sumlab
