#include "sumlab/window.hpp"

#include "sumlab/kernels.hpp"
#include "sumlab/prime.hpp"
#include "sumlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sumlab {

uint64_t floor_power(uint64_t X, double theta) {
    long double t = std::pow(static_cast<long double>(X), static_cast<long double>(theta));
    long double snapped = std::round(t);
    if (std::abs(t - snapped) <= 1e-6L * std::max<long double>(1.0L, t)) t = snapped;
    return static_cast<uint64_t>(t);
}

void ScanConfig::validate() const {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
    if (X < 3) throw std::invalid_argument("X must be >= 3");
    uint64_t h = window_length();
    if (h < 2 || h > X) throw std::invalid_argument("window length must satisfy 2 <= h <= X");
    if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
}

uint64_t rep_function(uint64_t n, const LacunarySet& set) {
    uint64_t count = 0;
    for (uint64_t a : set.values()) {
        if (a + 2 > n) break; // values ascend; later shifts are below 2 too
        if (is_prime_u64(n - a)) ++count;
    }
    return count;
}

namespace {

// Counter lanes for one window, split by parity of n. Consecutive odd (resp.
// even) n map to consecutive lanes, which is what lets the shifted prime
// bit runs accumulate with add_bit_run.
struct WindowCounters {
    uint64_t x;
    uint64_t h;
    uint64_t first_odd;  // smallest odd n > x
    uint64_t first_even; // smallest even n > x
    std::vector<uint16_t> odd;
    std::vector<uint16_t> even;

    WindowCounters(uint64_t x_, uint64_t h_) : x(x_), h(h_) {
        first_odd = (x + 1) | 1;
        first_even = first_odd == x + 1 ? x + 2 : x + 1;
        uint64_t last = x + h;
        odd.assign(first_odd <= last ? (last - first_odd) / 2 + 1 : 0, 0);
        even.assign(first_even <= last ? (last - first_even) / 2 + 1 : 0, 0);
    }

    std::vector<uint16_t>& lanes_for(uint64_t n) { return (n & 1) ? odd : even; }
    uint64_t lane_index(uint64_t n) const {
        return (n - ((n & 1) ? first_odd : first_even)) / 2;
    }
};

void accumulate_shift(WindowCounters& w, uint64_t a) {
    // odd primes m = n - a >= 3
    uint64_t n_lo = std::max(w.x + 1, a + 3);
    uint64_t n_hi = w.x + w.h;
    if (n_lo <= n_hi) {
        // n and n - a differ in parity exactly when a is odd
        uint64_t n0 = n_lo + (((n_lo ^ a) & 1) == 0 ? 1 : 0);
        if (n0 <= n_hi) {
            uint64_t lanes = (n_hi - n0) / 2 + 1;
            uint64_t m0 = n0 - a; // odd, >= 3
            uint64_t m_last = m0 + 2 * (lanes - 1);
            // span scales with h, which already bounds the counter arrays
            PrimeSegment seg = PrimeSegment::sieve(
                m0, m_last + 1, std::max(kSegmentSpanLimit, m_last + 1 - m0));
            auto& dst = w.lanes_for(n0);
            kernels::add_bit_run(dst.data() + w.lane_index(n0), seg.words(),
                                 seg.odd_bit_index(m0), lanes);
        }
    }
    // the even prime: n - a = 2
    uint64_t n2 = a + 2;
    if (n2 > w.x && n2 <= w.x + w.h) {
        w.lanes_for(n2)[w.lane_index(n2)] += 1;
    }
}

} // namespace

WindowRecord window_record(uint64_t x, uint64_t h, const LacunarySet& set) {
    if (x < 1) throw std::invalid_argument("window_record requires x >= 1");
    WindowCounters counters(x, h);
    for (uint64_t a : set.values()) accumulate_shift(counters, a);

    kernels::Moments odd = kernels::tally_counts(counters.odd.data(), counters.odd.size());
    kernels::Moments even = kernels::tally_counts(counters.even.data(), counters.even.size());

    WindowRecord rec;
    rec.x = x;
    rec.h = h;
    rec.rep_sum = odd.sum + even.sum;
    rec.rep_sq_sum = odd.sum_squares + even.sum_squares;
    rec.element_count = odd.support + even.support;
    rec.cs_bound = rec.rep_sq_sum == 0
                       ? 0.0
                       : static_cast<double>(rec.rep_sum) * static_cast<double>(rec.rep_sum) /
                             static_cast<double>(rec.rep_sq_sum);
    return rec;
}

uint64_t restricted_first_moment(uint64_t x, uint64_t h, const LacunarySet& set) {
    uint64_t total = 0;
    for (uint64_t a : set.values()) {
        if (2 * a > h) break;
        uint64_t lo = x > a ? x - a : 0;
        if (x + h <= a) continue;
        total += count_primes_in(lo, x + h - a);
    }
    return total;
}

namespace {

unsigned worker_count() {
    if (const char* env = std::getenv("SUMLAB_WORKERS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1 && n <= 256) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min(hw, 16u);
}

template <typename Fn>
void parallel_for_index(uint64_t count, Fn&& fn) {
    unsigned workers = std::min<uint64_t>(worker_count(), count);
    if (workers <= 1) {
        for (uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        uint64_t begin = count * w / workers;
        uint64_t end = count * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (uint64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SampleStats stats_of(const std::vector<double>& v) {
    SampleStats s;
    if (v.empty()) return s;
    s.min = v.front();
    s.max = v.front();
    double sum = 0.0, sum_sq = 0.0;
    for (double d : v) {
        s.min = std::min(s.min, d);
        s.max = std::max(s.max, d);
        sum += d;
        sum_sq += d * d;
    }
    double n = static_cast<double>(v.size());
    s.mean = sum / n;
    double var = sum_sq / n - s.mean * s.mean;
    s.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
    return s;
}

} // namespace

ScanResult scan(const ScanConfig& config, const LacunarySet& set) {
    config.validate();
    uint64_t h = config.window_length();
    const uint64_t stream = stream_id("scan.window.x");

    // warm the base-prime cache before the workers share it read-only
    if (!set.empty()) {
        base_primes_upto(integer_sqrt(2 * config.X + h));
    }

    ScanResult result;
    result.records.assign(config.sample_count, WindowRecord{});
    parallel_for_index(config.sample_count, [&](uint64_t i) {
        uint64_t x = config.X + sample_in(config.seed, stream, i, config.X);
        result.records[i] = window_record(x, h, set);
    });

    std::vector<double> r_over_h, q_over_h, s_over_h;
    r_over_h.reserve(result.records.size());
    q_over_h.reserve(result.records.size());
    s_over_h.reserve(result.records.size());
    uint64_t tight = 0;
    double hd = static_cast<double>(h);
    for (const WindowRecord& rec : result.records) {
        r_over_h.push_back(static_cast<double>(rec.rep_sum) / hd);
        q_over_h.push_back(static_cast<double>(rec.rep_sq_sum) / hd);
        s_over_h.push_back(static_cast<double>(rec.element_count) / hd);
        if (static_cast<double>(rec.element_count) >= 0.999 * rec.cs_bound) ++tight;
    }
    result.rep_over_h = stats_of(r_over_h);
    result.sq_over_h = stats_of(q_over_h);
    result.elements_over_h = stats_of(s_over_h);
    result.cs_tight_fraction =
        static_cast<double>(tight) / static_cast<double>(result.records.size());
    return result;
}

DeviationSummary prime_window_deviation(uint64_t X, uint64_t y, uint64_t sample_count,
                                        uint64_t seed) {
    if (y < 3 || y > X) throw std::invalid_argument("deviation window requires 3 <= y <= X");
    if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
    const uint64_t stream = stream_id("prime-dev.t");
    base_primes_upto(integer_sqrt(2 * X + y));

    std::vector<double> deviation(sample_count, 0.0);
    parallel_for_index(sample_count, [&](uint64_t i) {
        uint64_t t = X + sample_in(seed, stream, i, X);
        uint64_t count = count_primes_in(t, t + y);
        double expected = static_cast<double>(y) / std::log(static_cast<double>(t));
        deviation[i] = std::abs(static_cast<double>(count) - expected) / expected;
    });

    std::vector<double> sorted = deviation;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        size_t idx = static_cast<size_t>(std::ceil(q * static_cast<double>(sorted.size())));
        return sorted[std::min(sorted.size() - 1, idx == 0 ? 0 : idx - 1)];
    };

    DeviationSummary s;
    s.X = X;
    s.y = y;
    s.sample_count = sample_count;
    s.p50 = quantile(0.50);
    s.p90 = quantile(0.90);
    s.p95 = quantile(0.95);
    s.p99 = quantile(0.99);
    s.max = sorted.back();
    uint64_t exceed = 0;
    for (double d : deviation) {
        if (d > 0.5) ++exceed;
    }
    s.exceed_half_fraction = static_cast<double>(exceed) / static_cast<double>(sample_count);
    return s;
}

} // namespace sumlab
