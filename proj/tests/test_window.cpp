#include "sumlab/window.hpp"

#include "sumlab/prime.hpp"
#include "sumlab/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace sumlab;

namespace {

// naive double loop over n and a, the oracle for the whole window pipeline
struct NaiveRecord {
    uint64_t rep_sum = 0, rep_sq_sum = 0, element_count = 0;
};

uint64_t naive_rep(uint64_t n, const LacunarySet& set) {
    uint64_t f = 0;
    for (uint64_t a : set.values()) {
        if (a + 2 <= n && is_prime_u64(n - a)) ++f;
    }
    return f;
}

NaiveRecord naive_window(uint64_t x, uint64_t h, const LacunarySet& set) {
    NaiveRecord rec;
    for (uint64_t n = x + 1; n <= x + h; ++n) {
        uint64_t f = naive_rep(n, set);
        rec.rep_sum += f;
        rec.rep_sq_sum += f * f;
        rec.element_count += f >= 1;
    }
    return rec;
}

LacunarySet small_set() {
    return LacunarySet::generate(make_params({2, 2}), 10'000);
}

} // namespace

TEST_CASE("rep_function worked examples") {
    LacunarySet set = LacunarySet::generate(make_params({2, 2}), 16);
    CHECK(rep_function(9, set) == 1);   // 9 - 4 = 5
    CHECK(rep_function(21, set) == 2);  // 17 and 3
    CHECK(rep_function(1, set) == 0);
    CHECK(rep_function(34, set) == 1);  // 34 - 32 = 2
}

TEST_CASE("rep_function is bounded by the set size") {
    LacunarySet set = small_set();
    for (uint64_t trial = 0; trial < 300; ++trial) {
        uint64_t n = 1 + sample_in(301, 1, trial, 30'000);
        uint64_t f = rep_function(n, set);
        CHECK(f <= set.size());
        CHECK(f == naive_rep(n, set));
    }
}

TEST_CASE("window_record equals the naive double loop") {
    LacunarySet set = small_set();
    for (uint64_t trial = 0; trial < 60; ++trial) {
        uint64_t x = 1 + sample_in(307, 2, trial, 20'000);
        uint64_t h = 1 + sample_in(307, 3, trial, 150);
        WindowRecord rec = window_record(x, h, set);
        NaiveRecord expected = naive_window(x, h, set);
        CAPTURE(x);
        CAPTURE(h);
        CHECK(rec.rep_sum == expected.rep_sum);
        CHECK(rec.rep_sq_sum == expected.rep_sq_sum);
        CHECK(rec.element_count == expected.element_count);
    }
}

TEST_CASE("window_record example from the three-element set") {
    LacunarySet set = LacunarySet::generate(make_params({2, 2}), 16);
    WindowRecord rec = window_record(20, 2, set);
    NaiveRecord expected = naive_window(20, 2, set);
    CHECK(rec.rep_sum == expected.rep_sum);
    CHECK(rec.rep_sq_sum == expected.rep_sq_sum);
    CHECK(rec.element_count == expected.element_count);
    CHECK(rec.rep_sum == 2); // f(21) = 2, f(22) = 0
    CHECK(rec.element_count == 1);
}

TEST_CASE("window with no reachable shifts is empty") {
    LacunarySet set = LacunarySet::generate(make_params({2, 2}), 16);
    REQUIRE(set.min_value() == 4);
    WindowRecord rec = window_record(1, 2, set); // n in {2, 3} all below min + 2
    CHECK(rec.rep_sum == 0);
    CHECK(rec.rep_sq_sum == 0);
    CHECK(rec.element_count == 0);
    CHECK(rec.cs_bound == 0.0);
}

TEST_CASE("window invariants: ordering and Cauchy-Schwarz") {
    LacunarySet set = small_set();
    for (uint64_t trial = 0; trial < 150; ++trial) {
        uint64_t x = 1 + sample_in(311, 4, trial, 19'000);
        uint64_t h = 1 + sample_in(311, 5, trial, 400);
        WindowRecord rec = window_record(x, h, set);
        CHECK(rec.element_count <= h);
        CHECK(rec.element_count <= rec.rep_sum);
        CHECK(rec.rep_sum <= rec.rep_sq_sum);
        CHECK(rec.rep_sum * rec.rep_sum <= rec.element_count * rec.rep_sq_sum);
    }
}

TEST_CASE("window additivity over consecutive halves") {
    LacunarySet set = small_set();
    for (uint64_t trial = 0; trial < 40; ++trial) {
        uint64_t x = 1 + sample_in(313, 6, trial, 15'000);
        uint64_t h = 1 + sample_in(313, 7, trial, 200);
        WindowRecord whole = window_record(x, 2 * h, set);
        WindowRecord left = window_record(x, h, set);
        WindowRecord right = window_record(x + h, h, set);
        CHECK(whole.rep_sum == left.rep_sum + right.rep_sum);
        CHECK(whole.rep_sq_sum == left.rep_sq_sum + right.rep_sq_sum);
        CHECK(whole.element_count == left.element_count + right.element_count);
    }
}

TEST_CASE("restricted first moment: examples and domination") {
    LacunarySet set = LacunarySet::generate(make_params({2, 2}), 16);
    // h below twice the least element empties the restriction
    CHECK(restricted_first_moment(100, 7, set) == 0);

    // h = 40 reaches the shifts 4 and 18
    uint64_t x = 100;
    uint64_t expected = count_primes_in(x - 4, x + 40 - 4) + count_primes_in(x - 18, x + 40 - 18);
    CHECK(restricted_first_moment(x, 40, set) == expected);

    LacunarySet big = small_set();
    for (uint64_t trial = 0; trial < 1000; ++trial) {
        uint64_t wx = 1 + sample_in(317, 8, trial, 18'000);
        uint64_t wh = 1 + sample_in(317, 9, trial, 300);
        CHECK(restricted_first_moment(wx, wh, big) <= window_record(wx, wh, big).rep_sum);
    }
}

TEST_CASE("scan config validation") {
    ScanConfig config{1'000'000, 0.5, 10, 1};
    config.validate();
    CHECK(config.window_length() == 1000);

    ScanConfig bad_theta{1'000'000, 1.2, 10, 1};
    CHECK_THROWS_AS(bad_theta.validate(), std::invalid_argument);
    ScanConfig tiny_h{4, 0.1, 10, 1};
    CHECK_THROWS_AS(tiny_h.validate(), std::invalid_argument);
    ScanConfig no_samples{1'000'000, 0.5, 0, 1};
    CHECK_THROWS_AS(no_samples.validate(), std::invalid_argument);
}

TEST_CASE("scan is deterministic and windows stay in range") {
    LacunarySet set = LacunarySet::generate(make_params({2, 2}), 1'000'000);
    ScanConfig config{1'000'000, 0.5, 50, 12345};
    ScanResult a = scan(config, set);
    ScanResult b = scan(config, set);
    REQUIRE(a.records.size() == 50);
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].x == b.records[i].x);
        CHECK(a.records[i].rep_sum == b.records[i].rep_sum);
        CHECK(a.records[i].x >= config.X);
        CHECK(a.records[i].x <= 2 * config.X);
        CHECK(a.records[i].element_count <= a.records[i].h);
    }
    CHECK(a.rep_over_h.mean == b.rep_over_h.mean);
    CHECK(a.cs_tight_fraction == 1.0); // integer records satisfy the bound exactly

    ScanResult c = scan(ScanConfig{1'000'000, 0.5, 50, 999}, set);
    bool any_different = false;
    for (size_t i = 0; i < c.records.size(); ++i) {
        any_different = any_different || c.records[i].x != a.records[i].x;
    }
    CHECK(any_different);
}

TEST_CASE("scan mean tracks the density heuristic") {
    // mean of R/h should sit near set_size / ln X
    LacunarySet set = LacunarySet::generate(make_params({2, 2}), 1'000'000);
    ScanResult res = scan(ScanConfig{1'000'000, 0.5, 100, 11}, set);
    double heuristic = static_cast<double>(set.size()) / std::log(1e6);
    CHECK(res.rep_over_h.mean >= heuristic / 3.0);
    CHECK(res.rep_over_h.mean <= heuristic * 3.0);
}

TEST_CASE("scan against the naive oracle at small scale") {
    LacunarySet set = small_set();
    ScanConfig config{10'000, 0.5, 25, 7};
    ScanResult res = scan(config, set);
    for (const WindowRecord& rec : res.records) {
        NaiveRecord expected = naive_window(rec.x, rec.h, set);
        CHECK(rec.rep_sum == expected.rep_sum);
        CHECK(rec.rep_sq_sum == expected.rep_sq_sum);
        CHECK(rec.element_count == expected.element_count);
    }
}

TEST_CASE("prime window deviation is deterministic and sane") {
    DeviationSummary a = prime_window_deviation(1'000'000, 10'000, 50, 3);
    DeviationSummary b = prime_window_deviation(1'000'000, 10'000, 50, 3);
    CHECK(a.p50 == b.p50);
    CHECK(a.p99 == b.p99);
    CHECK(a.max == b.max);
    CHECK(a.p50 <= a.p90);
    CHECK(a.p90 <= a.p95);
    CHECK(a.p95 <= a.p99);
    CHECK(a.p99 <= a.max);
    CHECK(a.exceed_half_fraction >= 0.0);
    CHECK(a.exceed_half_fraction <= 1.0);

    // single giant window: y = X
    DeviationSummary giant = prime_window_deviation(100'000, 100'000, 1, 3);
    CHECK(giant.sample_count == 1);
    CHECK(giant.max == giant.p50);

    CHECK_THROWS_AS(prime_window_deviation(100, 2, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(prime_window_deviation(100, 101, 5, 1), std::invalid_argument);
}

TEST_CASE("deviation matches a direct recount") {
    uint64_t X = 500'000, y = 5'000;
    DeviationSummary dev = prime_window_deviation(X, y, 1, 42);
    uint64_t t = X + sample_in(42, stream_id("prime-dev.t"), 0, X);
    double expected = static_cast<double>(y) / std::log(static_cast<double>(t));
    double delta =
        std::abs(static_cast<double>(count_primes_in(t, t + y)) - expected) / expected;
    CHECK(dev.max == doctest::Approx(delta));
}
