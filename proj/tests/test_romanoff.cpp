#include "sumlab/romanoff.hpp"

#include "sumlab/prime.hpp"
#include "sumlab/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace sumlab;

namespace {

uint64_t naive_rep(uint64_t n, int k_min) {
    uint64_t count = 0;
    for (int k = k_min; k < 62; ++k) {
        uint64_t power = uint64_t{1} << k;
        if (power >= n) break;
        uint64_t m = n - power;
        bool prime = m >= 2;
        for (uint64_t d = 2; d * d <= m && prime; ++d) {
            if (m % d == 0) prime = false;
        }
        if (prime && m >= 2) ++count;
    }
    return count;
}

} // namespace

TEST_CASE("romanoff_rep worked examples and conventions") {
    CHECK(romanoff_rep(5) == 1);
    CHECK(romanoff_rep(7) == 2);
    CHECK(romanoff_rep(3) == 0);
    CHECK(romanoff_rep(3, RomanoffConvention{0}) == 1); // 3 - 1 = 2

    for (uint64_t trial = 0; trial < 120; ++trial) {
        uint64_t n = 2 + sample_in(401, 1, trial, 100'000);
        CHECK(romanoff_rep(n) == naive_rep(n, 1));
        CHECK(romanoff_rep(n, RomanoffConvention{0}) == naive_rep(n, 0));
        // the k = 0 convention dominates pointwise
        CHECK(romanoff_rep(n, RomanoffConvention{0}) >= romanoff_rep(n));
        // trivial pointwise bound
        CHECK(romanoff_rep(n) <=
              static_cast<uint64_t>(std::log2(static_cast<double>(n))));
    }
}

TEST_CASE("build_modulus worked examples") {
    SmoothModulus d = build_modulus(12);
    CHECK(d.modulus == 1155);
    CHECK(d.totient == 480);
    CHECK(d.ratio == doctest::Approx(2.40625));
    CHECK(d.primes == std::vector<uint32_t>{3, 5, 7, 11});

    CHECK(build_modulus(12, {7}).modulus == 165);
    SmoothModulus tiny = build_modulus(3);
    CHECK(tiny.modulus == 3);
    CHECK(tiny.ratio == doctest::Approx(1.5));

    CHECK_THROWS_AS(build_modulus(2), std::invalid_argument);
    CHECK_THROWS_AS(build_modulus(500), std::overflow_error);
}

TEST_CASE("hunt scans exactly the multiples in the window") {
    SmoothModulus d = build_modulus(8); // 105
    auto hunt = hunt_large_multiplicity(1'000'000, 100'000, d);
    REQUIRE(hunt.has_value());
    CHECK(hunt->n % d.modulus == 0);
    CHECK(hunt->n > 1'000'000);
    CHECK(hunt->n <= 1'100'000);
    CHECK(static_cast<double>(hunt->multiplicity) >= hunt->window_average);
    uint64_t expected_multiples = 1'100'000 / d.modulus - 1'000'000 / d.modulus;
    CHECK(hunt->multiples_scanned == expected_multiples);

    // independent recount of the maximizer
    CHECK(romanoff_rep(hunt->n) == hunt->multiplicity);

    // exhaustive check that no earlier multiple beats it
    for (uint64_t n = 1'000'000 / d.modulus * d.modulus + d.modulus; n < hunt->n;
         n += d.modulus) {
        CHECK(romanoff_rep(n) < hunt->multiplicity);
    }

    // no multiple inside a short window: the next one past 1e6 is 1000020
    CHECK_FALSE(hunt_large_multiplicity(1'000'000, 15, d).has_value());
}

TEST_CASE("positive proportion scan pigeonholes at threshold zero") {
    SmoothModulus d = build_modulus(8); // 105
    ProportionResult all = positive_proportion_scan(100'000, 0.5, d, 0, 40, 5);
    CHECK(all.fraction == 1.0);

    ProportionResult none = positive_proportion_scan(100'000, 0.5, d, 1'000'000'000, 40, 5);
    CHECK(none.fraction == 0.0);

    ProportionResult some = positive_proportion_scan(1'000'000, 0.5, d, 3, 60, 5);
    CHECK(some.fraction > 0.0);
    CHECK(some.window_sum_mean >= some.window_sum_min);
    CHECK(some.window_sum_max >= some.window_sum_mean);

    // h = 316 < 1155
    CHECK_THROWS_AS(positive_proportion_scan(100'000, 0.5, build_modulus(12), 0, 10, 5),
                    std::invalid_argument);
}

TEST_CASE("admissible shift sets: worked examples") {
    AdmissibleShiftSet r5 = admissible_shift_set(5, 3);
    CHECK(r5.exponent_lcm == 4);
    CHECK(r5.exponents == std::vector<uint64_t>{4, 8, 12});
    CHECK(r5.verified);
    CHECK(r5.residues_mod(3) == std::vector<uint32_t>{2});
    CHECK(r5.residues_mod(5) == std::vector<uint32_t>{4});

    AdmissibleShiftSet r2 = admissible_shift_set(2, 6);
    CHECK(r2.exponent_lcm == 1);
    CHECK(r2.verified);
    CHECK(r2.residues_mod(2) == std::vector<uint32_t>{0});

    AdmissibleShiftSet r11 = admissible_shift_set(11, 4);
    CHECK(r11.exponent_lcm == 60);
    CHECK(r11.verified);

    CHECK_THROWS_AS(admissible_shift_set(1, 3), std::invalid_argument);
    CHECK_THROWS_AS(admissible_shift_set(5, 0), std::invalid_argument);
}

TEST_CASE("admissible verification is independent of count") {
    for (uint32_t r : {3u, 5u, 7u, 11u, 13u}) {
        bool first = admissible_shift_set(r, 1).verified;
        for (uint32_t count : {2u, 5u, 9u}) {
            CHECK(admissible_shift_set(r, count).verified == first);
        }
        CHECK(first);
    }
}

TEST_CASE("admissible residue checks cover a few informational primes") {
    AdmissibleShiftSet set = admissible_shift_set(5, 3);
    size_t informational = 0;
    for (const auto& check : set.checks) {
        if (check.informational) {
            ++informational;
            CHECK(check.p > 5);
        } else {
            CHECK(check.p <= 5);
            CHECK(check.omits_class);
        }
    }
    CHECK(informational == 3);
}

TEST_CASE("representable odds to 30 and the 127 gap") {
    RepresentableSequence seq = enumerate_representable_odds(30);
    CHECK(seq.values == std::vector<uint64_t>{5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29});
    CHECK(seq.non_representable == std::vector<uint64_t>{3});

    RepresentableSequence to_1000 = enumerate_representable_odds(1000);
    CHECK(std::find(to_1000.non_representable.begin(), to_1000.non_representable.end(), 127) !=
          to_1000.non_representable.end());

    GapStatistics stats = gap_statistics(to_1000);
    // the gap across 127 runs from 125 to 129
    auto it = std::find(to_1000.values.begin(), to_1000.values.end(), 125);
    REQUIRE(it != to_1000.values.end());
    size_t idx = static_cast<size_t>(it - to_1000.values.begin());
    CHECK(stats.gaps[idx] == 4);
    CHECK(*(it + 1) == 129);

    for (double v : stats.normalized) {
        CHECK(v > 0.0);
        CHECK(std::isfinite(v));
    }
    CHECK_THROWS_AS(enumerate_representable_odds(4), std::invalid_argument);
}

TEST_CASE("the zero-exponent convention adds 3 and nothing else below 30") {
    RepresentableSequence seq = enumerate_representable_odds(30, RomanoffConvention{0});
    CHECK(seq.values.front() == 3);
    CHECK(seq.non_representable.empty());
}

TEST_CASE("two-sided representability recheck") {
    RepresentableSequence seq = enumerate_representable_odds(20'000);
    for (uint64_t trial = 0; trial < 150; ++trial) {
        size_t idx = static_cast<size_t>(sample_in(409, 2, trial, seq.values.size() - 1));
        CHECK(romanoff_rep(seq.values[idx]) >= 1);
    }
    REQUIRE(seq.non_representable.size() >= 100);
    for (uint64_t trial = 0; trial < 120; ++trial) {
        size_t idx =
            static_cast<size_t>(sample_in(419, 3, trial, seq.non_representable.size() - 1));
        CHECK(romanoff_rep(seq.non_representable[idx]) == 0);
    }
}

TEST_CASE("gap statistics on a hand-made sequence") {
    RepresentableSequence seq;
    seq.limit = 10;
    seq.values = {5, 7, 9};
    GapStatistics stats = gap_statistics(seq);
    CHECK(stats.max_gap == 2);
    CHECK(stats.at_value == 5);
    CHECK(stats.gaps == std::vector<uint64_t>{2, 2});

    RepresentableSequence tiny;
    tiny.values = {5};
    CHECK_THROWS_AS(gap_statistics(tiny), std::invalid_argument);
}
