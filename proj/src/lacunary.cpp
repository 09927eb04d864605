#include "sumlab/lacunary.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace sumlab {

ParamValidation validate_exponents(std::span<const double> r) {
    ParamValidation v;
    if (r.size() < 2) {
        v.violation = "need at least two exponents";
        return v;
    }
    for (size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 1.0)) {
            std::ostringstream os;
            os << "r[" << i + 1 << "] = " << r[i] << " violates r_i > 1";
            v.violation = os.str();
            return v;
        }
    }
    double head = 0.0;
    for (size_t i = 0; i + 1 < r.size(); ++i) head += 1.0 / r[i];
    double full = head + 1.0 / r.back();
    if (!(head < 1.0)) {
        std::ostringstream os;
        os << "sum of 1/r_i over i < s is " << head << ", must be < 1";
        v.violation = os.str();
        return v;
    }
    if (!(full >= 1.0)) {
        std::ostringstream os;
        os << "sum of 1/r_i over all i is " << full << ", must be >= 1";
        v.violation = os.str();
        return v;
    }
    v.ok = true;
    return v;
}

double solve_lambda(std::span<const double> r) {
    ParamValidation v = validate_exponents(r);
    if (!v.ok) throw std::invalid_argument("invalid exponents: " + v.violation);
    double head = 0.0;
    for (size_t i = 0; i + 1 < r.size(); ++i) head += 1.0 / r[i];
    return 1.0 / (r.back() * (1.0 - head));
}

LacunaryParams make_params(std::vector<double> r) {
    LacunaryParams p;
    p.lambda = solve_lambda(r);
    p.r = std::move(r);
    return p;
}

namespace {

// Smallest q <= max_q with r*q within 1e-9 (relative) of an integer.
std::optional<std::pair<uint64_t, uint64_t>> as_rational(double r, uint64_t max_q) {
    for (uint64_t q = 1; q <= max_q; ++q) {
        double t = r * static_cast<double>(q);
        double n = std::round(t);
        if (std::abs(t - n) <= 1e-9 * std::max(1.0, std::abs(t)) && n >= 1.0) {
            return std::make_pair(static_cast<uint64_t>(n), q);
        }
    }
    return std::nullopt;
}

constexpr unsigned __int128 kSaturated = ~static_cast<unsigned __int128>(0);

// base^exp with saturation at 2^128 - 1.
unsigned __int128 pow_saturating(unsigned __int128 base, uint64_t exp) {
    unsigned __int128 result = 1;
    while (exp > 0) {
        if (exp & 1) {
            if (base != 0 && result > kSaturated / base) return kSaturated;
            result *= base;
        }
        exp >>= 1;
        if (exp == 0) break;
        if (base > 1 && base > kSaturated / base) return kSaturated;
        base *= base;
    }
    return result;
}

// floor(k^{p/q}) by integer q-th root of k^p, exact when k^p fits in 128 bits.
std::optional<uint64_t> floor_root_pow(uint64_t k, uint64_t p, uint64_t q) {
    unsigned __int128 target = pow_saturating(k, p);
    if (target == kSaturated) return std::nullopt;
    // binary search for the largest m with m^q <= target
    uint64_t lo = 0, hi = 1;
    while (pow_saturating(hi, q) <= target) {
        lo = hi;
        if (hi > (uint64_t{1} << 62)) break;
        hi *= 2;
    }
    while (lo + 1 < hi) {
        uint64_t mid = lo + (hi - lo) / 2;
        if (pow_saturating(mid, q) <= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

} // namespace

uint64_t floor_pow(uint64_t k, double r) {
    if (k == 0) throw std::invalid_argument("floor_pow requires k >= 1");
    if (!(r > 0.0)) throw std::invalid_argument("floor_pow requires r > 0");
    if (k == 1) return 1;
    if (auto pq = as_rational(r, 20)) {
        if (auto exact = floor_root_pow(k, pq->first, pq->second)) return *exact;
    }
    // floating path with a guard against misrounded floors near integers
    long double v = std::pow(static_cast<long double>(k), static_cast<long double>(r));
    auto m = static_cast<uint64_t>(v);
    long double frac = v - static_cast<long double>(m);
    if (frac > 1.0L - 1e-9L) {
        // possibly one below the true floor
        if (r * std::log(static_cast<long double>(k)) >=
            std::log(static_cast<long double>(m + 1))) {
            ++m;
        }
    } else if (frac < 1e-9L && m > 1) {
        // possibly one above the true floor
        if (r * std::log(static_cast<long double>(k)) < std::log(static_cast<long double>(m))) {
            --m;
        }
    }
    return m;
}

LacunarySet LacunarySet::generate(const LacunaryParams& params, uint64_t X) {
    ParamValidation v = validate_exponents(params.r);
    if (!v.ok) throw std::invalid_argument("invalid exponents: " + v.violation);
    double head = 0.0;
    for (size_t i = 0; i + 1 < params.r.size(); ++i) head += 1.0 / params.r[i];
    double balance = head + 1.0 / (params.lambda * params.r.back());
    if (std::abs(balance - 1.0) > 1e-12) {
        throw std::invalid_argument("lambda does not satisfy the balance identity");
    }
    if (X < 2) throw std::invalid_argument("generate requires X >= 2");
    if (X > (uint64_t{1} << 62)) throw std::invalid_argument("2X must fit in 64 bits");

    uint64_t bound = 2 * X;
    unsigned max_exp = 63;
    while (max_exp > 0 && (uint64_t{1} << max_exp) > bound) --max_exp;

    size_t s = params.r.size();
    // per-slot exponent lists; strictly increasing in k, so stop at the first
    // exponent past max_exp
    std::vector<std::vector<unsigned>> slot_exps(s);
    for (size_t i = 0; i < s; ++i) {
        bool last = i + 1 == s;
        for (uint64_t k = 1;; ++k) {
            uint64_t e = last ? floor_pow(floor_pow(k, params.lambda), params.r[i])
                              : floor_pow(k, params.r[i]);
            if (e > max_exp) break;
            slot_exps[i].push_back(static_cast<unsigned>(e));
        }
    }

    std::vector<uint64_t> sums;
    std::vector<uint64_t> partial(s + 1, 0);
    // remaining slots each contribute at least 2^1
    auto min_tail = [&](size_t depth) { return 2 * (s - 1 - depth); };

    auto recurse = [&](auto&& self, size_t depth) -> void {
        if (depth == s) {
            sums.push_back(partial[s]);
            return;
        }
        for (unsigned e : slot_exps[depth]) {
            uint64_t term = uint64_t{1} << e;
            if (partial[depth] + term + min_tail(depth) > bound) break;
            partial[depth + 1] = partial[depth] + term;
            self(self, depth + 1);
        }
    };
    recurse(recurse, 0);

    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

    LacunarySet set;
    set.params_ = params;
    set.X_ = X;
    set.values_ = std::move(sums);
    return set;
}

uint64_t LacunarySet::count_upto(double x) const {
    if (!(x >= 1.0) || x > 2.0 * static_cast<double>(X_)) {
        throw std::invalid_argument("count_upto requires 1 <= x <= 2X");
    }
    auto bound = static_cast<uint64_t>(x);
    return static_cast<uint64_t>(
        std::upper_bound(values_.begin(), values_.end(), bound) - values_.begin());
}

} // namespace sumlab
