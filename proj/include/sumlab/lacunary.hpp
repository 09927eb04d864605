// lacunary.hpp
// The additive set generated by sums of powers of two with polynomially
// growing exponents: parameter validation, the balancing exponent lambda,
// enumeration of the truncation up to 2X, the counting function, and the
// stream of pairwise differences.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sumlab {

struct ParamValidation {
    bool ok = false;
    std::string violation; // empty when ok
};

// Exponent data (r_1 ... r_s, lambda). Valid parameters satisfy
//   sum_{i<s} 1/r_i < 1 <= sum_{i<=s} 1/r_i,  all r_i > 1,
// and lambda solves sum_{i<s} 1/r_i + 1/(lambda r_s) = 1.
struct LacunaryParams {
    std::vector<double> r;
    double lambda = 1.0;

    size_t arity() const { return r.size(); }
};

// Checks all r_i > 1 and the double inequality on the reciprocal sums.
ParamValidation validate_exponents(std::span<const double> r);

// lambda = 1 / (r_s * (1 - sum_{i<s} 1/r_i)). Throws std::invalid_argument
// when validate_exponents rejects r. The result is always >= 1 and satisfies
// the balance identity to 1e-12.
double solve_lambda(std::span<const double> r);

// Validates and solves in one step.
LacunaryParams make_params(std::vector<double> r);

// floor(k^r) for k >= 1, r > 0. Exact whenever r is a rational p/q with
// q <= 20 (integer root extraction); otherwise long-double evaluation with a
// near-integer guard. Intended for small results (exponents of powers of 2).
uint64_t floor_pow(uint64_t k, double r);

// The sorted, deduplicated truncation of the set to [1, 2X].
class LacunarySet {
public:
    // Enumerates all sums 2^{e_1} + ... + 2^{e_s} <= 2X with
    // e_i = floor(k_i^{r_i}) for i < s and e_s = floor(floor(k_s^lambda)^{r_s}),
    // over k_i >= 1. Requires X >= 2 (so that the smallest sum can fit).
    static LacunarySet generate(const LacunaryParams& params, uint64_t X);

    const LacunaryParams& params() const { return params_; }
    uint64_t scale() const { return X_; }
    const std::vector<uint64_t>& values() const { return values_; }
    size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    uint64_t min_value() const { return values_.front(); }
    uint64_t max_value() const { return values_.back(); }

    // #{a in set : a <= x}. Requires 1 <= x <= 2X.
    uint64_t count_upto(double x) const;

    // Calls f(a2 - a1) for every pair a1 < a2; (size choose 2) values, each >= 1.
    template <typename F>
    void for_each_difference(F&& f) const {
        for (size_t i = 0; i < values_.size(); ++i) {
            for (size_t j = i + 1; j < values_.size(); ++j) {
                f(values_[j] - values_[i]);
            }
        }
    }

private:
    LacunaryParams params_;
    uint64_t X_ = 0;
    std::vector<uint64_t> values_;
};

} // namespace sumlab
