#include "sumlab/prime.hpp"

#include "sumlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace sumlab {

uint64_t integer_sqrt(uint64_t n) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n && (r + 1) <= uint64_t{0xFFFFFFFF}) ++r;
    return r;
}

namespace {

std::vector<uint32_t> simple_sieve(uint32_t limit) {
    std::vector<uint8_t> mark(static_cast<size_t>(limit) + 1, 1);
    mark[0] = 0;
    if (limit >= 1) mark[1] = 0;
    for (uint64_t i = 2; i * i <= limit; ++i) {
        if (!mark[i]) continue;
        for (uint64_t j = i * i; j <= limit; j += i) mark[j] = 0;
    }
    std::vector<uint32_t> primes;
    for (uint32_t i = 2; i <= limit; ++i) {
        if (mark[i]) primes.push_back(i);
    }
    return primes;
}

std::mutex g_base_primes_mutex;
std::shared_ptr<const std::vector<uint32_t>> g_base_primes;
uint64_t g_base_primes_limit = 0;

} // namespace

std::shared_ptr<const std::vector<uint32_t>> base_primes_upto(uint64_t limit) {
    if (limit > uint64_t{0xFFFFFFFF}) throw std::invalid_argument("base prime limit exceeds 32 bits");
    std::lock_guard<std::mutex> lock(g_base_primes_mutex);
    if (!g_base_primes || limit > g_base_primes_limit) {
        uint64_t new_limit = std::max<uint64_t>(limit, std::max<uint64_t>(2 * g_base_primes_limit, 1 << 16));
        new_limit = std::min<uint64_t>(new_limit, uint64_t{0xFFFFFFFF});
        g_base_primes = std::make_shared<const std::vector<uint32_t>>(
            simple_sieve(static_cast<uint32_t>(new_limit)));
        g_base_primes_limit = new_limit;
    }
    return g_base_primes;
}

PrimeSegment PrimeSegment::sieve(uint64_t lo, uint64_t hi, uint64_t span_limit) {
    if (lo >= hi) throw std::invalid_argument("sieve segment requires lo < hi");
    if (hi - lo > span_limit) throw std::length_error("sieve segment exceeds span limit");

    PrimeSegment seg;
    seg.lo_ = lo;
    seg.hi_ = hi;
    seg.has_two_ = lo <= 2 && 2 < hi;
    seg.odd_base_ = lo | 1;
    seg.bit_count_ = hi > seg.odd_base_ ? (hi - seg.odd_base_ + 1) / 2 : 0;
    seg.words_used_ = static_cast<size_t>((seg.bit_count_ + 63) / 64);
    seg.words_.assign(seg.words_used_ + 1, ~uint64_t{0}); // +1 padding word

    auto clear_bit = [&seg](uint64_t idx) { seg.words_[idx >> 6] &= ~(uint64_t{1} << (idx & 63)); };

    if (seg.odd_base_ == 1 && seg.bit_count_ > 0) clear_bit(0); // 1 is not prime

    if (seg.bit_count_ > 0) {
        uint64_t top = hi - 1;
        auto primes = base_primes_upto(integer_sqrt(top));
        for (uint32_t p : *primes) {
            if (p == 2) continue;
            uint64_t pp = uint64_t{p} * p;
            if (pp >= hi) break;
            // first odd multiple of p that is >= odd_base and >= p*p
            uint64_t start = ((seg.odd_base_ + p - 1) / p) * p;
            if ((start & 1) == 0) start += p;
            if (start < pp) {
                start = pp; // p itself stays prime
            }
            for (uint64_t m = start; m < hi; m += 2 * uint64_t{p}) {
                clear_bit((m - seg.odd_base_) / 2);
            }
        }
    }

    // zero unused tail bits and the padding word so buffers compare cleanly
    if (seg.bit_count_ % 64 != 0 && seg.words_used_ > 0) {
        seg.words_[seg.words_used_ - 1] &= ~uint64_t{0} >> (64 - (seg.bit_count_ % 64));
    }
    seg.words_[seg.words_used_] = 0;
    return seg;
}

bool PrimeSegment::is_prime(uint64_t n) const {
    if (!contains(n)) throw std::out_of_range("PrimeSegment::is_prime outside [lo, hi)");
    if (n == 2) return has_two_;
    if (n < 2 || n % 2 == 0) return false;
    uint64_t idx = odd_bit_index(n);
    return (words_[idx >> 6] >> (idx & 63)) & 1u;
}

uint64_t PrimeSegment::count_in(uint64_t a, uint64_t b) const {
    // primes p with a < p <= b, clamped to [lo, hi)
    uint64_t lo_excl = std::max(a, lo_ == 0 ? 0 : lo_ - 1);
    uint64_t hi_incl = std::min(b, hi_ - 1);
    if (lo_excl >= hi_incl) return 0;
    uint64_t total = 0;
    if (has_two_ && lo_excl < 2 && 2 <= hi_incl) ++total;
    uint64_t first_odd = (lo_excl + 1) | 1;
    if (first_odd < odd_base_) first_odd = odd_base_;
    if (first_odd > hi_incl || bit_count_ == 0) return total;
    uint64_t last_odd = hi_incl | 1;
    if (last_odd > hi_incl) last_odd -= 2;
    if (last_odd < first_odd) return total;
    total += kernels::popcount_range(words_.data(), odd_bit_index(first_odd),
                                     odd_bit_index(last_odd) + 1);
    return total;
}

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Witness set covering all 64-bit integers.
constexpr uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

} // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : kWitnesses) {
        if (n % p == 0) return n == p;
    }
    if (n < 41 * 41) return true;
    uint64_t d = n - 1;
    int s = __builtin_ctzll(d);
    d >>= s;
    for (uint64_t a : kWitnesses) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

uint64_t count_primes_in(uint64_t lo, uint64_t hi) {
    if (lo > hi) throw std::invalid_argument("count_primes_in requires lo <= hi");
    uint64_t total = 0;
    uint64_t cur = lo + 1;
    while (cur <= hi && cur != 0) {
        uint64_t end = cur + std::min(hi - cur, kSegmentSpanLimit - 1);
        PrimeSegment seg = PrimeSegment::sieve(cur, end + 1);
        total += seg.count_in(cur - 1, end);
        cur = end + 1;
    }
    return total;
}

uint64_t count_primes_in_ap(uint64_t lo, uint64_t hi, uint64_t modulus, uint64_t residue) {
    if (modulus < 1) throw std::invalid_argument("modulus must be >= 1");
    if (residue >= modulus) throw std::invalid_argument("residue must lie in [0, modulus)");
    if (std::gcd(residue, modulus) != 1) {
        throw std::invalid_argument("residue must be coprime to modulus");
    }
    if (lo > hi) throw std::invalid_argument("count_primes_in_ap requires lo <= hi");
    uint64_t total = 0;
    uint64_t cur = lo + 1;
    while (cur <= hi && cur != 0) {
        uint64_t end = cur + std::min(hi - cur, kSegmentSpanLimit - 1);
        PrimeSegment seg = PrimeSegment::sieve(cur, end + 1);
        seg.for_each_prime([&](uint64_t p) {
            if (p % modulus == residue) ++total;
        });
        cur = end + 1;
    }
    return total;
}

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double (*f)(double), double a, double b, double fa, double fm, double fb,
                        double whole, double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(fa, flm, fm, a, m);
    double right = simpson(fm, frm, fb, m, b);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double reciprocal_log(double t) {
    return 1.0 / std::log(t);
}

} // namespace

double logarithmic_integral(double x) {
    if (!(x >= 2.0)) throw std::invalid_argument("logarithmic_integral requires x >= 2");
    if (x == 2.0) return 0.0;
    double a = 2.0, b = x;
    double fa = reciprocal_log(a), fb = reciprocal_log(b), fm = reciprocal_log(0.5 * (a + b));
    double whole = simpson(fa, fm, fb, a, b);
    // coarse magnitude estimate sets the absolute tolerance for 1e-10 relative
    double eps = std::max(std::abs(whole), 1.0) * 1e-11;
    return adaptive_simpson(reciprocal_log, a, b, fa, fm, fb, whole, eps, 48);
}

} // namespace sumlab
