// Runtime backend selection for the bit kernels. Resolved once on first use.

#include "sumlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace sumlab::kernels {

namespace {

struct Backend {
    uint64_t (*popcount_range)(const uint64_t*, uint64_t, uint64_t);
    void (*add_bit_run)(uint16_t*, const uint64_t*, uint64_t, size_t);
    Moments (*tally_counts)(const uint16_t*, size_t);
    const char* name;
};

constexpr Backend kScalar{scalar::popcount_range, scalar::add_bit_run, scalar::tally_counts,
                          "scalar"};

#if defined(SUMLAB_X86_64)
constexpr Backend kAvx2{avx2::popcount_range, avx2::add_bit_run, avx2::tally_counts, "avx2"};
#endif

Backend resolve() {
    const char* forced = std::getenv("SUMLAB_KERNELS");
    if (forced && std::strcmp(forced, "scalar") == 0) return kScalar;
#if defined(SUMLAB_X86_64)
    if (avx2::available() && (!forced || std::strcmp(forced, "avx2") == 0)) return kAvx2;
#endif
    return kScalar;
}

const Backend& active() {
    static const Backend backend = resolve();
    return backend;
}

} // namespace

uint64_t popcount_range(const uint64_t* words, uint64_t bit_begin, uint64_t bit_end) {
    return active().popcount_range(words, bit_begin, bit_end);
}

void add_bit_run(uint16_t* acc, const uint64_t* words, uint64_t bit_begin, size_t count) {
    active().add_bit_run(acc, words, bit_begin, count);
}

Moments tally_counts(const uint16_t* counts, size_t n) {
    return active().tally_counts(counts, n);
}

const char* active_backend() {
    return active().name;
}

} // namespace sumlab::kernels
