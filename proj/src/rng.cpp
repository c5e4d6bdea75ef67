#include "qiopa/rng.hpp"

#include <cmath>

#include "qiopa/math_util.hpp"

namespace qiopa {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

} // namespace

std::array<std::uint32_t, 4> Philox4x32::block(const std::array<std::uint32_t, 4>& counter,
                                               const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int r = 0; r < 10; ++r) {
        round_once(c, k);
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

CounterRng::CounterRng(RngStream stream)
    : key_{static_cast<std::uint32_t>(stream.seed),
           static_cast<std::uint32_t>(stream.seed >> 32)},
      stream_(stream.stream_id) {}

void CounterRng::refill() {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = Philox4x32::block(counter, key_);
    ++block_;
    pos_ = 0;
}

std::uint32_t CounterRng::next_u32() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
}

std::uint64_t CounterRng::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
}

double CounterRng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    // Box-Muller, cosine branch only; u1 is kept away from 0
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t CounterRng::next_below(std::uint64_t n) {
    // rejection from the top to avoid modulo bias
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

std::int64_t CounterRng::binomial(std::int64_t n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;

    const double u = next_double();
    const double nd = static_cast<double>(n);
    const double logp = std::log(p);
    const double log1mp = std::log1p(-p);

    // pmf at the mode, then walk outward alternating sides in decreasing-pmf
    // order; the scan is an inverse-CDF evaluation in a fixed atom order, so
    // the result is exact and reproducible for every n.
    std::int64_t mode = static_cast<std::int64_t>((nd + 1.0) * p);
    if (mode > n) mode = n;
    double pmf_mode = std::exp(log_binomial(n, mode)
                               + static_cast<double>(mode) * logp
                               + static_cast<double>(n - mode) * log1mp);

    double cum = pmf_mode;
    if (u < cum) return mode;

    // ratios: pmf(k+1)/pmf(k) = (n-k)/(k+1) * p/(1-p)
    const double odds = p / (1.0 - p);
    std::int64_t lo = mode, hi = mode;
    double pmf_lo = pmf_mode, pmf_hi = pmf_mode;
    while (lo > 0 || hi < n) {
        if (hi < n) {
            pmf_hi *= (static_cast<double>(n - hi) / static_cast<double>(hi + 1)) * odds;
            ++hi;
            cum += pmf_hi;
            if (u < cum) return hi;
        }
        if (lo > 0) {
            pmf_lo *= (static_cast<double>(lo) / (static_cast<double>(n - lo + 1) * odds));
            --lo;
            cum += pmf_lo;
            if (u < cum) return lo;
        }
    }
    // u landed in the last sliver of rounding error beyond the accumulated
    // mass; the mode is the safest deterministic fallback
    return mode;
}

} // namespace qiopa
