#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>

#include "qiopa/math_util.hpp"
#include "qiopa/rng.hpp"

using namespace qiopa;

// published test vectors for the 10-round 4x32 block function
TEST_CASE("philox known-answer vectors") {
    const std::array<std::uint32_t, 4> zeros{};
    const std::array<std::uint32_t, 2> zero_key{};
    CHECK(Philox4x32::block(zeros, zero_key)
          == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

    const std::array<std::uint32_t, 4> ones{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu};
    const std::array<std::uint32_t, 2> ones_key{0xffffffffu, 0xffffffffu};
    CHECK(Philox4x32::block(ones, ones_key)
          == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

    const std::array<std::uint32_t, 4> pi_ctr{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u};
    const std::array<std::uint32_t, 2> pi_key{0xa4093822u, 0x299f31d0u};
    CHECK(Philox4x32::block(pi_ctr, pi_key)
          == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and independent of call pattern") {
    CounterRng a({42, 7});
    CounterRng b({42, 7});
    for (int k = 0; k < 100; ++k) CHECK(a.next_u32() == b.next_u32());

    // different stream ids give different sequences
    CounterRng c({42, 8});
    int same = 0;
    CounterRng a2({42, 7});
    for (int k = 0; k < 64; ++k) same += (a2.next_u32() == c.next_u32()) ? 1 : 0;
    CHECK(same < 8);
}

TEST_CASE("next_double covers [0, 1) with 53-bit resolution") {
    CounterRng rng({1, 0});
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        const double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo < 1e-3);
    CHECK(hi > 1.0 - 1e-3);
    // mean of U(0,1): stderr = 1/sqrt(12 n)
    CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

TEST_CASE("next_below is unbiased over a non-power-of-two range") {
    CounterRng rng({9, 1});
    std::array<int, 7> h{};
    const int n = 70000;
    for (int k = 0; k < n; ++k) ++h[rng.next_below(7)];
    for (int v : h) CHECK(std::abs(v - n / 7) < 5 * std::sqrt(n / 7.0));
}

TEST_CASE("binomial sampler matches the exact pmf for small n") {
    // chi-squared style check against exact probabilities
    const std::int64_t n = 12;
    const double p = 0.3;
    CounterRng rng({4, 2});
    std::map<std::int64_t, std::int64_t> h;
    const int draws = 200000;
    for (int k = 0; k < draws; ++k) ++h[rng.binomial(n, p)];
    for (std::int64_t k = 0; k <= n; ++k) {
        const double pmf = std::exp(log_binomial(n, k) + k * std::log(p)
                                    + (n - k) * std::log1p(-p));
        const double expect = draws * pmf;
        if (expect < 10.0) continue;
        const double got = static_cast<double>(h[k]);
        CHECK(std::abs(got - expect) < 5.0 * std::sqrt(expect));
    }
}

TEST_CASE("binomial sampler mean and variance at the thinning operating point") {
    // n and p of the detector-arm thinning at high gain; mean n p = 132.6
    const std::int64_t n = 6630;
    const double p = 0.02;
    CounterRng rng({4, 3});
    double sum = 0.0, sq = 0.0;
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) {
        const double v = static_cast<double>(rng.binomial(n, p));
        sum += v;
        sq += v * v;
    }
    const double mean = sum / draws;
    const double var = sq / draws - mean * mean;
    const double want_mean = n * p;           // 132.6
    const double want_var = n * p * (1.0 - p);
    CHECK(std::abs(mean - want_mean) < 4.0 * std::sqrt(want_var / draws));
    CHECK(std::abs(var - want_var) < 0.05 * want_var);
}

TEST_CASE("binomial edge cases") {
    CounterRng rng({4, 4});
    CHECK(rng.binomial(0, 0.5) == 0);
    CHECK(rng.binomial(100, 0.0) == 0);
    CHECK(rng.binomial(100, 1.0) == 100);
    for (int k = 0; k < 100; ++k) {
        const std::int64_t v = rng.binomial(3, 0.5);
        CHECK(v >= 0);
        CHECK(v <= 3);
    }
}

TEST_CASE("gaussian moments") {
    CounterRng rng({17, 0});
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double v = rng.next_gaussian();
        sum += v;
        sq += v * v;
    }
    CHECK(std::abs(sum / n) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(sq / n - 1.0) < 0.03);
}
