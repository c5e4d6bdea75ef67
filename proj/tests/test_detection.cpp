#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qiopa/detection.hpp"
#include "qiopa/rng.hpp"

using namespace qiopa;

TEST_CASE("binomial thinning: shortcuts and mean at the operating point") {
    CounterRng rng({21, 0});
    CHECK(thin_binomial(12345, 0.0, rng) == 0);
    CHECK(thin_binomial(12345, 1.0, rng) == 12345);
    CHECK(thin_binomial(0, 0.5, rng) == 0);

    // detector-arm thinning at high gain: 6630 photons, 2% efficiency
    double sum = 0.0;
    const int draws = 50000;
    for (int k = 0; k < draws; ++k)
        sum += static_cast<double>(thin_binomial(6630, 0.02, rng));
    const double mean = sum / draws;
    const double sigma = std::sqrt(6630 * 0.02 * 0.98 / draws);
    CHECK(std::abs(mean - 132.6) < 4.0 * sigma);
}

TEST_CASE("noiseless photomultiplier response is the count itself") {
    CounterRng rng({21, 1});
    DetectionParams quiet;
    quiet.pm_noise = 0.0;
    CHECK(pm_response(7, quiet, rng) == 7.0);
    CHECK(pm_response(0, quiet, rng) == 0.0);
    DetectionParams noisy;
    noisy.pm_noise = 0.5;
    CHECK(pm_response(0, noisy, rng) == 0.0);
}

TEST_CASE("noisy photomultiplier response stays nonnegative and unbiased") {
    CounterRng rng({21, 2});
    DetectionParams params;
    params.pm_noise = 0.2;
    double sum = 0.0;
    const int draws = 200000;
    const double count = 100.0;
    for (int k = 0; k < draws; ++k) {
        const double v = pm_response(static_cast<std::int64_t>(count), params, rng);
        CHECK(v >= 0.0);
        sum += v;
    }
    // clipping at zero is negligible at sigma = 0.2 (5 sigma from the floor)
    CHECK(std::abs(sum / draws - count) < 4.0 * count * 0.2 / std::sqrt(draws));
}

TEST_CASE("difference filter: worked examples") {
    // (d+, d-) = (10, 2): difference 8
    CHECK(orthogonality_filter({10.0, 2.0}, 5.0) == OFOutcome::Plus);
    CHECK(orthogonality_filter({10.0, 2.0}, 8.0) == OFOutcome::Inconclusive); // not strictly above
    CHECK(orthogonality_filter({2.0, 10.0}, 5.0) == OFOutcome::Minus);
    CHECK(orthogonality_filter({7.0, 2.0}, 5.0) == OFOutcome::Inconclusive);  // exactly at threshold
    CHECK(orthogonality_filter({3.0, 3.0}, 0.0) == OFOutcome::Inconclusive);  // tie never passes
    CHECK(orthogonality_filter({3.0, 2.0}, 0.0) == OFOutcome::Plus);
}

TEST_CASE("difference filter symmetry") {
    CounterRng rng({8, 0});
    for (int k = 0; k < 1000; ++k) {
        const double a = rng.next_double() * 50.0;
        const double b = rng.next_double() * 50.0;
        const double thr = rng.next_double() * 20.0;
        const OFOutcome fwd = orthogonality_filter({a, b}, thr);
        const OFOutcome rev = orthogonality_filter({b, a}, thr);
        if (fwd == OFOutcome::Plus) CHECK(rev == OFOutcome::Minus);
        if (fwd == OFOutcome::Inconclusive) CHECK(rev == OFOutcome::Inconclusive);
    }
}

TEST_CASE("raising the threshold only removes conclusive events") {
    CounterRng rng({8, 1});
    for (int k = 0; k < 1000; ++k) {
        const double a = rng.next_double() * 50.0;
        const double b = rng.next_double() * 50.0;
        const OFOutcome lo = orthogonality_filter({a, b}, 3.0);
        const OFOutcome hi = orthogonality_filter({a, b}, 9.0);
        if (hi != OFOutcome::Inconclusive) CHECK(hi == lo);
        if (lo == OFOutcome::Inconclusive) CHECK(hi == OFOutcome::Inconclusive);
    }
}

TEST_CASE("ideal discriminators read the parity split") {
    // a plus-type occupation has odd count on its own mode
    CHECK(ideal_parity_discriminator({3, 2}) == OFOutcome::Plus);
    CHECK(ideal_parity_discriminator({1, 0}) == OFOutcome::Plus);
    CHECK(ideal_parity_discriminator({2, 3}) == OFOutcome::Minus);
    CHECK(ideal_parity_discriminator({0, 1}) == OFOutcome::Minus);

    CHECK(ideal_difference_discriminator({5, 2}) == OFOutcome::Plus);
    CHECK(ideal_difference_discriminator({2, 5}) == OFOutcome::Minus);
    CHECK(ideal_difference_discriminator({3, 3}) == OFOutcome::Inconclusive);
}

TEST_CASE("parameter validation") {
    DetectionParams p;
    p.eta_B = 0.02;
    p.eta_A = 1.0;
    p.pm_noise = 0.0;
    p.threshold = 10.0;
    CHECK_NOTHROW(p.validate());

    DetectionParams bad = p;
    bad.eta_B = 1.5;
    CHECK_THROWS(bad.validate());
    bad = p;
    bad.eta_B = -0.1;
    CHECK_THROWS(bad.validate());
    bad = p;
    bad.pm_noise = -1.0;
    CHECK_THROWS(bad.validate());
    bad = p;
    bad.threshold = -2.0;
    CHECK_THROWS(bad.validate());
}
