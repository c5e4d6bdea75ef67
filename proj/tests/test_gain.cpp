#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qiopa/gain.hpp"

using namespace qiopa;

TEST_CASE("derived constants at reference gains") {
    // frozen against independent high-precision evaluation of cosh/tanh/sinh
    const GainParams g16 = make_gain(1.6);
    CHECK(g16.C == doctest::Approx(2.577464471194885).epsilon(1e-15));
    CHECK(g16.Gamma == doctest::Approx(0.9216685544064713).epsilon(1e-15));
    CHECK(g16.mbar == doctest::Approx(5.643323100271929).epsilon(1e-15));

    const GainParams g10 = make_gain(1.0);
    CHECK(g10.C == doctest::Approx(1.5430806348152437).epsilon(1e-15));
    CHECK(g10.mbar == doctest::Approx(1.3810978455418157).epsilon(1e-15));

    const GainParams g05 = make_gain(0.5);
    CHECK(g05.mbar == doctest::Approx(0.2715403174076219).epsilon(1e-15));

    const GainParams g44 = make_gain(4.4);
    CHECK(g44.mbar == doctest::Approx(1658.0610392527401).epsilon(1e-14));

    const GainParams g60 = make_gain(6.0);
    CHECK(g60.mbar == doctest::Approx(40688.19785628703).epsilon(1e-14));
}

TEST_CASE("log_C stays exact at gains where cosh overflows naive evaluation") {
    for (double g : {0.3, 1.0, 5.0, 20.0, 300.0}) {
        const GainParams p = make_gain(g);
        // direct identity: log cosh g = g + log1p(e^{-2g}) - log 2
        const double ref = g + std::log1p(std::exp(-2.0 * g)) - std::log(2.0);
        CHECK(p.log_C == doctest::Approx(ref).epsilon(1e-15));
    }
    CHECK(std::isfinite(make_gain(500.0).log_C));
}

TEST_CASE("zero gain is the identity channel") {
    const GainParams p = make_gain(0.0);
    CHECK(p.C == 1.0);
    CHECK(p.Gamma == 0.0);
    CHECK(p.mbar == 0.0);
    CHECK(p.log_C == 0.0);
}

TEST_CASE("invalid gains are rejected") {
    CHECK_THROWS_AS(make_gain(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_gain(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(make_gain(INFINITY), std::invalid_argument);
}
