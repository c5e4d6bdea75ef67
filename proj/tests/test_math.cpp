#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qiopa/math_util.hpp"

using namespace qiopa;

TEST_CASE("log_factorial matches exact products for small arguments") {
    double acc = 0.0;
    for (int n = 1; n <= 170; ++n) {
        acc += std::log(static_cast<double>(n));
        CHECK(log_factorial(n) == doctest::Approx(acc).epsilon(1e-13));
    }
    CHECK(log_factorial(0) == 0.0);
}

TEST_CASE("log_factorial agrees with lgamma beyond the table") {
    for (std::int64_t n : {100000L, 1000000L, 50000000L}) {
        const double ref = std::lgamma(static_cast<double>(n) + 1.0);
        CHECK(log_factorial(n) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("log_binomial reproduces Pascal rows") {
    CHECK(std::exp(log_binomial(6, 3)) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(std::exp(log_binomial(10, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(log_binomial(52, 5)) == doctest::Approx(2598960.0).epsilon(1e-11));
    // central coefficient growth, used by the occupation marginals
    CHECK(log_binomial(2000, 1000) ==
          doctest::Approx(std::lgamma(2001.0) - 2.0 * std::lgamma(1001.0)).epsilon(1e-12));
}

TEST_CASE("wrap_phase lands in [0, 2pi)") {
    const double tau = 2.0 * M_PI;
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(tau) == doctest::Approx(0.0));
    CHECK(wrap_phase(-1e-9) < tau);
    CHECK(wrap_phase(-1e-9) >= 0.0);
    CHECK(wrap_phase(7.0 * tau + 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wrap_phase(-3.0) == doctest::Approx(tau - 3.0).epsilon(1e-12));
    for (double x : {-100.0, -0.5, 0.25, 9999.0}) {
        const double w = wrap_phase(x);
        CHECK(w >= 0.0);
        CHECK(w < tau);
        CHECK(std::remainder(w - x, tau) == doctest::Approx(0.0).epsilon(1e-9));
    }
}
