#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "qiopa/concurrence.hpp"

using namespace qiopa;

namespace {

TwoQubitDensityMatrix singlet() {
    TwoQubitDensityMatrix rho;
    rho.at(1, 1) = 0.5;
    rho.at(2, 2) = 0.5;
    rho.at(1, 2) = -0.5;
    rho.at(2, 1) = -0.5;
    return rho;
}

TwoQubitDensityMatrix werner(double p) {
    TwoQubitDensityMatrix rho = singlet();
    for (auto& x : rho.m) x *= p;
    for (int d = 0; d < 4; ++d) rho.at(d, d) += (1.0 - p) / 4.0;
    return rho;
}

} // namespace

TEST_CASE("concurrence of reference states") {
    CHECK(wootters_concurrence(singlet()) == doctest::Approx(1.0).epsilon(1e-9));

    TwoQubitDensityMatrix product;
    product.at(0, 0) = 1.0;
    CHECK(wootters_concurrence(product) == doctest::Approx(0.0).epsilon(1e-9));

    // mixed family: max(0, (3p - 1)/2)
    for (double p : {0.0, 0.4, 0.8, 1.0}) {
        CAPTURE(p);
        const double want = std::max(0.0, (3.0 * p - 1.0) / 2.0);
        CHECK(std::abs(wootters_concurrence(werner(p)) - want) < 1e-9);
    }
}

TEST_CASE("anticorrelation ansatz: feasible case") {
    const TwoQubitDensityMatrix rho = bell_diagonal_state(0.0, 0.3, 0.3);
    validate_density_matrix(rho);
    // eigenvalues 0.4, 0.25, 0.25, 0.1; largest below 1/2 means no entanglement
    CHECK(wootters_concurrence(rho) == doctest::Approx(0.0).epsilon(1e-9));

    const BellDiagonalReport rep = bell_diagonal_report(0.0, 0.3, 0.3);
    CHECK(rep.feasible);
    CHECK(rep.eigenvalues[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(rep.eigenvalues[3] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rep.concurrence_projected == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("anticorrelation ansatz: entangled and infeasible regimes") {
    // V2 + V3 > 1 makes the ansatz negative; the strict constructor refuses
    try {
        bell_diagonal_state(0.0, 0.540, 0.55);
        FAIL("expected a domain_error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("-0.0225") != std::string::npos);
    }

    const BellDiagonalReport rep = bell_diagonal_report(0.0, 0.540, 0.55);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.eigenvalues[0] == doctest::Approx(0.5225).epsilon(1e-12));
    CHECK(rep.eigenvalues[3] == doctest::Approx(-0.0225).epsilon(1e-12));
    // nearest valid spectrum: (0.515, 0.245, 0.24, 0)
    validate_density_matrix(rep.projected);
    CHECK(rep.concurrence_projected == doctest::Approx(0.03).epsilon(1e-9));
    CHECK(wootters_concurrence(rep.projected)
          == doctest::Approx(rep.concurrence_projected).epsilon(1e-9));
}

TEST_CASE("high-visibility pair pins a strongly entangled nearest state") {
    const BellDiagonalReport rep = bell_diagonal_report(0.0, 0.94, 0.94);
    CHECK_FALSE(rep.feasible); // 0.94 + 0.94 > 1
    CHECK(rep.concurrence_projected > 0.2);
    CHECK(rep.concurrence_projected <= 1.0);
    validate_density_matrix(rep.projected);
}

TEST_CASE("visibility inputs are range-checked") {
    CHECK_THROWS_AS(bell_diagonal_state(-0.1, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bell_diagonal_state(0.0, 1.2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bell_diagonal_report(0.0, 0.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("density-matrix validation rejects malformed inputs") {
    TwoQubitDensityMatrix skew = singlet();
    skew.at(1, 2) = 0.4; // breaks hermiticity against at(2, 1) = -0.5
    CHECK_THROWS_AS(validate_density_matrix(skew), std::domain_error);

    TwoQubitDensityMatrix scaled = singlet();
    for (auto& x : scaled.m) x *= 1.01;
    CHECK_THROWS_AS(validate_density_matrix(scaled), std::domain_error);

    TwoQubitDensityMatrix negative;
    negative.at(0, 0) = 1.2;
    negative.at(1, 1) = -0.2;
    CHECK_THROWS_AS(validate_density_matrix(negative), std::domain_error);

    CHECK_THROWS_AS(wootters_concurrence(negative), std::domain_error);
}
