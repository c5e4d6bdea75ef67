#pragma once

#include <array>
#include <complex>

namespace qiopa {

// Row-major 4x4 density matrix in the computational (HV x HV) basis. Kept as
// a plain array so the linear-algebra backend stays an implementation detail.
struct TwoQubitDensityMatrix {
    std::array<std::complex<double>, 16> m{};

    std::complex<double>& at(int r, int c) { return m[4 * r + c]; }
    const std::complex<double>& at(int r, int c) const { return m[4 * r + c]; }
};

// Diagnostics for the Bell-diagonal reconstruction from measured visibilities.
struct BellDiagonalReport {
    std::array<double, 4> eigenvalues{}; // of the ansatz, descending
    bool feasible = false;               // all eigenvalues >= -1e-10
    // nearest density matrix within the Bell-diagonal family (eigenvalues
    // projected onto the probability simplex); equals the ansatz when feasible
    TwoQubitDensityMatrix projected;
    double concurrence_projected = 0.0;
};

// rho = (1/4)(I + sum_i t_i sigma_i x sigma_i) with t_i = -v_i, the
// singlet-type anticorrelation ansatz. Throws std::domain_error when the
// visibilities imply a negative eigenvalue (reported in the message); use
// bell_diagonal_report to handle that case gracefully.
TwoQubitDensityMatrix bell_diagonal_state(double v1, double v2, double v3);

BellDiagonalReport bell_diagonal_report(double v1, double v2, double v3);

// Wootters concurrence: C = max(0, l1 - l2 - l3 - l4), l's the decreasing
// square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
double wootters_concurrence(const TwoQubitDensityMatrix& rho);

// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity (1e-10);
// throws std::domain_error with details otherwise.
void validate_density_matrix(const TwoQubitDensityMatrix& rho);

} // namespace qiopa
