#include "qiopa/concurrence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace qiopa {

namespace {

using Mat4 = Eigen::Matrix4cd;

Mat4 to_eigen(const TwoQubitDensityMatrix& rho) {
    Mat4 m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = rho.at(r, c);
    return m;
}

TwoQubitDensityMatrix from_eigen(const Mat4& m) {
    TwoQubitDensityMatrix rho;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) rho.at(r, c) = m(r, c);
    return rho;
}

// Bell basis vectors in HV x HV ordering (HH, HV, VH, VV). The ansatz
// (1/4)(I + sum t_i sigma_i x sigma_i) is diagonal in this basis with
// eigenvalue (1 + t1 c1 + t2 c2 + t3 c3)/4, c the correlation signs below.
struct BellVector {
    std::array<std::complex<double>, 4> v;
    double c1, c2, c3;
};

const std::array<BellVector, 4>& bell_basis() {
    static const double r = 1.0 / std::sqrt(2.0);
    static const std::array<BellVector, 4> basis = {{
        {{r, 0, 0, r}, 1.0, -1.0, 1.0},    // (HH + VV)/sqrt2
        {{r, 0, 0, -r}, -1.0, 1.0, 1.0},   // (HH - VV)/sqrt2
        {{0, r, r, 0}, 1.0, 1.0, -1.0},    // (HV + VH)/sqrt2
        {{0, r, -r, 0}, -1.0, -1.0, -1.0}, // (HV - VH)/sqrt2, the singlet
    }};
    return basis;
}

std::array<double, 4> ansatz_eigenvalues(double t1, double t2, double t3) {
    std::array<double, 4> ev;
    const auto& basis = bell_basis();
    for (int k = 0; k < 4; ++k)
        ev[k] = 0.25 * (1.0 + t1 * basis[k].c1 + t2 * basis[k].c2 + t3 * basis[k].c3);
    return ev;
}

TwoQubitDensityMatrix assemble(const std::array<double, 4>& ev) {
    Mat4 m = Mat4::Zero();
    const auto& basis = bell_basis();
    for (int k = 0; k < 4; ++k) {
        Eigen::Vector4cd b;
        for (int r = 0; r < 4; ++r) b(r) = basis[k].v[r];
        m += ev[k] * (b * b.adjoint());
    }
    return from_eigen(m);
}

// Euclidean projection of a vector onto the probability simplex.
std::array<double, 4> project_simplex(std::array<double, 4> v) {
    std::array<double, 4> s = v;
    std::sort(s.begin(), s.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    int rho_idx = 0;
    for (int k = 0; k < 4; ++k) {
        cum += s[k];
        const double t = (cum - 1.0) / (k + 1);
        if (s[k] - t > 0.0) {
            rho_idx = k;
            theta = t;
        }
    }
    (void)rho_idx;
    for (auto& x : v) x = std::max(0.0, x - theta);
    return v;
}

} // namespace

TwoQubitDensityMatrix bell_diagonal_state(double v1, double v2, double v3) {
    for (double v : {v1, v2, v3})
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("visibilities must be in [0, 1]");
    const auto ev = ansatz_eigenvalues(-v1, -v2, -v3);
    const double min_ev = *std::min_element(ev.begin(), ev.end());
    if (min_ev < -1e-10) {
        std::ostringstream msg;
        msg << "visibilities (" << v1 << ", " << v2 << ", " << v3
            << ") give a non-positive ansatz; eigenvalues:";
        for (double e : ev) msg << ' ' << e;
        throw std::domain_error(msg.str());
    }
    return assemble(ev);
}

BellDiagonalReport bell_diagonal_report(double v1, double v2, double v3) {
    for (double v : {v1, v2, v3})
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("visibilities must be in [0, 1]");
    BellDiagonalReport rep;
    auto ev = ansatz_eigenvalues(-v1, -v2, -v3);
    rep.feasible = *std::min_element(ev.begin(), ev.end()) >= -1e-10;
    {
        auto sorted = ev;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        rep.eigenvalues = sorted;
    }
    const auto proj = rep.feasible ? ev : project_simplex(ev);
    rep.projected = assemble(proj);
    rep.concurrence_projected = wootters_concurrence(rep.projected);
    return rep;
}

double wootters_concurrence(const TwoQubitDensityMatrix& rho) {
    validate_density_matrix(rho);
    Mat4 r = to_eigen(rho);
    Mat4 yy = Mat4::Zero();
    // sigma_y x sigma_y is the anti-diagonal (-1, 1, 1, -1)
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Mat4 m = r * yy * r.conjugate() * yy;
    // m is similar to a positive matrix; eigenvalues are real nonnegative up
    // to rounding, but come from a general (non-Hermitian) solver
    Eigen::ComplexEigenSolver<Mat4> solver(m, /*computeEigenvectors=*/false);
    std::array<double, 4> lambda{};
    for (int k = 0; k < 4; ++k)
        lambda[k] = std::sqrt(std::max(0.0, solver.eigenvalues()(k).real()));
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

void validate_density_matrix(const TwoQubitDensityMatrix& rho) {
    const Mat4 m = to_eigen(rho);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::domain_error("density matrix is not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > 1e-12 || std::abs(m.trace().imag()) > 1e-12)
        throw std::domain_error("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Mat4> solver(m, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
        throw std::domain_error("density matrix has a negative eigenvalue: "
                                + std::to_string(solver.eigenvalues().minCoeff()));
}

} // namespace qiopa
