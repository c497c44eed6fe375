#pragma once

#include <random>

#include <Eigen/Eigenvalues>

#include "cgdare/popov.hpp"

// Shared fixtures and seeded generators for the test suites.

namespace cgdare::testing {

inline Matrix random_matrix(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols,
                            double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = gauss(rng);
    }
    return M;
}

inline Matrix random_symmetric(std::mt19937& rng, Eigen::Index n, double scale = 1.0) {
    return symmetrize(random_matrix(rng, n, n, scale));
}

inline Matrix random_psd(std::mt19937& rng, Eigen::Index n, Eigen::Index factor_rows = -1) {
    if (factor_rows < 0) factor_rows = n;
    const Matrix F = random_matrix(rng, factor_rows, n);
    return symmetrize(F.transpose() * F);
}

// spectral radius scaled below rho
inline Matrix random_stable(std::mt19937& rng, Eigen::Index n, double rho = 0.9) {
    Matrix A = random_matrix(rng, n, n);
    const Eigen::EigenSolver<Matrix> es(A);
    const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
    if (radius > 0.0) A *= rho / radius;
    return A;
}

// worked stabilisation example: A=[[1,1],[0,1]], B=[[2,0],[1,1]],
// Q=diag(0,1), R=0, S=0; unique CGDARE solution diag(0,1)
inline PopovTriple example_triple(const TolerancePolicy& tol = {}) {
    Matrix A(2, 2), B(2, 2), Q(2, 2), R(2, 2), S(2, 2);
    A << 1, 1, 0, 1;
    B << 2, 0, 1, 1;
    Q << 0, 0, 0, 1;
    R.setZero();
    S.setZero();
    return PopovTriple(A, B, Q, R, S, tol);
}

inline Matrix example_solution() {
    Matrix X(2, 2);
    X << 0, 0, 0, 1;
    return X;
}

// the GDARE-but-not-CGDARE counterexample with explicit output factor
inline PopovTriple gdare_only_triple(const TolerancePolicy& tol = {}) {
    Matrix A(2, 2), B(2, 2), C(1, 2), D(1, 2);
    A << -1, 0, -5, -6;
    B << -4, 0, 0, -2;
    C << 0, 1;
    D << 4, 0;
    PopovTriple sigma(A, B, C.transpose() * C, D.transpose() * D, C.transpose() * D, tol);
    sigma.set_output_factor(C, D, tol);
    return sigma;
}

inline Matrix gdare_only_solution() {
    Matrix X(2, 2);
    X << -1, 0, 0, 1;
    return X;
}

// a random well-posed triple with nonsingular R, PSD Pi
inline PopovTriple random_regular_triple(std::mt19937& rng, Eigen::Index n, Eigen::Index m,
                                         const TolerancePolicy& tol = {}) {
    const Matrix A = random_stable(rng, n, 0.8);
    const Matrix B = random_matrix(rng, n, m);
    const Matrix C = random_matrix(rng, n + m, n);
    const Matrix D = random_matrix(rng, n + m, m) +
                     Matrix::Identity(n + m, m);  // keeps R = D^T D nonsingular
    return PopovTriple(A, B, symmetrize(C.transpose() * C), symmetrize(D.transpose() * D),
                       C.transpose() * D, tol);
}

}  // namespace cgdare::testing
