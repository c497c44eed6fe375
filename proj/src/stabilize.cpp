#include "cgdare/stabilize.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace cgdare {

namespace {

using ComplexVec = std::vector<std::complex<double>>;

// real monic polynomial coefficients (ascending, without the leading 1) from
// a conjugate-closed root multiset
std::vector<double> real_char_poly(const ComplexVec& roots) {
    std::vector<std::complex<double>> coeffs{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(coeffs.size() + 1, 0.0);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            next[i + 1] += coeffs[i];
            next[i] -= r * coeffs[i];
        }
        coeffs = std::move(next);
    }
    std::vector<double> real_coeffs(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) real_coeffs[i] = coeffs[i].real();
    return real_coeffs;  // ascending: c0 + c1 z + ... + z^k
}

void check_conjugate_closed(const ComplexVec& desired) {
    ComplexVec pool = desired;
    while (!pool.empty()) {
        const auto r = pool.back();
        pool.pop_back();
        if (std::abs(r.imag()) <= 1e-12) continue;
        auto it = std::find_if(pool.begin(), pool.end(), [&](const std::complex<double>& s) {
            return std::abs(s - std::conj(r)) <= 1e-9 * (1.0 + std::abs(r));
        });
        if (it == pool.end()) {
            throw ConjugationViolation("desired pole set is not closed under conjugation");
        }
        pool.erase(it);
    }
}

// p(A) for a monic polynomial given by ascending coefficients (c.back()==1)
Matrix poly_eval(const Matrix& A, const std::vector<double>& c) {
    const Eigen::Index k = A.rows();
    Matrix result = Matrix::Zero(k, k);
    Matrix power = Matrix::Identity(k, k);
    for (size_t i = 0; i < c.size(); ++i) {
        result += c[i] * power;
        if (i + 1 < c.size()) power = A * power;
    }
    return result;
}

bool single_input_controllable(const Matrix& A, const Vector& b, const TolerancePolicy& tol) {
    const Eigen::Index k = A.rows();
    Matrix ctrb(k, k);
    Vector col = b;
    for (Eigen::Index i = 0; i < k; ++i) {
        ctrb.col(i) = col;
        col = A * col;
    }
    return rank_svd(ctrb, tol) == k;
}

// Ackermann gain f (1 x k) with spectrum(A + b f) = roots of the monic
// polynomial given by coeffs.
Eigen::RowVectorXd ackermann(const Matrix& A, const Vector& b, const std::vector<double>& coeffs) {
    const Eigen::Index k = A.rows();
    Matrix ctrb(k, k);
    Vector col = b;
    for (Eigen::Index i = 0; i < k; ++i) {
        ctrb.col(i) = col;
        col = A * col;
    }
    const Matrix pA = poly_eval(A, coeffs);
    Eigen::RowVectorXd ek = Eigen::RowVectorXd::Zero(k);
    ek(k - 1) = 1.0;
    return -(ek * ctrb.fullPivLu().solve(pA));
}

}  // namespace

std::vector<std::complex<double>> fixed_spectrum(const PopovTriple& sigma, const Matrix& X,
                                                 const TolerancePolicy& tol) {
    const XQuantities q = x_quantities(sigma, X, tol);
    const Subspace R0 = reachable_subspace(q.A_X, sigma.B() * q.G_X, tol);
    const Matrix restricted = restriction(q.A_X, R0, tol);
    std::vector<std::complex<double>> spectrum;
    if (restricted.size() == 0) return spectrum;
    const Eigen::EigenSolver<Matrix> es(restricted);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        spectrum.push_back(es.eigenvalues()(i));
    }
    return spectrum;
}

StabilizationResult place_on_r0(const PopovTriple& sigma, const Matrix& X,
                                const std::vector<std::complex<double>>& desired,
                                const TolerancePolicy& tol, unsigned seed) {
    const XQuantities q = x_quantities(sigma, X, tol);
    const Matrix BG = sigma.B() * q.G_X;
    const KalmanForm form = controllability_form(q.A_X, BG, tol);
    const Eigen::Index k = form.k;
    const Eigen::Index m = sigma.m();
    const Eigen::Index n = sigma.n();

    if (static_cast<Eigen::Index>(desired.size()) != k) {
        throw DesiredSetSizeMismatch("place_on_r0: desired pole count must equal dim R0");
    }
    check_conjugate_closed(desired);

    StabilizationResult result;
    result.placed_poles = desired;
    if (k == 0) {
        result.L = Matrix::Zero(m, n);
        result.A_cl = q.A_X;
        result.fixed_poles_removed = false;
        return result;
    }

    const std::vector<double> coeffs = real_char_poly(desired);

    // reduce the multi-input controllable block (A11, B1) to a cyclic
    // single-input pair via a seeded random input combination, with a random
    // preliminary feedback when the first draws are unlucky
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix M1;  // m x k block gain in Kalman coordinates
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
        Vector w(m);
        for (Eigen::Index i = 0; i < m; ++i) w(i) = gauss(rng);
        Matrix F0 = Matrix::Zero(m, k);
        if (attempt >= 4) {
            for (Eigen::Index i = 0; i < m; ++i) {
                for (Eigen::Index j = 0; j < k; ++j) F0(i, j) = gauss(rng);
            }
        }
        const Matrix A_pre = form.A11 + form.B1 * F0;
        const Vector b = form.B1 * w;
        if (!single_input_controllable(A_pre, b, tol)) continue;
        const Eigen::RowVectorXd f = ackermann(A_pre, b, coeffs);
        M1 = F0 + w * f;
        placed = true;
    }
    if (!placed) {
        throw std::runtime_error("place_on_r0: failed to reduce to a cyclic single-input pair");
    }

    // back to original coordinates, zero on the off-R0 columns
    const Matrix T1 = form.T.leftCols(k);
    result.L = M1 * T1.transpose();
    result.A_cl = q.A_X + BG * result.L;

    const auto fixed = fixed_spectrum(sigma, X, tol);
    result.fixed_poles_removed = false;
    ComplexVec pool = desired;
    for (const auto& lam : fixed) {
        auto it = std::find_if(pool.begin(), pool.end(), [&](const std::complex<double>& s) {
            return std::abs(s - lam) <= 1e-6 * (1.0 + std::abs(lam));
        });
        if (it == pool.end()) {
            result.fixed_poles_removed = true;
            break;
        }
        pool.erase(it);
    }
    return result;
}

double cost_invariance_residual(const PopovTriple& sigma, const Matrix& X, const Matrix& L,
                                const Vector& x0, int T, const TolerancePolicy& tol) {
    const XQuantities q = x_quantities(sigma, X, tol);
    if (T <= 0) {
        const Matrix A_full = q.A_X + sigma.B() * q.G_X * L;
        const Eigen::EigenSolver<Matrix> es(A_full);
        const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
        if (rho >= 1.0 - 1e-9) {
            throw DivergentTrajectory(
                "cost_invariance_residual: closed loop not stable, supply a horizon");
        }
        // horizon long enough for the trajectory tail to drop below 1e-8
        const double target = 1e-8 / (1.0 + x0.norm());
        T = static_cast<int>(std::ceil(std::log(target) / std::log(std::max(rho, 1e-6))));
        T = std::clamp(T, 10, 100000);
    }
    const double simulated = simulate_cost(sigma, q.K_X, q.G_X, L, x0, T);
    return std::abs(simulated - optimal_cost(X, x0));
}

}  // namespace cgdare
