#include "cgdare/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

namespace cgdare {

namespace {

// z must stay away from the poles of (zI - A)^-1 and (z^-1 I - A^T)^-1
void check_pole_distance(const Matrix& A, Complex z, double margin) {
    const Eigen::EigenSolver<Matrix> es(A);
    const auto& lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (std::abs(z - lam(i)) < margin) {
            throw PoleTooClose("evaluation point too close to an eigenvalue of A");
        }
        if (std::abs(lam(i)) > 0.0 && std::abs(z - 1.0 / lam(i)) < margin) {
            throw PoleTooClose("evaluation point too close to a reciprocal eigenvalue of A");
        }
    }
    if (std::abs(z) < margin) {
        throw PoleTooClose("evaluation point too close to the origin");
    }
}

double pole_margin(const Matrix& A) {
    double rho = 0.0;
    if (A.size() > 0) {
        const Eigen::EigenSolver<Matrix> es(A);
        rho = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    return 1e-3 * std::max(1.0, rho);
}

// Phi evaluated through an arbitrary symmetric (n+m)x(n+m) middle matrix.
ComplexMatrix phi_through(const PopovTriple& sigma, const Matrix& middle, Complex z) {
    const Eigen::Index n = sigma.n();
    const Eigen::Index m = sigma.m();
    const ComplexMatrix A = sigma.A().cast<Complex>();
    const ComplexMatrix B = sigma.B().cast<Complex>();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);

    const ComplexMatrix right_top = (z * I - A).lu().solve(B);             // (zI - A)^-1 B
    // B^T (z^-1 I - A^T)^-1 = [(z^-1 I - A)^-1 B]^T
    const ComplexMatrix left_block = (I / z - A).lu().solve(B).transpose();

    ComplexMatrix left(m, n + m);
    left << left_block, ComplexMatrix::Identity(m, m);
    ComplexMatrix right(n + m, m);
    right << right_top, ComplexMatrix::Identity(m, m);
    return left * middle.cast<Complex>() * right;
}

}  // namespace

ComplexMatrix eval_phi(const PopovTriple& sigma, Complex z, const TolerancePolicy& tol) {
    (void)tol;
    check_pole_distance(sigma.A(), z, pole_margin(sigma.A()));
    return phi_through(sigma, sigma.popov_matrix(), z);
}

double phi_pix_identity_residual(const PopovTriple& sigma, const Matrix& X, Complex z,
                                 const TolerancePolicy& tol) {
    check_pole_distance(sigma.A(), z, pole_margin(sigma.A()));
    const XQuantities q = x_quantities(sigma, X, tol);
    const ComplexMatrix phi = phi_through(sigma, sigma.popov_matrix(), z);
    const ComplexMatrix phi_x = phi_through(sigma, q.Pi_X, z);
    return (phi - phi_x).norm();
}

Eigen::Index normal_rank_phi(const PopovTriple& sigma, const TolerancePolicy& tol,
                             int samples, unsigned seed) {
    if (samples < 8) throw std::invalid_argument("normal_rank_phi: need at least 8 samples");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> radius(0.7, 1.4);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    const double margin = pole_margin(sigma.A());

    Eigen::Index best = 0;
    int taken = 0;
    int attempts = 0;
    while (taken < samples && attempts < 100 * samples) {
        ++attempts;
        const Complex z = std::polar(radius(rng), angle(rng));
        try {
            check_pole_distance(sigma.A(), z, margin);
        } catch (const PoleTooClose&) {
            continue;
        }
        best = std::max(best, rank_svd(phi_through(sigma, sigma.popov_matrix(), z), tol));
        ++taken;
    }
    return best;
}

ComplexMatrix spectral_factor_eval(const PopovTriple& sigma, const Matrix& X, Complex z,
                                   const TolerancePolicy& tol) {
    check_pole_distance(sigma.A(), z, pole_margin(sigma.A()));
    const XQuantities q = x_quantities(sigma, X, tol);
    const Matrix R_half = psd_sqrt(q.R_X, tol);  // throws if R_X indefinite

    const Eigen::Index n = sigma.n();
    const ComplexMatrix A = sigma.A().cast<Complex>();
    const ComplexMatrix B = sigma.B().cast<Complex>();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    const ComplexMatrix resolvent = (z * I - A).lu().solve(B);
    const ComplexMatrix T =
        (pinv(q.R_X, tol) * q.S_X.transpose()).cast<Complex>() * resolvent +
        ComplexMatrix::Identity(sigma.m(), sigma.m());
    return R_half.cast<Complex>() * T;
}

RankComparison rank_rx_vs_normal_rank(const PopovTriple& sigma, const Matrix& X,
                                      const TolerancePolicy& tol, int samples, unsigned seed) {
    RankComparison cmp;
    const XQuantities q = x_quantities(sigma, X, tol);
    cmp.rank_rx = rank_svd(q.R_X, tol);
    cmp.normal_rank = normal_rank_phi(sigma, tol, samples, seed);
    cmp.classification = classify_solution(sigma, X, tol);
    switch (cmp.classification) {
        case SolutionClass::DARE:
        case SolutionClass::CGDARE:
            cmp.holds = (cmp.rank_rx == cmp.normal_rank);
            break;
        case SolutionClass::DRLMI_ONLY:
            cmp.holds = (cmp.rank_rx <= cmp.normal_rank);
            break;
        default:
            cmp.holds = false;
            break;
    }
    return cmp;
}

}  // namespace cgdare
