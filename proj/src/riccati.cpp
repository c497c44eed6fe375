#include "cgdare/riccati.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace cgdare {

namespace {

// pseudo-inverse with the rank forced, used when the kernel chain of the
// iteration has gone stationary and the caller asked to freeze it
Matrix pinv_fixed_rank(const Matrix& M, Eigen::Index rank) {
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Vector inv = Vector::Zero(sv.size());
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(rank, sv.size()); ++i) {
        if (sv(i) > 0.0) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Matrix step_with_pinv(const PopovTriple& sigma, const Matrix& P, const Matrix& Rp) {
    const Matrix SP = sigma.A().transpose() * P * sigma.B() + sigma.S();
    return symmetrize(sigma.A().transpose() * P * sigma.A() -
                      SP * Rp * SP.transpose() + sigma.Q());
}

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::Diverged: return "Diverged";
        case SolveStatus::MaxIterReached: return "MaxIterReached";
    }
    return "MaxIterReached";
}

Matrix riccati_step(const PopovTriple& sigma, const Matrix& P, const TolerancePolicy& tol) {
    if (P.rows() != sigma.n() || P.cols() != sigma.n()) {
        throw DimensionMismatch("riccati_step: P must be n x n");
    }
    const Matrix RP = symmetrize(sigma.R() + sigma.B().transpose() * P * sigma.B());
    return step_with_pinv(sigma, symmetrize(P), pinv(RP, tol));
}

SolveReport solve_min_psd(const PopovTriple& sigma, const TolerancePolicy& tol,
                          const SolveOptions& opts) {
    tol.validate();
    const Eigen::Index n = sigma.n();
    const double pi_norm = sigma.popov_matrix().norm();
    const double divergence_cap = 1e12 * (1.0 + pi_norm);

    SolveReport report;
    Matrix X = Matrix::Zero(n, n);
    Eigen::Index prev_kernel_dim = -1;
    int stationary_run = 0;
    Eigen::Index frozen_rank = -1;
    int consecutive_small = 0;

    for (int t = 0; t < tol.max_iter; ++t) {
        const Matrix RX = symmetrize(sigma.R() + sigma.B().transpose() * X * sigma.B());
        Eigen::Index rank = rank_svd(RX, tol);
        const Eigen::Index kernel_dim = sigma.m() - rank;

        if (kernel_dim == prev_kernel_dim) {
            ++stationary_run;
        } else {
            stationary_run = 0;
            report.kernel_stationary_at = t;
        }
        prev_kernel_dim = kernel_dim;
        if (opts.freeze_rank_after_stationary) {
            if (frozen_rank >= 0) {
                rank = frozen_rank;
            } else if (stationary_run >= 3) {
                frozen_rank = rank;
            }
        }

        const Matrix Rp = frozen_rank >= 0 ? pinv_fixed_rank(RX, frozen_rank) : pinv(RX, tol);
        const Matrix X_next = step_with_pinv(sigma, X, Rp);

        const double delta = (X_next - X).norm();
        report.min_monotonicity_gap =
            std::min(report.min_monotonicity_gap, min_eigenvalue_sym(X_next - X));
        if (opts.keep_trace) report.trace.push_back(delta);
        report.iterations = t + 1;

        if (!X_next.allFinite() || X_next.norm() > divergence_cap) {
            report.X_bar = X_next;
            report.status = SolveStatus::Diverged;
            return report;
        }

        if (delta <= tol.conv_rel * (1.0 + X.norm())) {
            ++consecutive_small;
        } else {
            consecutive_small = 0;
        }
        X = X_next;

        if (consecutive_small >= 3) {
            report.X_bar = X;
            report.status = SolveStatus::Converged;
            report.classification = classify_solution(sigma, X, tol);
            return report;
        }
    }

    report.X_bar = X;
    report.status = SolveStatus::MaxIterReached;
    return report;
}

double optimal_cost(const Matrix& X_bar, const Vector& x0) {
    if (x0.size() != X_bar.rows()) {
        throw DimensionMismatch("optimal_cost: x0 size does not match X");
    }
    return x0.dot(X_bar * x0);
}

std::pair<Matrix, Matrix> optimal_control_set(const PopovTriple& sigma, const Matrix& X_bar,
                                              const TolerancePolicy& tol) {
    const XQuantities q = x_quantities(sigma, X_bar, tol);
    return {q.K_X, q.G_X};
}

double simulate_cost(const PopovTriple& sigma, const Matrix& K, const Matrix& G,
                     const Matrix& L, const Vector& x0, int T) {
    if (T < 1) throw std::invalid_argument("simulate_cost: horizon must be >= 1");
    if (K.rows() != sigma.m() || K.cols() != sigma.n() ||
        G.rows() != sigma.m() || G.cols() != sigma.m() ||
        L.rows() != sigma.m() || L.cols() != sigma.n() || x0.size() != sigma.n()) {
        throw DimensionMismatch("simulate_cost: gain/state dimensions inconsistent");
    }
    const Matrix Pi = sigma.popov_matrix();
    Vector x = x0;
    double cost = 0.0;
    for (int t = 0; t < T; ++t) {
        const Vector u = -K * x + G * L * x;
        Vector xu(sigma.n() + sigma.m());
        xu << x, u;
        cost += xu.dot(Pi * xu);
        x = sigma.A() * x + sigma.B() * u;
        if (!x.allFinite() || x.norm() > 1e12) {
            throw DivergentTrajectory("simulate_cost: state norm exceeded 1e12");
        }
    }
    return cost;
}

}  // namespace cgdare
