#include "cgdare/popov.hpp"

#include <cmath>

namespace cgdare {

namespace {

void check_symmetric_input(const Matrix& X, Eigen::Index n, const char* who) {
    if (X.rows() != n || X.cols() != n) {
        throw DimensionMismatch(std::string(who) + ": X must be n x n");
    }
    if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + X.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument(std::string(who) + ": X must be symmetric");
    }
}

bool residual_is_zero(const Matrix& residual, const Matrix& X, const TolerancePolicy& tol) {
    return residual.norm() <= tol.conv_rel * (1.0 + X.norm());
}

}  // namespace

PopovTriple::PopovTriple(Matrix A, Matrix B, Matrix Q, Matrix R, Matrix S,
                         const TolerancePolicy& tol)
    : A_(std::move(A)), B_(std::move(B)), Q_(std::move(Q)), R_(std::move(R)), S_(std::move(S)) {
    tol.validate();
    const Eigen::Index n = A_.rows();
    const Eigen::Index m = B_.cols();
    if (A_.cols() != n || B_.rows() != n || Q_.rows() != n || Q_.cols() != n ||
        R_.rows() != m || R_.cols() != m || S_.rows() != n || S_.cols() != m) {
        throw DimensionMismatch("PopovTriple: inconsistent dimensions");
    }
    const Matrix Pi = popov_matrix();
    const double scale = std::max(Pi.cwiseAbs().maxCoeff(), 1e-300);
    if ((Pi - Pi.transpose()).cwiseAbs().maxCoeff() > tol.psd_clip * (1.0 + scale)) {
        throw std::invalid_argument("PopovTriple: Popov matrix not symmetric (Q or R asymmetric)");
    }
    const double lam_min = min_eigenvalue_sym(Pi);
    if (lam_min < -tol.psd_clip * scale) {
        throw NotPositiveSemidefinite("Popov matrix not positive semidefinite", lam_min);
    }
    const Matrix F = psd_factor(Pi, tol);
    C_ = F.leftCols(n);
    D_ = F.rightCols(m);
}

Matrix PopovTriple::popov_matrix() const {
    const Eigen::Index n = A_.rows();
    const Eigen::Index m = B_.cols();
    Matrix Pi(n + m, n + m);
    Pi << Q_, S_, S_.transpose(), R_;
    return Pi;
}

void PopovTriple::set_output_factor(Matrix C, Matrix D, const TolerancePolicy& tol) {
    if (C.cols() != n() || D.cols() != m() || C.rows() != D.rows()) {
        throw DimensionMismatch("set_output_factor: C/D dimensions inconsistent");
    }
    const double scale = 1.0 + popov_matrix().cwiseAbs().maxCoeff();
    const double err = std::max({(C.transpose() * C - Q_).cwiseAbs().maxCoeff(),
                                 (C.transpose() * D - S_).cwiseAbs().maxCoeff(),
                                 (D.transpose() * D - R_).cwiseAbs().maxCoeff()});
    if (err > 1e-6 * scale) {
        throw std::invalid_argument("set_output_factor: C,D do not factor the Popov matrix");
    }
    (void)tol;
    C_ = std::move(C);
    D_ = std::move(D);
}

const char* to_string(SolutionClass c) {
    switch (c) {
        case SolutionClass::DARE: return "DARE";
        case SolutionClass::CGDARE: return "CGDARE";
        case SolutionClass::GDARE_ONLY: return "GDARE_ONLY";
        case SolutionClass::DRLMI_ONLY: return "DRLMI_ONLY";
        case SolutionClass::NONE: return "NONE";
    }
    return "NONE";
}

PopovTriple validate_triple(const Matrix& A, const Matrix& B, const Matrix& Q,
                            const Matrix& R, const Matrix& S,
                            const TolerancePolicy& tol) {
    return PopovTriple(A, B, Q, R, S, tol);
}

XQuantities x_quantities(const PopovTriple& sigma, const Matrix& X,
                         const TolerancePolicy& tol) {
    const Eigen::Index n = sigma.n();
    const Eigen::Index m = sigma.m();
    check_symmetric_input(X, n, "x_quantities");

    XQuantities q;
    q.X = symmetrize(X);
    q.Q_X = symmetrize(sigma.Q() + sigma.A().transpose() * q.X * sigma.A() - q.X);
    q.S_X = sigma.A().transpose() * q.X * sigma.B() + sigma.S();
    q.R_X = symmetrize(sigma.R() + sigma.B().transpose() * q.X * sigma.B());
    const Matrix Rp = pinv(q.R_X, tol);
    // exact projector onto ker R_X; I - R_X^+ R_X would leave rounding noise
    // that later rank decisions misread as a full-rank matrix
    const Subspace ker_rx = kernel_basis(q.R_X, tol);
    q.G_X = ker_rx.dim() > 0 ? Matrix(ker_rx.basis() * ker_rx.basis().transpose())
                             : Matrix(Matrix::Zero(m, m));
    q.K_X = Rp * q.S_X.transpose();
    q.A_X = sigma.A() - sigma.B() * q.K_X;
    q.Pi_X.resize(n + m, n + m);
    q.Pi_X << q.Q_X, q.S_X, q.S_X.transpose(), q.R_X;
    q.C_X = sigma.C() - sigma.D() * q.K_X;
    Matrix left(n, n + m);
    left << Matrix::Identity(n, n), -q.S_X * Rp;
    q.Q0_X = symmetrize(left * sigma.popov_matrix() * left.transpose());
    return q;
}

Matrix gdare_residual(const PopovTriple& sigma, const Matrix& X,
                      const TolerancePolicy& tol) {
    const XQuantities q = x_quantities(sigma, X, tol);
    // R[X] - X = Q_X - S_X R_X^+ S_X^T
    return symmetrize(q.Q_X - q.S_X * pinv(q.R_X, tol) * q.S_X.transpose());
}

bool kernel_condition_holds(const PopovTriple& sigma, const Matrix& X,
                            const TolerancePolicy& tol) {
    const XQuantities q = x_quantities(sigma, X, tol);
    const double scale = 1.0 + q.S_X.cwiseAbs().maxCoeff();
    return (q.S_X * q.G_X).cwiseAbs().maxCoeff() <= 1e-8 * scale;
}

SolutionClass classify_solution(const PopovTriple& sigma, const Matrix& X,
                                const TolerancePolicy& tol) {
    const XQuantities q = x_quantities(sigma, X, tol);
    const Matrix residual = symmetrize(q.Q_X - q.S_X * pinv(q.R_X, tol) * q.S_X.transpose());
    if (residual_is_zero(residual, X, tol)) {
        if (rank_svd(q.R_X, tol) == sigma.m()) return SolutionClass::DARE;
        const double scale = 1.0 + q.S_X.cwiseAbs().maxCoeff();
        if ((q.S_X * q.G_X).cwiseAbs().maxCoeff() <= 1e-8 * scale) return SolutionClass::CGDARE;
        return SolutionClass::GDARE_ONLY;
    }
    if (is_psd(q.Pi_X, tol)) return SolutionClass::DRLMI_ONLY;
    return SolutionClass::NONE;
}

bool drlmi_holds(const PopovTriple& sigma, const Matrix& X,
                 const TolerancePolicy& tol) {
    return is_psd(x_quantities(sigma, X, tol).Pi_X, tol);
}

Matrix lx(const PopovTriple& sigma, const Matrix& X) {
    const Eigen::Index n = sigma.n();
    const Eigen::Index m = sigma.m();
    check_symmetric_input(X, n, "lx");
    Matrix L(n + m, n + m);
    const Matrix Xs = symmetrize(X);
    L << symmetrize(sigma.A().transpose() * Xs * sigma.A() - Xs),
        sigma.A().transpose() * Xs * sigma.B(),
        sigma.B().transpose() * Xs * sigma.A(),
        symmetrize(sigma.B().transpose() * Xs * sigma.B());
    return L;
}

}  // namespace cgdare
