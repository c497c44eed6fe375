#include "cgdare/stein.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

#include "cgdare/geometry.hpp"

namespace cgdare {

namespace {

Eigen::Index half_dim(Eigen::Index n) { return n * (n + 1) / 2; }

// upper-triangle (i <= j) entries, row-major over the triangle
Vector hvec(const Matrix& X) {
    const Eigen::Index n = X.rows();
    Vector v(half_dim(n));
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) v(k++) = X(i, j);
    }
    return v;
}

Matrix unhvec(const Vector& v, Eigen::Index n) {
    Matrix X(n, n);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            X(i, j) = v(k);
            X(j, i) = v(k);
            ++k;
        }
    }
    return X;
}

Matrix sym_basis_element(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    Matrix E = Matrix::Zero(n, n);
    E(i, j) = 1.0;
    E(j, i) = 1.0;
    return E;
}

}  // namespace

bool is_unmixed(const Matrix& A, const TolerancePolicy& tol) {
    if (A.rows() != A.cols()) throw DimensionMismatch("is_unmixed: A must be square");
    if (A.size() == 0) return true;
    const Eigen::EigenSolver<Matrix> es(A);
    const auto& lam = es.eigenvalues();
    const double disc = std::sqrt(tol.rank_rel);
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        for (Eigen::Index j = 0; j < lam.size(); ++j) {
            if (std::abs(lam(i) * lam(j) - 1.0) <= disc) return false;
        }
    }
    return true;
}

SteinSolutionSet stein_solve(const Matrix& A, const Matrix& Q, const TolerancePolicy& tol) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || Q.rows() != n || Q.cols() != n) {
        throw DimensionMismatch("stein_solve: A, Q must be n x n");
    }
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + Q.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("stein_solve: Q must be symmetric");
    }

    // linear system over the symmetric unknowns: hvec(X - A^T X A) = hvec(Q)
    const Eigen::Index h = half_dim(n);
    Matrix system(h, h);
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const Matrix E = sym_basis_element(n, i, j);
            system.col(col++) = hvec(E - A.transpose() * E * A);
        }
    }
    const Vector rhs = hvec(symmetrize(Q));

    Eigen::JacobiSVD<Matrix> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector c = svd.solve(rhs);

    SteinSolutionSet result;
    const double scale = 1.0 + rhs.norm();
    if ((system * c - rhs).norm() <= 1e-8 * scale) {
        result.particular = unhvec(c, n);
    }
    const Subspace null = kernel_basis(system, tol);
    for (Eigen::Index k = 0; k < null.dim(); ++k) {
        result.homogeneous_basis.push_back(unhvec(null.basis().col(k), n));
    }
    return result;
}

SteinKernelReport stein_kernel_report(const Matrix& A, const Matrix& Q, const Matrix& X,
                                      const TolerancePolicy& tol) {
    const Eigen::Index n = A.rows();
    if (X.rows() != n || X.cols() != n) {
        throw DimensionMismatch("stein_kernel_report: X must be n x n");
    }
    const Matrix residual = X - A.transpose() * X * A - Q;
    if (residual.norm() > 1e-7 * (1.0 + Q.norm() + X.norm())) {
        throw SteinResidualTooLarge("stein_kernel_report: X does not solve the Stein equation");
    }
    if (!is_psd(Q, tol)) {
        throw NotPositiveSemidefinite("stein_kernel_report: Q must be PSD", min_eigenvalue_sym(Q));
    }

    SteinKernelReport report{
        kernel_basis(X, tol),
        kernel_basis(Q, tol),
        unobservable_subspace(A, Q, tol),
        false, false, false, false,
    };
    const Subspace mapped = image_basis(A * report.ker_X.basis(), tol);
    report.ker_X_A_invariant = subspace_contains(report.ker_X, mapped, tol);
    report.ker_X_in_ker_Q = subspace_contains(report.ker_Q, report.ker_X, tol);
    report.unmixed = is_unmixed(A, tol);
    if (report.unmixed) {
        report.ker_matches_unobservable = subspace_equal(report.ker_X, report.unobservable, tol);
    }
    return report;
}

bool unobservable_containment_check(const Matrix& A, const Matrix& B, const Matrix& F,
                                    const Matrix& X, const TolerancePolicy& tol) {
    const Eigen::Index n = A.rows();
    // X may be rectangular n x q with F square q x q
    if (A.cols() != n || B.rows() != n || X.rows() != n ||
        F.rows() != X.cols() || F.cols() != X.cols()) {
        throw DimensionMismatch("unobservable_containment_check: inconsistent dimensions");
    }
    const double scale = 1.0 + X.cwiseAbs().maxCoeff();
    const Matrix top = A.transpose() * X * F - X;
    const Matrix bottom = B.transpose() * X * F;
    if (top.cwiseAbs().maxCoeff() > 1e-8 * scale || bottom.cwiseAbs().maxCoeff() > 1e-8 * scale) {
        throw PreconditionViolated("unobservable_containment_check: [A^T; B^T] X F = [X; 0] fails");
    }
    (void)tol;
    Matrix power = X;
    for (Eigen::Index k = 0; k < n; ++k) {
        if ((B.transpose() * power).cwiseAbs().maxCoeff() > 1e-8 * scale) return false;
        power = A.transpose() * power;
    }
    return true;
}

}  // namespace cgdare
