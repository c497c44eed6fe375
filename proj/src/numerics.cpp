#include "cgdare/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace cgdare {

namespace {

void require_finite(const Matrix& M, const char* who) {
    if (!M.allFinite()) {
        throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
    }
}

double rank_cutoff(const TolerancePolicy& tol, Eigen::Index rows, Eigen::Index cols, double sigma_max) {
    return tol.rank_rel * static_cast<double>(std::max(rows, cols)) * sigma_max;
}

// Principal-angle threshold for subspace containment/equality decisions.
double angle_tol(const TolerancePolicy& tol) { return std::sqrt(tol.rank_rel); }

}  // namespace

Subspace::Subspace(Eigen::Index ambient_dim, Matrix basis)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.size() == 0) {
        basis_.resize(ambient_dim_, 0);
    }
    if (basis_.rows() != ambient_dim_ || basis_.cols() > ambient_dim_) {
        throw DimensionMismatch("Subspace: basis shape inconsistent with ambient dimension");
    }
    const Matrix gram = basis_.transpose() * basis_;
    if (basis_.cols() > 0 &&
        (gram - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff() > 1e-8) {
        throw std::invalid_argument("Subspace: basis columns are not orthonormal");
    }
}

Subspace Subspace::zero(Eigen::Index ambient_dim) {
    return Subspace(ambient_dim, Matrix(ambient_dim, 0));
}

Subspace Subspace::full(Eigen::Index ambient_dim) {
    return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::complement(const TolerancePolicy& tol) const {
    return kernel_basis(basis_.transpose(), tol);
}

Eigen::Index rank_svd(const Matrix& M, const TolerancePolicy& tol) {
    require_finite(M, "rank_svd");
    if (M.size() == 0) return 0;
    const Eigen::JacobiSVD<Matrix> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cutoff = rank_cutoff(tol, M.rows(), M.cols(), sv(0));
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cutoff) ++r;
    return r;
}

Eigen::Index rank_svd(const ComplexMatrix& M, const TolerancePolicy& tol) {
    if (M.size() == 0) return 0;
    const Eigen::JacobiSVD<ComplexMatrix> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cutoff = rank_cutoff(tol, M.rows(), M.cols(), sv(0));
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cutoff) ++r;
    return r;
}

Matrix pinv(const Matrix& M, const TolerancePolicy& tol) {
    require_finite(M, "pinv");
    if (M.size() == 0) return Matrix(M.cols(), M.rows());
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Vector inv = Vector::Zero(sv.size());
    if (sv.size() > 0 && sv(0) > 0.0) {
        const double cutoff = rank_cutoff(tol, M.rows(), M.cols(), sv(0));
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
        }
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Subspace kernel_basis(const Matrix& M, const TolerancePolicy& tol) {
    require_finite(M, "kernel_basis");
    if (M.rows() == 0 || M.cols() == 0) return Subspace::full(M.cols());
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
    const Eigen::Index r = rank_svd(M, tol);
    return Subspace(M.cols(), svd.matrixV().rightCols(M.cols() - r));
}

Subspace image_basis(const Matrix& M, const TolerancePolicy& tol) {
    require_finite(M, "image_basis");
    if (M.rows() == 0 || M.cols() == 0) return Subspace::zero(M.rows());
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU);
    const Eigen::Index r = rank_svd(M, tol);
    return Subspace(M.rows(), svd.matrixU().leftCols(r));
}

Subspace subspace_sum(const Subspace& U, const Subspace& V, const TolerancePolicy& tol) {
    if (U.ambient_dim() != V.ambient_dim()) {
        throw DimensionMismatch("subspace_sum: ambient dimensions differ");
    }
    Matrix cat(U.ambient_dim(), U.dim() + V.dim());
    cat << U.basis(), V.basis();
    return image_basis(cat, tol);
}

Subspace subspace_intersect(const Subspace& U, const Subspace& V, const TolerancePolicy& tol) {
    if (U.ambient_dim() != V.ambient_dim()) {
        throw DimensionMismatch("subspace_intersect: ambient dimensions differ");
    }
    const Eigen::Index n = U.ambient_dim();
    // x lies in U cap V iff both complement projectors annihilate it.
    Matrix stacked(2 * n, n);
    stacked.topRows(n) = Matrix::Identity(n, n) - U.projector();
    stacked.bottomRows(n) = Matrix::Identity(n, n) - V.projector();
    return kernel_basis(stacked, tol);
}

bool subspace_contains(const Subspace& U, const Subspace& V, const TolerancePolicy& tol) {
    if (U.ambient_dim() != V.ambient_dim()) {
        throw DimensionMismatch("subspace_contains: ambient dimensions differ");
    }
    if (V.dim() == 0) return true;
    if (V.dim() > U.dim()) return false;
    const Matrix residual =
        V.basis() - U.projector() * V.basis();  // sin of principal angles
    return residual.cwiseAbs().maxCoeff() <= angle_tol(tol);
}

bool subspace_equal(const Subspace& U, const Subspace& V, const TolerancePolicy& tol) {
    return U.dim() == V.dim() && subspace_contains(U, V, tol) && subspace_contains(V, U, tol);
}

Matrix psd_factor(const Matrix& M, const TolerancePolicy& tol) {
    require_finite(M, "psd_factor");
    if (M.rows() != M.cols()) throw DimensionMismatch("psd_factor: matrix not square");
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > tol.psd_clip * (1.0 + M.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("psd_factor: matrix not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M));
    const Vector lam = es.eigenvalues();
    const double lam_max = lam.size() > 0 ? std::max(lam.maxCoeff(), 0.0) : 0.0;
    const double clip = tol.psd_clip * std::max(lam_max, 1e-300);
    if (lam.size() > 0 && lam.minCoeff() < -clip) {
        throw NotPositiveSemidefinite("psd_factor: matrix has a negative eigenvalue", lam.minCoeff());
    }
    const double pos_cut = rank_cutoff(tol, M.rows(), M.cols(), lam_max);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > pos_cut) ++r;
    }
    Matrix F(r, M.cols());
    Eigen::Index row = 0;
    // eigenvalues are sorted ascending; take the trailing positive ones
    for (Eigen::Index i = lam.size() - r; i < lam.size(); ++i) {
        F.row(row++) = std::sqrt(lam(i)) * es.eigenvectors().col(i).transpose();
    }
    // fix the sign of each row so the factor is reproducible across platforms
    for (Eigen::Index i = 0; i < F.rows(); ++i) {
        for (Eigen::Index j = 0; j < F.cols(); ++j) {
            if (std::abs(F(i, j)) > pos_cut) {
                if (F(i, j) < 0.0) F.row(i) = -F.row(i);
                break;
            }
        }
    }
    return F;
}

Matrix psd_sqrt(const Matrix& M, const TolerancePolicy& tol) {
    require_finite(M, "psd_sqrt");
    if (M.rows() != M.cols()) throw DimensionMismatch("psd_sqrt: matrix not square");
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M));
    Vector lam = es.eigenvalues();
    const double lam_max = lam.size() > 0 ? std::max(lam.maxCoeff(), 0.0) : 0.0;
    const double clip = tol.psd_clip * std::max(lam_max, 1e-300);
    if (lam.size() > 0 && lam.minCoeff() < -clip) {
        throw NotPositiveSemidefinite("psd_sqrt: matrix has a negative eigenvalue", lam.minCoeff());
    }
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        lam(i) = lam(i) > 0.0 ? std::sqrt(lam(i)) : 0.0;
    }
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

Matrix schur_psd(const Matrix& P11, const Matrix& P12, const Matrix& P22,
                 const TolerancePolicy& tol) {
    if (P11.rows() != P11.cols() || P22.rows() != P22.cols() ||
        P12.rows() != P11.rows() || P12.cols() != P22.cols()) {
        throw DimensionMismatch("schur_psd: inconsistent block dimensions");
    }
    const Eigen::Index a = P11.rows();
    const Eigen::Index b = P22.rows();
    Matrix P(a + b, a + b);
    P << P11, P12, P12.transpose(), P22;
    const double scale = std::max(P.cwiseAbs().maxCoeff(), 1e-300);
    const double lam_min = min_eigenvalue_sym(symmetrize(P));
    if (lam_min < -tol.psd_clip * scale) {
        throw NotPositiveSemidefinite("schur_psd: assembled block matrix is indefinite", lam_min);
    }
    const Matrix P22p = pinv(P22, tol);
    // side conditions of the PSD block structure.
    if ((P12 * P22p * P22 - P12).cwiseAbs().maxCoeff() > 1e-6 * (1.0 + scale)) {
        throw NotPositiveSemidefinite("schur_psd: ker P22 not contained in ker P12", lam_min);
    }
    const Subspace kerP22 = kernel_basis(P22, tol);
    const Subspace kerP12 = kernel_basis(P12, tol);
    if (!subspace_contains(kerP12, kerP22, tol)) {
        throw NotPositiveSemidefinite("schur_psd: ker P22 not contained in ker P12", lam_min);
    }
    return symmetrize(P11 - P12 * P22p * P12.transpose());
}

double min_eigenvalue_sym(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_psd(const Matrix& M, const TolerancePolicy& tol) {
    if (M.rows() != M.cols()) return false;
    const double scale = std::max(M.cwiseAbs().maxCoeff(), 1e-300);
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > tol.psd_clip * (1.0 + scale)) return false;
    return min_eigenvalue_sym(M) >= -tol.psd_clip * scale;
}

}  // namespace cgdare
