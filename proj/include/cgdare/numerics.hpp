#pragma once

#include <Eigen/Dense>

#include "cgdare/errors.hpp"

// Tolerance-aware dense linear algebra: SVD-backed rank decisions,
// pseudo-inverses, kernel/image bases, subspace arithmetic and PSD
// utilities. Everything else in the library is built on top of these.

namespace cgdare {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

struct TolerancePolicy {
    double rank_rel = 1e-10;   // relative singular-value cutoff for rank
    double conv_rel = 1e-10;   // relative convergence threshold for iterations
    double psd_clip = 1e-10;   // negative-eigenvalue clipping band for PSD checks
    int max_iter = 10000;

    void validate() const {
        if (rank_rel <= 0.0 || conv_rel <= 0.0 || psd_clip <= 0.0 || max_iter < 1) {
            throw std::invalid_argument("TolerancePolicy: all thresholds must be positive, max_iter >= 1");
        }
    }
};

// Orthonormal column basis of a subspace of R^ambient_dim. dim()==0 is the
// zero subspace (basis has zero columns).
class Subspace {
  public:
    Subspace(Eigen::Index ambient_dim, Matrix basis);

    static Subspace zero(Eigen::Index ambient_dim);
    static Subspace full(Eigen::Index ambient_dim);

    Eigen::Index ambient_dim() const { return ambient_dim_; }
    Eigen::Index dim() const { return basis_.cols(); }
    const Matrix& basis() const { return basis_; }

    // Orthogonal projector basis*basis^T onto the subspace.
    Matrix projector() const { return basis_ * basis_.transpose(); }

    // Orthonormal basis of the orthogonal complement.
    Subspace complement(const TolerancePolicy& tol) const;

  private:
    Eigen::Index ambient_dim_;
    Matrix basis_;
};

Eigen::Index rank_svd(const Matrix& M, const TolerancePolicy& tol);
Eigen::Index rank_svd(const ComplexMatrix& M, const TolerancePolicy& tol);

Matrix pinv(const Matrix& M, const TolerancePolicy& tol);

Subspace kernel_basis(const Matrix& M, const TolerancePolicy& tol);
Subspace image_basis(const Matrix& M, const TolerancePolicy& tol);

Subspace subspace_sum(const Subspace& U, const Subspace& V, const TolerancePolicy& tol);
Subspace subspace_intersect(const Subspace& U, const Subspace& V, const TolerancePolicy& tol);
bool subspace_contains(const Subspace& U, const Subspace& V, const TolerancePolicy& tol);
bool subspace_equal(const Subspace& U, const Subspace& V, const TolerancePolicy& tol);

// Factor F of a symmetric PSD M with F^T F = M and rows(F) == rank(M).
// Eigenvalues in [-psd_clip*lambda_max, 0) are clipped to zero; anything
// below that band throws NotPositiveSemidefinite.
Matrix psd_factor(const Matrix& M, const TolerancePolicy& tol);

// Generalised Schur complement P11 - P12 P22^+ P12^T of a PSD block matrix,
// with the kernel-inclusion side conditions asserted.
Matrix schur_psd(const Matrix& P11, const Matrix& P12, const Matrix& P22,
                 const TolerancePolicy& tol);

// PSD square root via eigendecomposition with the same clipping as psd_factor.
Matrix psd_sqrt(const Matrix& M, const TolerancePolicy& tol);

inline Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

double min_eigenvalue_sym(const Matrix& M);

// Symmetric within psd_clip band and min eigenvalue >= -psd_clip*scale.
bool is_psd(const Matrix& M, const TolerancePolicy& tol);

}  // namespace cgdare
