#pragma once

#include <optional>

#include "cgdare/numerics.hpp"

// The Popov-triple data model and everything derived from a candidate
// solution X of the generalised Riccati equation: the X-shifted cost blocks,
// equation residuals, the kernel condition and solution classification.

namespace cgdare {

// Sigma = (A, B; Q, R, S) with Pi = [[Q,S],[S^T,R]] validated symmetric PSD
// at construction. Immutable afterwards.
class PopovTriple {
  public:
    PopovTriple(Matrix A, Matrix B, Matrix Q, Matrix R, Matrix S,
                const TolerancePolicy& tol);

    Eigen::Index n() const { return A_.rows(); }
    Eigen::Index m() const { return B_.cols(); }

    const Matrix& A() const { return A_; }
    const Matrix& B() const { return B_; }
    const Matrix& Q() const { return Q_; }
    const Matrix& R() const { return R_; }
    const Matrix& S() const { return S_; }

    Matrix popov_matrix() const;

    // Factor (C, D) with Q = C^T C, S = C^T D, R = D^T D. Regenerated from
    // psd_factor(Pi) unless an explicit factor was installed and validated.
    const Matrix& C() const { return C_; }
    const Matrix& D() const { return D_; }
    Eigen::Index p() const { return C_.rows(); }

    // Install a caller-supplied output factor; throws if it does not
    // reproduce Pi within tolerance.
    void set_output_factor(Matrix C, Matrix D, const TolerancePolicy& tol);

  private:
    Matrix A_, B_, Q_, R_, S_;
    Matrix C_, D_;
};

// All matrices derived from a candidate symmetric X.
struct XQuantities {
    Matrix X;
    Matrix Q_X;    // Q + A^T X A - X
    Matrix S_X;    // A^T X B + S
    Matrix R_X;    // R + B^T X B
    Matrix G_X;    // I - R_X^+ R_X, orthogonal projector onto ker R_X
    Matrix K_X;    // R_X^+ S_X^T
    Matrix A_X;    // A - B K_X
    Matrix Pi_X;   // [[Q_X, S_X], [S_X^T, R_X]]
    Matrix C_X;    // C - D K_X
    Matrix Q0_X;   // [I -S_X R_X^+] Pi [I; -K_X]
};

enum class SolutionClass { DARE, CGDARE, GDARE_ONLY, DRLMI_ONLY, NONE };

const char* to_string(SolutionClass c);

PopovTriple validate_triple(const Matrix& A, const Matrix& B, const Matrix& Q,
                            const Matrix& R, const Matrix& S,
                            const TolerancePolicy& tol);

XQuantities x_quantities(const PopovTriple& sigma, const Matrix& X,
                         const TolerancePolicy& tol);

// R[X] - X with R the generalised Riccati operator.
Matrix gdare_residual(const PopovTriple& sigma, const Matrix& X,
                      const TolerancePolicy& tol);

// ker R_X contained in ker S_X, tested as S_X G_X = 0.
bool kernel_condition_holds(const PopovTriple& sigma, const Matrix& X,
                            const TolerancePolicy& tol);

SolutionClass classify_solution(const PopovTriple& sigma, const Matrix& X,
                                const TolerancePolicy& tol);

// Dissipation-matrix inequality Pi_X >= 0.
bool drlmi_holds(const PopovTriple& sigma, const Matrix& X,
                 const TolerancePolicy& tol);

// L(X) = Pi_X - Pi, linear in X.
Matrix lx(const PopovTriple& sigma, const Matrix& X);

}  // namespace cgdare
