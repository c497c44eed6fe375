#pragma once

#include <optional>
#include <vector>

#include "cgdare/numerics.hpp"

// Hermitian Stein (discrete Lyapunov) equation X = A^T X A + Q over the
// symmetric matrices: unmixedness test, full solution family on desk-scale
// instances via a half-vectorised linear solve, and the kernel /
// unobservability reports used by the geometric analysis.

namespace cgdare {

struct SteinSolutionSet {
    // one symmetric solution; absent when the equation is inconsistent
    std::optional<Matrix> particular;
    // symmetric matrices spanning all solutions of X = A^T X A
    std::vector<Matrix> homogeneous_basis;

    bool consistent() const { return particular.has_value(); }
    bool unique() const { return consistent() && homogeneous_basis.empty(); }
};

// No two eigenvalues of A multiply to one (within a relative disc); exactly
// the condition for the Stein equation to have a unique solution.
bool is_unmixed(const Matrix& A, const TolerancePolicy& tol);

SteinSolutionSet stein_solve(const Matrix& A, const Matrix& Q, const TolerancePolicy& tol);

struct SteinKernelReport {
    Subspace ker_X;
    Subspace ker_Q;
    Subspace unobservable;       // of the pair (A, Q)
    bool ker_X_A_invariant = false;
    bool ker_X_in_ker_Q = false;
    bool unmixed = false;
    // ker X = unobservable subspace; only meaningful when unmixed
    bool ker_matches_unobservable = false;
};

// X must actually solve the equation (SteinResidualTooLarge otherwise) and
// Q must be PSD.
SteinKernelReport stein_kernel_report(const Matrix& A, const Matrix& Q, const Matrix& X,
                                      const TolerancePolicy& tol);

// Given [A^T; B^T] X F = [X; 0], checks B^T (A^T)^k X = 0 for k = 0..n-1,
// i.e. im X inside the unobservable subspace of (A^T, B^T).
bool unobservable_containment_check(const Matrix& A, const Matrix& B, const Matrix& F,
                                    const Matrix& X, const TolerancePolicy& tol);

}  // namespace cgdare
