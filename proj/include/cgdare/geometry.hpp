#pragma once

#include "cgdare/popov.hpp"

// Geometric control subspaces: reachable/unobservable subspaces, Kalman
// controllability form, output-nulling subspaces and friends, the largest
// output-nulling subspace V*, the reachability subspace on V and the
// solution-independent subspace R0 of the Riccati analysis.

namespace cgdare {

struct Quadruple {
    Matrix A;  // n x n
    Matrix B;  // n x m
    Matrix C;  // p x n
    Matrix D;  // p x m

    Quadruple(Matrix A_, Matrix B_, Matrix C_, Matrix D_);

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
    Eigen::Index p() const { return C.rows(); }

    static Quadruple from_triple(const PopovTriple& sigma);
};

// Orthogonal change of basis whose leading block carries the reachable
// subspace of (A, B): T^T A T block upper triangular, T^T B supported on the
// leading rows, (A11, B1) controllable.
struct KalmanForm {
    Matrix T;             // orthogonal n x n
    Eigen::Index k = 0;   // dimension of the reachable part
    Matrix A11, A12, A22;
    Matrix B1;            // k x m
};

Subspace reachable_subspace(const Matrix& A, const Matrix& B, const TolerancePolicy& tol);

Subspace unobservable_subspace(const Matrix& A, const Matrix& C, const TolerancePolicy& tol);

KalmanForm controllability_form(const Matrix& A, const Matrix& B, const TolerancePolicy& tol);

bool is_output_nulling(const Quadruple& quad, const Subspace& V, const TolerancePolicy& tol);

// (A - B F) V inside V and (C - D F) V = 0.
bool is_friend(const Quadruple& quad, const Subspace& V, const Matrix& F,
               const TolerancePolicy& tol);

// Largest output-nulling subspace via the invariant-subspace recursion.
Subspace largest_output_nulling(const Quadruple& quad, const TolerancePolicy& tol);

// Smallest (A - B F)-invariant subspace containing V intersect B ker D, for
// an output-nulling V with friend F (errors otherwise).
Subspace reachability_on(const Quadruple& quad, const Subspace& V, const Matrix& F,
                         const TolerancePolicy& tol);

// R0 = reachable subspace of (A_X, B G_X) for a candidate solution X.
Subspace r0(const PopovTriple& sigma, const Matrix& X, const TolerancePolicy& tol);

// A restricted to an A-invariant subspace V, expressed in the basis of V.
Matrix restriction(const Matrix& A, const Subspace& V, const TolerancePolicy& tol);

}  // namespace cgdare
