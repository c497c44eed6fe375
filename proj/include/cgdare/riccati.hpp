#pragma once

#include <optional>
#include <vector>

#include "cgdare/popov.hpp"

// Forward iteration of the generalised Riccati difference equation from
// X_0 = 0: converges to the minimal positive semidefinite solution of the
// constrained equation when the optimal cost is finite for every initial
// state. Also hosts the finite-horizon simulation cost used as the
// brute-force oracle for all optimality claims.

namespace cgdare {

enum class SolveStatus { Converged, Diverged, MaxIterReached };

const char* to_string(SolveStatus s);

struct SolveReport {
    Matrix X_bar;
    SolveStatus status = SolveStatus::MaxIterReached;
    int iterations = 0;
    // first iteration index at which dim ker R_{X_t} reached its final value
    int kernel_stationary_at = 0;
    SolutionClass classification = SolutionClass::NONE;
    // smallest eigenvalue of X_{t+1} - X_t seen over the run; the iterate
    // sequence is monotonically non-decreasing, so this stays near zero
    double min_monotonicity_gap = 0.0;
    std::vector<double> trace;  // ||X_{t+1} - X_t||_F per step
};

struct SolveOptions {
    bool keep_trace = false;
    // freeze the rank decision of R_{X_t} once the kernel chain is stationary
    bool freeze_rank_after_stationary = false;
};

// One application of the generalised Riccati operator, symmetrized.
Matrix riccati_step(const PopovTriple& sigma, const Matrix& P, const TolerancePolicy& tol);

SolveReport solve_min_psd(const PopovTriple& sigma, const TolerancePolicy& tol,
                          const SolveOptions& opts = {});

double optimal_cost(const Matrix& X_bar, const Vector& x0);

// (K, G) of the optimal-control family u_t = -K x_t + G v_t.
std::pair<Matrix, Matrix> optimal_control_set(const PopovTriple& sigma, const Matrix& X_bar,
                                              const TolerancePolicy& tol);

// Truncated cost of the closed loop u_t = -K x_t + G_X L x_t over horizon T,
// where G is the projector factor paired with K (pass a zero L to run the
// plain feedback). Throws DivergentTrajectory past a 1e12 state-norm guard.
double simulate_cost(const PopovTriple& sigma, const Matrix& K, const Matrix& G,
                     const Matrix& L, const Vector& x0, int T);

}  // namespace cgdare
