#pragma once

#include <complex>
#include <vector>

#include "cgdare/geometry.hpp"
#include "cgdare/riccati.hpp"

// The free term B G_X L of the optimal-control family: the fixed spectrum of
// A_X on R0, pole placement on R0 without changing the optimal cost, and
// cost-invariance verification by simulation.

namespace cgdare {

struct StabilizationResult {
    Matrix L;        // m x n, supported on the R0 coordinates
    Matrix A_cl;     // A_X + B G_X L
    std::vector<std::complex<double>> placed_poles;
    bool fixed_poles_removed = false;
};

// Eigenvalues of A_X restricted to R0; present in the closed loop for every
// solution-derived feedback.
std::vector<std::complex<double>> fixed_spectrum(const PopovTriple& sigma, const Matrix& X,
                                                 const TolerancePolicy& tol);

// Finds L so that the spectrum of A_X + B G_X L restricted to R0 equals the
// desired multiset, leaving the off-R0 eigenvalues untouched. desired must
// have exactly dim R0 entries and be closed under conjugation.
StabilizationResult place_on_r0(const PopovTriple& sigma, const Matrix& X,
                                const std::vector<std::complex<double>>& desired,
                                const TolerancePolicy& tol, unsigned seed = 0);

// |simulate_cost(K_X, G_X, L, x0, T) - x0^T X x0|. Pass T <= 0 to pick the
// horizon from the closed-loop spectral radius (DivergentTrajectory when the
// closed loop is not stable and no horizon is given).
double cost_invariance_residual(const PopovTriple& sigma, const Matrix& X, const Matrix& L,
                                const Vector& x0, int T, const TolerancePolicy& tol);

}  // namespace cgdare
