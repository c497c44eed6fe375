#pragma once

#include <complex>

#include "cgdare/popov.hpp"

// Popov function Phi(z) of the triple, its dissipation-matrix form, normal
// rank estimation by seeded sampling and the spectral-factor identities.
// Complex arithmetic stays inside this module.

namespace cgdare {

using Complex = std::complex<double>;

// Phi(z) = [B^T (z^-1 I - A^T)^-1, I] Pi [(z I - A)^-1 B; I].
ComplexMatrix eval_phi(const PopovTriple& sigma, Complex z, const TolerancePolicy& tol);

// Frobenius norm of Phi(z) minus the same expression built from Pi_X; zero
// for any symmetric X.
double phi_pix_identity_residual(const PopovTriple& sigma, const Matrix& X, Complex z,
                                 const TolerancePolicy& tol);

// Max rank of Phi over seeded pseudo-random sample points with |z| in
// [0.7, 1.4], away from the poles.
Eigen::Index normal_rank_phi(const PopovTriple& sigma, const TolerancePolicy& tol,
                             int samples, unsigned seed = 0);

// W1(z) = R_X^{1/2} (R_X^+ S_X^T (z I - A)^-1 B + I) for a CGDARE solution X.
ComplexMatrix spectral_factor_eval(const PopovTriple& sigma, const Matrix& X, Complex z,
                                   const TolerancePolicy& tol);

struct RankComparison {
    Eigen::Index rank_rx = 0;
    Eigen::Index normal_rank = 0;
    SolutionClass classification = SolutionClass::NONE;
    bool holds = false;  // equality for CGDARE/DARE, inequality for DRLMI-only
};

RankComparison rank_rx_vs_normal_rank(const PopovTriple& sigma, const Matrix& X,
                                      const TolerancePolicy& tol, int samples = 16,
                                      unsigned seed = 0);

}  // namespace cgdare
