#include <algorithm>
#include <cmath>
#include <complex>

#include <doctest.h>

#include "cgdare/stabilize.hpp"
#include "helpers.hpp"

using namespace cgdare;
using cgdare::testing::example_solution;
using cgdare::testing::example_triple;
using cgdare::testing::random_matrix;
using cgdare::testing::random_regular_triple;

namespace {
const TolerancePolicy kTol{};
using Cx = std::complex<double>;

std::vector<Cx> sorted(std::vector<Cx> v) {
    std::sort(v.begin(), v.end(), [](const Cx& a, const Cx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}
}  // namespace

TEST_CASE("fixed_spectrum on the worked example") {
    const auto spec = fixed_spectrum(example_triple(), example_solution(), kTol);
    REQUIRE(spec.size() == 1);
    CHECK(std::abs(spec[0] - Cx(1.0, 0.0)) < 1e-10);
}

TEST_CASE("fixed_spectrum is empty when R_X is nonsingular") {
    std::mt19937 rng(5);
    const PopovTriple sigma = random_regular_triple(rng, 3, 2);
    const SolveReport rep = solve_min_psd(sigma, kTol);
    REQUIRE(rep.status == SolveStatus::Converged);
    CHECK(fixed_spectrum(sigma, rep.X_bar, kTol).empty());
}

TEST_CASE("place_on_r0 reproduces the worked stabilization") {
    const PopovTriple sigma = example_triple();
    const Matrix X = example_solution();
    const StabilizationResult res = place_on_r0(sigma, X, {Cx(0.0, 0.0)}, kTol);

    // closed loop of the family [[alpha, beta], [0, 0]] at alpha = 0
    CHECK(std::abs(res.A_cl(0, 0)) < 1e-9);
    CHECK(res.A_cl.row(1).cwiseAbs().maxCoeff() < 1e-9);

    const XQuantities q = x_quantities(sigma, X, kTol);
    const Matrix delta = res.A_cl - q.A_X;
    const Matrix bg = sigma.B() * q.G_X;
    // delta must live in im(B G_X)
    CHECK(subspace_contains(image_basis(bg, kTol), image_basis(delta, kTol), kTol));
}

TEST_CASE("place_on_r0 puts an arbitrary real pole on R0") {
    const PopovTriple sigma = example_triple();
    const Matrix X = example_solution();
    for (const double alpha : {0.3, -0.7, 2.5}) {
        const StabilizationResult res = place_on_r0(sigma, X, {Cx(alpha, 0.0)}, kTol);
        CHECK(std::abs(res.A_cl(0, 0) - alpha) < 1e-9);
        CHECK(res.A_cl.row(1).cwiseAbs().maxCoeff() < 1e-9);
        REQUIRE(res.placed_poles.size() == 1);
        CHECK(std::abs(res.placed_poles[0] - Cx(alpha, 0.0)) < 1e-6);
    }
}

TEST_CASE("place_on_r0 with an empty R0 returns the open loop") {
    std::mt19937 rng(15);
    const PopovTriple sigma = random_regular_triple(rng, 3, 2);
    const SolveReport rep = solve_min_psd(sigma, kTol);
    REQUIRE(rep.status == SolveStatus::Converged);
    const StabilizationResult res = place_on_r0(sigma, rep.X_bar, {}, kTol);
    CHECK(res.L.cwiseAbs().maxCoeff() < 1e-12);
    const XQuantities q = x_quantities(sigma, rep.X_bar, kTol);
    CHECK((res.A_cl - q.A_X).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("place_on_r0 input validation") {
    const PopovTriple sigma = example_triple();
    const Matrix X = example_solution();
    CHECK_THROWS_AS(place_on_r0(sigma, X, {Cx(0, 0), Cx(1, 0)}, kTol),
                    DesiredSetSizeMismatch);
    CHECK_THROWS_AS(place_on_r0(sigma, X, {Cx(0.2, 0.4)}, kTol), ConjugationViolation);
}

TEST_CASE("off-R0 spectrum is untouched by placement") {
    const PopovTriple sigma = example_triple();
    const Matrix X = example_solution();
    const XQuantities q = x_quantities(sigma, X, kTol);

    const Eigen::EigenSolver<Matrix> open(q.A_X);
    for (const double alpha : {0.0, 0.4, -1.1}) {
        const StabilizationResult res = place_on_r0(sigma, X, {Cx(alpha, 0.0)}, kTol);
        const Eigen::EigenSolver<Matrix> closed(res.A_cl);

        // A_X has spectrum {1, 0}; R0 carries the 1, so 0 must survive
        std::vector<Cx> open_ev(open.eigenvalues().data(), open.eigenvalues().data() + 2);
        std::vector<Cx> closed_ev(closed.eigenvalues().data(),
                                  closed.eigenvalues().data() + 2);
        const auto keeps_zero = [](const std::vector<Cx>& ev) {
            return std::any_of(ev.begin(), ev.end(),
                               [](const Cx& l) { return std::abs(l) < 1e-6; });
        };
        CHECK(keeps_zero(open_ev));
        CHECK(keeps_zero(closed_ev));
    }
}

TEST_CASE("cost invariance on the worked example") {
    const PopovTriple sigma = example_triple();
    const Matrix X = example_solution();
    Vector x0(2);
    x0 << 3, 2;

    const StabilizationResult res = place_on_r0(sigma, X, {Cx(0.0, 0.0)}, kTol);
    CHECK(cost_invariance_residual(sigma, X, res.L, x0, 50, kTol) < 1e-8);
    CHECK(cost_invariance_residual(sigma, X, res.L, Vector::Zero(2), 50, kTol) <
          1e-12);

    // the closed-form gain is also admissible
    Matrix L(2, 2);
    L << -1, 0, 0, 0;
    CHECK(cost_invariance_residual(sigma, X, L, x0, 50, kTol) < 1e-8);

    // auto horizon: A_cl = 0 is stable
    CHECK(cost_invariance_residual(sigma, X, res.L, x0, 0, kTol) < 1e-8);
}

TEST_CASE("cost invariance for random placements and states") {
    const PopovTriple sigma = example_triple();
    const Matrix X = example_solution();
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> pole(-0.8, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
        const StabilizationResult res =
            place_on_r0(sigma, X, {Cx(pole(rng), 0.0)}, kTol, 1000 + trial);
        const Vector x0 = random_matrix(rng, 2, 1, 3.0);
        const double j_star = optimal_cost(X, x0);
        CHECK(cost_invariance_residual(sigma, X, res.L, x0, 0, kTol) <=
              1e-6 * (1.0 + j_star));
    }
}

TEST_CASE("the off-R0 trajectory component is independent of L") {
    const PopovTriple sigma = example_triple();
    const Matrix X = example_solution();
    const XQuantities q = x_quantities(sigma, X, kTol);
    const Subspace r0_sub = r0(sigma, X, kTol);
    const Matrix P_off = Matrix::Identity(2, 2) - r0_sub.projector();

    std::mt19937 rng(27);
    for (int trial = 0; trial < 10; ++trial) {
        const StabilizationResult res =
            place_on_r0(sigma, X, {Cx(0.5, 0.0)}, kTol, 2000 + trial);
        Vector x_free = random_matrix(rng, 2, 1, 2.0);
        Vector x_placed = x_free;
        const Matrix bg = sigma.B() * q.G_X;
        for (int t = 0; t < 30; ++t) {
            CHECK((P_off * (x_free - x_placed)).cwiseAbs().maxCoeff() < 1e-9);
            x_free = q.A_X * x_free;
            x_placed = (q.A_X + bg * res.L) * x_placed;
        }
    }
}

TEST_CASE("divergent closed loop with no horizon is rejected") {
    const PopovTriple sigma = example_triple();
    const Matrix X = example_solution();
    // leave the unit-circle pole in place: A_cl = A_X has an eigenvalue at 1
    CHECK_THROWS_AS(cost_invariance_residual(sigma, X, Matrix::Zero(2, 2),
                                             (Vector(2) << 3, 2).finished(), 0, kTol),
                    DivergentTrajectory);
}
