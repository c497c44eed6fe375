#include <cmath>

#include <doctest.h>

#include "cgdare/riccati.hpp"
#include "helpers.hpp"

using namespace cgdare;
using cgdare::testing::example_solution;
using cgdare::testing::example_triple;
using cgdare::testing::random_matrix;
using cgdare::testing::random_regular_triple;
using cgdare::testing::random_symmetric;

namespace {
const TolerancePolicy kTol{};

PopovTriple scalar_triple() {
    return PopovTriple(Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 1.0),
                       Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0),
                       Matrix::Constant(1, 1, 0.0), kTol);
}
}  // namespace

TEST_CASE("riccati_step fixed values") {
    const PopovTriple sigma = example_triple();
    const Matrix X = example_solution();
    CHECK((riccati_step(sigma, Matrix::Zero(2, 2), kTol) - X).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((riccati_step(sigma, X, kTol) - X).cwiseAbs().maxCoeff() < 1e-12);

    CHECK(riccati_step(scalar_triple(), Matrix::Zero(1, 1), kTol)(0, 0) ==
          doctest::Approx(1.0));
}

TEST_CASE("solve_min_psd on the worked example") {
    const SolveReport rep = solve_min_psd(example_triple(), kTol);
    REQUIRE(rep.status == SolveStatus::Converged);
    CHECK((rep.X_bar - example_solution()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(rep.iterations <= 5);
    CHECK(rep.classification == SolutionClass::CGDARE);
    CHECK(rep.min_monotonicity_gap > -1e-9);
}

TEST_CASE("solve_min_psd scalar closed form") {
    const SolveReport rep = solve_min_psd(scalar_triple(), kTol);
    REQUIRE(rep.status == SolveStatus::Converged);
    // positive root of x^2 - x/4 - 1 = 0
    const double root = (1.0 + std::sqrt(65.0)) / 8.0;
    CHECK(std::abs(rep.X_bar(0, 0) - root) < 1e-9);
}

TEST_CASE("solve_min_psd trivial cases") {
    const PopovTriple zero_a(Matrix::Zero(2, 2), Matrix::Identity(2, 2), Matrix::Zero(2, 2),
                             Matrix::Identity(2, 2), Matrix::Zero(2, 2), kTol);
    const SolveReport rep = solve_min_psd(zero_a, kTol);
    REQUIRE(rep.status == SolveStatus::Converged);
    CHECK(rep.X_bar.cwiseAbs().maxCoeff() < 1e-12);

    // A = 0 with nonzero Q converges to Q in one step
    Matrix Q(2, 2);
    Q << 2, 1, 1, 3;
    const PopovTriple q_only(Matrix::Zero(2, 2), Matrix::Identity(2, 2), Q,
                             Matrix::Identity(2, 2), Matrix::Zero(2, 2), kTol);
    const SolveReport rep_q = solve_min_psd(q_only, kTol);
    REQUIRE(rep_q.status == SolveStatus::Converged);
    CHECK((rep_q.X_bar - Q).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("solve_min_psd detects divergence") {
    // uncontrollable unstable mode with state weight: cost unbounded
    const PopovTriple bad(Matrix::Constant(1, 1, 2.0), Matrix::Zero(1, 1),
                          Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0),
                          Matrix::Zero(1, 1), kTol);
    const SolveReport rep = solve_min_psd(bad, kTol);
    CHECK(rep.status == SolveStatus::Diverged);
}

TEST_CASE("iteration monotonicity and kernel chain on random triples") {
    std::mt19937 rng(101);
    int converged = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const PopovTriple sigma = random_regular_triple(rng, 3, 2);
        SolveOptions opts;
        opts.keep_trace = true;
        const SolveReport rep = solve_min_psd(sigma, kTol, opts);
        CHECK(rep.min_monotonicity_gap > -1e-9);
        CHECK(rep.kernel_stationary_at <= rep.iterations);
        if (rep.status == SolveStatus::Converged) {
            ++converged;
            CHECK(min_eigenvalue_sym(rep.X_bar) > -1e-8 * (1.0 + rep.X_bar.norm()));
            CHECK(gdare_residual(sigma, rep.X_bar, kTol).norm() <=
                  kTol.conv_rel * 100 * (1.0 + rep.X_bar.norm()));
            CHECK(kernel_condition_holds(sigma, rep.X_bar, kTol));
        }
    }
    CHECK(converged >= 40);  // stable A with nonsingular R: almost all converge
}

TEST_CASE("optimal_cost values") {
    const Matrix X = example_solution();
    Vector x0(2);
    x0 << 3, 2;
    CHECK(optimal_cost(X, x0) == doctest::Approx(4.0));
    x0 << 1, 0;
    CHECK(optimal_cost(X, x0) == doctest::Approx(0.0));
    CHECK(optimal_cost(X, Vector::Zero(2)) == doctest::Approx(0.0));
}

TEST_CASE("optimal_control_set on the worked example") {
    const auto [K, G] = optimal_control_set(example_triple(), example_solution(), kTol);
    Matrix Kexp(2, 2), Gexp(2, 2);
    Kexp << 0, 0.5, 0, 0.5;
    Gexp << 0.5, -0.5, -0.5, 0.5;
    CHECK((K - Kexp).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((G - Gexp).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("optimal_control_set gives G = 0 for nonsingular R_X") {
    std::mt19937 rng(55);
    const PopovTriple sigma = random_regular_triple(rng, 3, 2);
    const SolveReport rep = solve_min_psd(sigma, kTol);
    REQUIRE(rep.status == SolveStatus::Converged);
    const auto [K, G] = optimal_control_set(sigma, rep.X_bar, kTol);
    CHECK(G.cwiseAbs().maxCoeff() < 1e-10);
    (void)K;
}

TEST_CASE("simulate_cost agrees with the optimal cost on the worked example") {
    const PopovTriple sigma = example_triple();
    const auto [K, G] = optimal_control_set(sigma, example_solution(), kTol);
    Vector x0(2);
    x0 << 3, 2;

    CHECK(std::abs(simulate_cost(sigma, K, G, Matrix::Zero(2, 2), x0, 50) - 4.0) < 1e-10);

    Matrix L(2, 2);
    L << -1, 0, 0, 0;
    CHECK(std::abs(simulate_cost(sigma, K, G, L, x0, 50) - 4.0) < 1e-10);

    CHECK(simulate_cost(sigma, K, G, Matrix::Zero(2, 2), Vector::Zero(2), 50) ==
          doctest::Approx(0.0));
}

TEST_CASE("simulated cost of the optimal loop matches x0^T X x0 on random triples") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const PopovTriple sigma = random_regular_triple(rng, 3, 2);
        const SolveReport rep = solve_min_psd(sigma, kTol);
        if (rep.status != SolveStatus::Converged) continue;
        const auto [K, G] = optimal_control_set(sigma, rep.X_bar, kTol);
        const Vector x0 = random_matrix(rng, 3, 1);
        const double j_star = optimal_cost(rep.X_bar, x0);
        const double j_sim = simulate_cost(sigma, K, G, Matrix::Zero(2, 3), x0, 400);
        CHECK(std::abs(j_sim - j_star) <= 1e-6 * (1.0 + j_star));
    }
}

TEST_CASE("random stabilizing feedback never beats the optimal cost") {
    std::mt19937 rng(88);
    int compared = 0;
    for (int trial = 0; trial < 40 && compared < 10; ++trial) {
        const PopovTriple sigma = random_regular_triple(rng, 3, 2);
        const SolveReport rep = solve_min_psd(sigma, kTol);
        if (rep.status != SolveStatus::Converged) continue;
        const auto [K, G] = optimal_control_set(sigma, rep.X_bar, kTol);
        const Matrix K_alt = K + 0.05 * random_matrix(rng, 2, 3);
        const Eigen::EigenSolver<Matrix> es(sigma.A() - sigma.B() * K_alt);
        if (es.eigenvalues().cwiseAbs().maxCoeff() >= 0.98) continue;
        const Vector x0 = random_matrix(rng, 3, 1);
        const double j_star = optimal_cost(rep.X_bar, x0);
        const double j_alt =
            simulate_cost(sigma, K_alt, Matrix::Zero(2, 2), Matrix::Zero(2, 3), x0, 400);
        CHECK(j_alt >= j_star - 1e-8);
        ++compared;
        (void)G;
    }
    CHECK(compared >= 10);
}

TEST_CASE("simulate_cost throws on a diverging trajectory") {
    // A = 2 with no feedback
    const PopovTriple sigma(Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 1.0),
                            Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0),
                            Matrix::Zero(1, 1), kTol);
    CHECK_THROWS_AS(simulate_cost(sigma, Matrix::Zero(1, 1), Matrix::Zero(1, 1),
                                  Matrix::Zero(1, 1), Vector::Ones(1), 200),
                    DivergentTrajectory);
}

TEST_CASE("trace is recorded when requested") {
    SolveOptions opts;
    opts.keep_trace = true;
    const SolveReport rep = solve_min_psd(example_triple(), kTol, opts);
    REQUIRE(rep.status == SolveStatus::Converged);
    CHECK(static_cast<int>(rep.trace.size()) == rep.iterations);
    CHECK(rep.trace.front() > 0.0);
}
