#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dplap/spectrum.hpp"
#include "oracles.hpp"

using namespace dplap;
using doctest::Approx;

namespace {

GridFunction interior(std::vector<double> w) { return GridFunction::from_interior(w); }

double power_sum(const GridFunction& u, double p) {
    double s = 0.0;
    for (double x : u.interior()) s += std::pow(std::abs(x), p);
    return s;
}

double dirichlet_sum(const GridFunction& u, double p) {
    double s = 0.0;
    for (double d : forward_difference(u)) s += std::pow(std::abs(d), p);
    return s;
}

}  // namespace

TEST_CASE("rayleigh quotient") {
    CHECK(rayleigh_quotient(interior({1, 0}), 2.0) == Approx(2.0));
    CHECK(rayleigh_quotient(interior({1, 1}), 2.0) == Approx(1.0));
    CHECK_THROWS_AS(rayleigh_quotient(GridFunction(3), 2.0), std::invalid_argument);

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> d(-1, 1);
    for (double p : {1.5, 2.0, 3.0}) {
        std::vector<double> w(5);
        for (double& x : w) x = d(gen);
        const auto u = interior(w);
        const double r = rayleigh_quotient(u, p);
        for (double c : {-4.0, 0.01, 7.0}) CHECK(rayleigh_quotient(u.scaled(c), p) == Approx(r).epsilon(1e-13));
    }
}

TEST_CASE("p = 2 spectrum") {
    CHECK_THROWS_AS(matrix_A(1), std::invalid_argument);
    const auto a = matrix_A(4);
    CHECK(a.at(0, 0) == 2.0);
    CHECK(a.at(0, 1) == -1.0);
    CHECK(a.at(1, 0) == -1.0);
    CHECK(a.at(0, 2) == 0.0);
    CHECK(a.is_symmetric());

    const auto t3 = eigenvalues_p2(3);
    REQUIRE(t3.size() == 3);
    CHECK(t3[0] == Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK(t3[1] == Approx(2.0).epsilon(1e-14));
    CHECK(t3[2] == Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
    const auto t2 = eigenvalues_p2(2);
    CHECK(t2[0] == Approx(1.0).epsilon(1e-14));
    CHECK(t2[1] == Approx(3.0).epsilon(1e-14));
    CHECK(lambda1_closed_form_p2(5) == Approx(2.0 - std::sqrt(3.0)).epsilon(1e-14));

    const double small = lambda1_closed_form_p2(200);
    const double angle = std::numbers::pi / 201.0;
    CHECK(std::abs(small - angle * angle) <= angle * angle * angle * angle / 12.0 * 1.01);

    for (int T : {2, 3, 7, 20, 64}) {
        const auto ref = oracle::dirichlet_laplacian_eigenvalues(T);
        const auto closed = eigenvalues_p2(T);
        const auto bis = symmetric_tridiagonal_eigenvalues(matrix_A(T));
        for (int k = 0; k < T; ++k) {
            CHECK(closed[k] == Approx(ref[k]).epsilon(1e-10));
            CHECK(bis[k] == Approx(ref[k]).epsilon(1e-10));
        }
    }
}

TEST_CASE("bisection eigenvalues of a general symmetric tridiagonal") {
    Tridiagonal m(5);
    m.diag = {1, -2, 3.5, 0, 4};
    m.lower = m.upper = {0.3, -1, 2, 0.7};
    Eigen::VectorXd diag(5), off(4);
    for (int i = 0; i < 5; ++i) diag[i] = m.diag[i];
    for (int i = 0; i < 4; ++i) off[i] = m.lower[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    const auto ev = symmetric_tridiagonal_eigenvalues(m);
    for (int i = 0; i < 5; ++i) CHECK(ev[i] == Approx(solver.eigenvalues()[i]).epsilon(1e-10));
}

TEST_CASE("first eigenpair for p = 2 matches the closed form") {
    for (int T = 2; T <= 50; ++T) {
        const auto pair = first_eigenpair(2.0, T);
        CHECK(pair.lambda == Approx(lambda1_closed_form_p2(T)).epsilon(1e-9));
        CHECK(pair.residual <= 1e-9);
        CHECK(power_sum(pair.phi, 2.0) == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("first eigenpair properties") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> d(-1, 1);
    for (double p : {1.5, 2.5, 3.0, 4.0}) {
        double previous = INFINITY;
        for (int T : {2, 3, 4, 5, 8, 13}) {
            const auto pair = first_eigenpair(p, T);
            const auto& phi = pair.phi;
            CHECK(pair.residual <= 1e-9);
            CHECK(eigen_residual(phi, pair.lambda, p) == Approx(pair.residual).epsilon(1e-6).scale(1e-12));
            CHECK(power_sum(phi, p) == Approx(1.0).epsilon(1e-10));
            for (int k = 1; k <= T; ++k) CHECK(phi[k] > 0.0);
            for (int k = 1; k <= T; ++k) CHECK(std::abs(phi[k] - phi[T + 1 - k]) <= 1e-7);
            // Σ|Δφ|^p = λ Σ|φ|^p at an eigenfunction
            CHECK(dirichlet_sum(phi, p) == Approx(pair.lambda).epsilon(1e-8));
            CHECK(pair.lambda < previous);
            previous = pair.lambda;

            std::vector<double> w(T);
            for (int s = 0; s < 200; ++s) {
                for (double& x : w) x = d(gen);
                CHECK(rayleigh_quotient(interior(w), p) >= pair.lambda - 1e-9);
            }
        }
    }
}

TEST_CASE("first eigenpair for p < 2 and even T") {
    for (int T : {2, 4, 6, 10}) {
        const auto pair = first_eigenpair(1.5, T);
        CHECK(pair.residual <= 1e-9);
        CHECK(rayleigh_quotient(pair.phi, 1.5) == Approx(pair.lambda).epsilon(1e-8));
    }
    const auto two = oracle::grid_minimize_1d(
        [](double b) { return rayleigh_quotient(interior({1.0, b}), 1.5); }, 0.0, 3.0, 3001, 3);
    CHECK(first_eigenpair(1.5, 2).lambda == Approx(two.value).epsilon(1e-9));
    const auto four = oracle::grid_minimize_1d([](double b) { return oracle::symmetric_rayleigh_t4(b, 1.5); }, 0.0,
                                               4.0, 20001, 4);
    CHECK(first_eigenpair(1.5, 4).lambda == Approx(four.value).epsilon(1e-8));
}

TEST_CASE("p = 3, T = 4 against the symmetric sector") {
    const auto pair = first_eigenpair(3.0, 4);
    const auto grid = oracle::grid_minimize_1d([](double b) { return oracle::symmetric_rayleigh_t4(b, 3.0); }, 0.0,
                                               4.0, 20001, 4);
    CHECK(pair.lambda == Approx(grid.value).epsilon(1e-8));
    CHECK(pair.phi[2] / pair.phi[1] == Approx(grid.x).epsilon(1e-5));
}

TEST_CASE("eigen residual and convergence failure") {
    const auto pair = first_eigenpair(2.0, 3);
    CHECK(eigen_residual(pair.phi, pair.lambda + 0.1, 2.0) > 0.01);
    CHECK_THROWS_AS(first_eigenpair(0.9, 3), std::invalid_argument);
    CHECK_THROWS_AS(first_eigenpair(2.0, 1), std::invalid_argument);

    SolverOptions opts = SolverOptions::eigen_defaults();
    opts.max_iters = 1;
    opts.tol = 1e-300;
    try {
        (void)first_eigenpair(3.0, 9, opts);
        FAIL("expected EigenConvergenceError");
    } catch (const EigenConvergenceError& e) {
        CHECK(e.best().phi.T() == 9);
        CHECK(e.best().residual > 0.0);
        CHECK(std::isfinite(e.best().lambda));
    }
}
