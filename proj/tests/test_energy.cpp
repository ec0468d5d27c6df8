#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dplap/energy.hpp"
#include "dplap/nonlinearities.hpp"
#include "dplap/spectrum.hpp"
#include "oracles.hpp"

using namespace dplap;
using doctest::Approx;

namespace {

GridFunction grid(std::vector<double> full) { return GridFunction::from_values(full); }

std::vector<double> full_values(const GridFunction& u) { return {u.values().begin(), u.values().end()}; }

Nonlinearity square() {
    return Nonlinearity::with_potential([](int, double t) { return t * t; },
                                        [](int, double x) { return x * x * x / 3.0; }, true,
                                        [](int, double t) { return 2.0 * t; });
}

GridFunction random_grid(std::mt19937_64& gen, int T, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> w(T);
    for (double& x : w) x = d(gen);
    return GridFunction::from_interior(w);
}

}  // namespace

TEST_CASE("energy examples") {
    const ProblemSpec zero(2, 2.0, nonlinearities::zero());
    const ProblemSpec one(2, 2.0, nonlinearities::constant(1.0));
    CHECK(energy(GridFunction(2), ProblemSpec(2, 3.0, nonlinearities::bounded_rational()), 0.7) == 0.0);
    CHECK(energy(grid({0, 1, 0, 0}), zero, 1.0) == Approx(1.0));
    CHECK(energy(grid({0, 1, 2, 0}), one, 1.0) == Approx(0.0));
    CHECK_THROWS_AS(energy(GridFunction(2), zero, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(energy(GridFunction(3), zero, 1.0), std::invalid_argument);
}

TEST_CASE("energy matches the defining sums") {
    std::mt19937_64 gen(4);
    const auto nl = nonlinearities::bounded_rational(1.5);
    for (double p : {1.3, 2.0, 3.5})
        for (int T : {2, 6}) {
            const ProblemSpec prob(T, p, nl);
            for (int i = 0; i < 10; ++i) {
                const auto u = random_grid(gen, T, -2, 2);
                const double ref =
                    oracle::energy(full_values(u), p, 0.8, [](int, double x) { return 0.75 * std::log1p(x * x); });
                CHECK(energy(u, prob, 0.8) == Approx(ref).epsilon(1e-12));
            }
        }
}

TEST_CASE("gradient examples") {
    const ProblemSpec zero(2, 2.0, nonlinearities::zero());
    CHECK(gradient(GridFunction(2), zero, 1.0) == std::vector<double>{0.0, 0.0});
    const auto g = gradient(grid({0, 1, 0, 0}), zero, 1.0);
    CHECK(g[0] == Approx(2.0));
    CHECK(g[1] == Approx(-1.0));
}

TEST_CASE("gradient agrees with central finite differences") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> step(0.01, 0.9);
    std::bernoulli_distribution sign(0.5);
    const auto nl = square();
    auto F = [](int, double x) { return x * x * x / 3.0; };
    for (double p : {1.5, 2.0, 3.0, 4.0})
        for (int T : {2, 5, 10}) {
            const ProblemSpec prob(T, p, nl);
            for (int s = 0; s < 50; ++s) {
                // walk with steps away from 0 so no difference sits on a kink
                std::vector<double> w(T);
                double acc = 0.0;
                do {
                    acc = 0.0;
                    for (double& x : w) {
                        acc += sign(gen) ? step(gen) : -step(gen);
                        x = std::clamp(acc, -2.0, 2.0);
                        acc = x;
                    }
                } while (std::abs(acc) < 0.01);
                bool kink = false;
                for (int k = 1; k < T; ++k) kink = kink || std::abs(w[k] - w[k - 1]) < 1e-3;
                if (kink && p < 2.0) continue;
                const auto u = GridFunction::from_interior(w);
                const auto g = gradient(u, prob, 1.0);
                auto J = [&](const std::vector<double>& x) {
                    std::vector<double> full(T + 2, 0.0);
                    std::copy(x.begin(), x.end(), full.begin() + 1);
                    return oracle::energy(full, p, 1.0, F);
                };
                const auto fd = oracle::fd_gradient(J, w, 1e-6 * (1.0 + sup_norm(u)));
                double diff = 0.0, scale = 0.0;
                for (int k = 0; k < T; ++k) {
                    diff = std::max(diff, std::abs(fd[k] - g[k]));
                    scale = std::max(scale, std::abs(fd[k]));
                }
                CHECK(diff <= 1e-6 * scale);
            }
        }
}

TEST_CASE("strong residual") {
    const ProblemSpec one(3, 2.0, nonlinearities::constant(1.0));
    CHECK(strong_residual(GridFunction(3), one, 1.0) == Approx(1.0));
    CHECK(strong_residual(GridFunction(3), ProblemSpec(3, 2.5, nonlinearities::bounded_rational()), 1.0) == 0.0);
    // A u = (1,1,1) has the solution (3/2, 2, 3/2)
    CHECK(strong_residual(grid({0, 1.5, 2, 1.5, 0}), one, 1.0) <= 1e-15);
    std::mt19937_64 gen(6);
    const ProblemSpec prob(6, 2.7, nonlinearities::bounded_rational());
    for (int i = 0; i < 20; ++i) {
        const auto u = random_grid(gen, 6, -2, 2);
        const double ref = oracle::strong_residual(full_values(u), 2.7, 1.1,
                                                   [](int, double t) { return t / (1 + t * t); });
        CHECK(strong_residual(u, prob, 1.1) == Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("weak residual and summation by parts") {
    std::mt19937_64 gen(7);
    const ProblemSpec prob(5, 3.0, nonlinearities::bounded_rational());
    for (int i = 0; i < 20; ++i) {
        const auto u = random_grid(gen, 5, -2, 2);
        CHECK(weak_residual(u, GridFunction(5), prob, 1.3) == 0.0);
        const auto g = gradient(u, prob, 1.3);
        for (int k = 1; k <= 5; ++k) {
            GridFunction e(5);
            e.set(k, 1.0);
            CHECK(weak_residual(u, e, prob, 1.3) == Approx(g[k - 1]).epsilon(1e-12).scale(1.0));
        }
    }
    CHECK_THROWS_AS(weak_residual(GridFunction(5), GridFunction(4), prob, 1.0), std::invalid_argument);

    // u = (1,1) solves the T = 2, p = 2, f = 1 problem
    const ProblemSpec one(2, 2.0, nonlinearities::constant(1.0));
    const auto u = grid({0, 1, 1, 0});
    for (int i = 0; i < 100; ++i) {
        const auto v = random_grid(gen, 2, -5, 5);
        CHECK(std::abs(weak_residual(u, v, one, 1.0)) <= 1e-10 * (1 + p_norm(v, 2.0)));
    }
}

TEST_CASE("p-homogeneity of the Dirichlet energy") {
    std::mt19937_64 gen(8);
    for (double p : {1.5, 2.0, 4.0}) {
        const ProblemSpec prob(4, p, nonlinearities::zero());
        const auto u = random_grid(gen, 4, -1, 1);
        for (double c : {-3.0, 0.5, 2.0})
            CHECK(energy(u.scaled(c), prob, 1.0) == Approx(std::pow(std::abs(c), p) * energy(u, prob, 1.0)));
    }
}

TEST_CASE("energy report") {
    const ProblemSpec one(3, 2.0, nonlinearities::constant(1.0));
    const auto r = energy_report(GridFunction(3), one, 2.0);
    CHECK(r.value == 0.0);
    CHECK(r.strong_residual == Approx(2.0));
    CHECK(r.grad_norm == Approx(2.0));
    CHECK(r.alpha == 2.0);
}

TEST_CASE("p = 2 Hessian") {
    const auto a = hessian_p2(GridFunction(3), ProblemSpec(3, 2.0, nonlinearities::zero()), 1.0);
    const double expected[3][3] = {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(a.at(i, j) == expected[i][j]);
    CHECK(a.is_symmetric());

    const auto b = hessian_p2(grid({0, 0.3, -7, 0}), ProblemSpec(2, 2.0, nonlinearities::linear(1.0)), 1.0);
    CHECK(b.at(0, 0) == Approx(1.0));
    CHECK(b.at(1, 1) == Approx(1.0));
    CHECK(b.at(0, 1) == -1.0);

    CHECK_THROWS_AS(hessian_p2(GridFunction(3), ProblemSpec(3, 3.0, nonlinearities::zero()), 1.0),
                    std::invalid_argument);

    // columns against finite differences of the gradient
    std::mt19937_64 gen(9);
    const ProblemSpec prob(6, 2.0, square());
    for (int i = 0; i < 10; ++i) {
        const auto u = random_grid(gen, 6, -2, 2);
        const auto h = hessian_p2(u, prob, 0.9);
        const double step = 1e-6;
        for (int j = 0; j < 6; ++j) {
            std::vector<double> e(6, 0.0);
            e[j] = 1.0;
            const auto gp = gradient(u.stepped(step, e), prob, 0.9);
            const auto gm = gradient(u.stepped(-step, e), prob, 0.9);
            for (int r = 0; r < 6; ++r) {
                const double fd = (gp[r] - gm[r]) / (2 * step);
                CHECK(std::abs(fd - h.at(r, j)) <= 1e-5 * (1 + std::abs(h.at(r, j))));
            }
        }
    }

    // with f ≡ 0 the Hessian is A, positive definite
    for (int T : {2, 5, 30}) {
        const auto m = hessian_p2(GridFunction(T), ProblemSpec(T, 2.0, nonlinearities::zero()), 1.0);
        const std::vector<double> rhs(T, 1.0);
        CHECK(m.solve_positive_definite(rhs).has_value());
    }
}

TEST_CASE("tridiagonal solves") {
    Tridiagonal m(4);
    m.diag = {4, 5, 6, 7};
    m.lower = {1, -2, 0.5};
    m.upper = {1, -2, 0.5};
    const std::vector<double> x{1, -1, 2, 0.5};
    const auto b = m.multiply(x);
    const auto y = m.solve(b);
    const auto z = m.solve_positive_definite(b);
    REQUIRE(y);
    REQUIRE(z);
    for (int i = 0; i < 4; ++i) {
        CHECK((*y)[i] == Approx(x[i]).epsilon(1e-13));
        CHECK((*z)[i] == Approx(x[i]).epsilon(1e-13));
    }
    Tridiagonal indefinite(2);
    indefinite.diag = {1, -1};
    CHECK_FALSE(indefinite.solve_positive_definite(std::vector<double>{1, 1}).has_value());
    Tridiagonal singular(2);
    CHECK_FALSE(singular.solve(std::vector<double>{1, 1}).has_value());
}
