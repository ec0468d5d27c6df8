#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <vector>

#include "dplap/core.hpp"
#include "dplap/nonlinearities.hpp"
#include "dplap/parallel.hpp"
#include "dplap/rng.hpp"

using namespace dplap;
using doctest::Approx;

namespace {

GridFunction grid(std::vector<double> full) { return GridFunction::from_values(full); }

}  // namespace

TEST_CASE("grid functions keep zero boundary values") {
    GridFunction u(3);
    CHECK(u.values().size() == 5);
    CHECK(u[0] == 0.0);
    CHECK(u[4] == 0.0);
    u.set(2, 1.5);
    CHECK(u[2] == 1.5);
    CHECK_THROWS_AS(u.set(0, 1.0), std::out_of_range);
    CHECK_THROWS_AS(u.set(4, 1.0), std::out_of_range);
    CHECK_THROWS_AS(GridFunction(1), std::invalid_argument);
    CHECK_THROWS_AS(grid({1.0, 0.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(grid({0.0, 0.0, 0.0, 2.0}), std::invalid_argument);

    const std::vector<double> w{1.0, -2.0, 3.0};
    const auto v = GridFunction::from_interior(w);
    CHECK(v.T() == 3);
    CHECK(v.values()[4] == 0.0);
    CHECK(v.scaled(2.0)[3] == 6.0);
    const std::vector<double> dir{1.0, 1.0, 1.0};
    CHECK(v.stepped(0.5, dir)[2] == -1.5);
}

TEST_CASE("problem spec validates T and p") {
    CHECK_NOTHROW(ProblemSpec(2, 1.01, nonlinearities::zero()));
    CHECK_THROWS_AS(ProblemSpec(1, 2.0, nonlinearities::zero()), std::invalid_argument);
    CHECK_THROWS_AS(ProblemSpec(3, 1.0, nonlinearities::zero()), std::invalid_argument);
    CHECK_THROWS_WITH(ProblemSpec(3, 0.5, nonlinearities::zero()), "p must exceed 1");
}

TEST_CASE("phi_p") {
    CHECK(phi_p(0.0, 1.5) == 0.0);
    CHECK(phi_p(3.0, 2.0) == 3.0);
    CHECK(phi_p(-2.0, 3.0) == Approx(-4.0));
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> s(-5.0, 5.0);
    for (double p : {1.1, 1.5, 2.0, 3.0, 7.0}) {
        for (int i = 0; i < 200; ++i) {
            const double a = s(gen);
            const double b = s(gen);
            CHECK(phi_p(-a, p) == -phi_p(a, p));
            if (a < b) CHECK(phi_p(a, p) < phi_p(b, p));
        }
    }
}

TEST_CASE("forward difference") {
    const auto d0 = forward_difference(grid({0, 0, 0, 0}));
    CHECK(d0 == std::vector<double>{0, 0, 0});
    CHECK(forward_difference(grid({0, 1, 0, 0})) == std::vector<double>{1, -1, 0});
    CHECK(forward_difference(grid({0, 1, 2, 0})) == std::vector<double>{1, 1, -2});
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> s(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> w(7);
        for (double& x : w) x = s(gen);
        double sum = 0.0;
        for (double d : forward_difference(GridFunction::from_interior(w))) sum += d;
        CHECK(std::abs(sum) < 1e-13);
    }
}

TEST_CASE("p-norm and sup norm") {
    CHECK(p_norm(GridFunction(2), 2.0) == 0.0);
    CHECK(p_norm(grid({0, 1, 0, 0}), 2.0) == Approx(std::sqrt(2.0)));
    CHECK(p_norm(grid({0, 1, 2, 0}), 3.0) == Approx(std::cbrt(10.0)));
    CHECK(p_norm_pow(grid({0, 1, 2, 0}), 3.0) == Approx(10.0));
    CHECK(sup_norm(GridFunction(2)) == 0.0);
    CHECK(sup_norm(grid({0, -3, 1, 0})) == 3.0);

    const auto u = grid({0, 0.3, -1.2, 2.0, 0});
    for (double c : {-2.5, 0.5, 3.0})
        for (double p : {1.5, 2.0, 4.0}) CHECK(p_norm(u.scaled(c), p) == Approx(std::abs(c) * p_norm(u, p)));
    CHECK(sup_distance(u, u.scaled(2.0)) == Approx(2.0));
}

TEST_CASE("kappa and c(p,T) closed values") {
    CHECK(kappa(2.0, 2) == Approx(std::sqrt(1.5)).epsilon(1e-15));
    CHECK(kappa(2.0, 3) == Approx(1.0).epsilon(1e-15));
    CHECK(kappa(3.0, 4) == Approx(std::cbrt(13.0 / 36.0)).epsilon(1e-15));
    CHECK(c_const(2.0, 2) == Approx(0.75).epsilon(1e-15));
    CHECK(c_const(2.0, 3) == Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(kappa(1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(c_const(2.0, 1), std::invalid_argument);
}

TEST_CASE("c(p,T) equals kappa^p/p for both parities") {
    for (double p : {1.1, 1.5, 2.0, 3.0, 10.0})
        for (int T = 2; T <= 100; ++T) {
            const double lhs = c_const(p, T);
            const double rhs = std::pow(kappa(p, T), p) / p;
            CHECK(std::abs(lhs - rhs) <= 1e-14 * rhs);
        }
}

TEST_CASE("theta and the embedding-constant inequality") {
    CHECK(theta(2.0, 2.0, 3) == Approx(1.0));
    CHECK(theta(1.0, 2.0, 2) == Approx(1.5));
    CHECK_THROWS_AS(theta(0.0, 2.0, 3), std::domain_error);
    CHECK_THROWS_AS(theta(4.0, 2.0, 3), std::domain_error);

    for (double p : {1.1, 1.5, 2.0, 3.0, 10.0})
        for (int T : {2, 3, 4, 7, 10, 51}) {
            const double mid = (T + 1) / 2.0;
            CHECK(theta(mid, p, T) == Approx(std::pow(2.0, p) / std::pow(T + 1.0, p - 1.0)).epsilon(1e-13));
            if (T % 2 == 0) CHECK(theta(mid, p, T) < theta(T / 2.0, p, T));
            // strict convexity and the minimum location, sampled
            const int n = 400;
            const double h = (T + 1.0) / n;
            for (int i = 2; i < n - 1; ++i) {
                const double s = i * h;
                CHECK(theta(s - h, p, T) - 2 * theta(s, p, T) + theta(s + h, p, T) > 0.0);
                CHECK(theta(s, p, T) >= theta(mid, p, T) * (1 - 1e-15));
            }
            const double lhs = std::pow(std::pow(2.0 / T, p - 1) + std::pow(2.0 / (T + 2.0), p - 1), -1.0 / p);
            const double rhs = std::pow(T + 1.0, (p - 1) / p) / 2.0;
            const auto cmp = compare_embedding_constants(p, T);
            CHECK(cmp.even_side == Approx(lhs).epsilon(1e-14));
            CHECK(cmp.odd_side == Approx(rhs).epsilon(1e-14));
            CHECK(cmp.margin() > 0.0);
        }
}

TEST_CASE("discrete embedding holds on random samples and is sharp for tents") {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<int> size(2, 40);
    std::uniform_real_distribution<double> exponent(1.05, 9.0);
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const int T = size(gen);
        const double p = exponent(gen);
        std::vector<double> w(T);
        for (double& x : w) x = value(gen);
        const auto u = GridFunction::from_interior(w);
        CHECK(sup_norm(u) * kappa(p, T) <= p_norm(u, p) * (1 + 1e-12));
    }
    // tents peaked at the middle attain equality
    for (double p : {1.5, 2.0, 3.0})
        for (int T : {2, 3, 4, 9, 10}) {
            const int m = (T + 1) / 2;
            GridFunction tent(T);
            for (int k = 1; k <= T; ++k) tent.set(k, k <= m ? double(k) / m : double(T + 1 - k) / (T + 1 - m));
            CHECK(kappa(p, T) == Approx(p_norm(tent, p)).epsilon(1e-13));
        }
}

TEST_CASE("built-in potentials vanish at 0 and agree with quadrature") {
    const std::vector<double> samples{-3.0, -0.7, -1e-3, 1e-6, 0.2, 1.0, 4.5};
    const std::vector<Nonlinearity> all{
        nonlinearities::zero(),          nonlinearities::constant(1.7),
        nonlinearities::linear(0.5),     nonlinearities::power(2.0, 3.0),
        nonlinearities::power(1.0, 0.5), nonlinearities::bounded_rational(1.0),
        nonlinearities::table({-1.0, 0.0, 2.0}, {{0.0, 1.0, -1.0}}),
        nonlinearities::scaled_per_node(nonlinearities::bounded_rational(), {1.0, 2.0, 0.5}),
    };
    for (const auto& nl : all) {
        CHECK(nl.has_closed_form_potential());
        for (int k = 1; k <= 3; ++k) CHECK(nl.potential(k, 0.0) == 0.0);
        CHECK(nl.potential_consistency(3, samples) <= 1e-8);
    }
    const auto br = nonlinearities::bounded_rational();
    CHECK(br.potential(1, 1.0) == Approx(0.5 * std::log(2.0)));
    CHECK(br.f(2, 2.0) == Approx(0.4));
}

TEST_CASE("quadrature-backed potential") {
    const auto nl = Nonlinearity::from_function([](int k, double t) { return k * std::cos(t); }, false);
    CHECK_FALSE(nl.has_closed_form_potential());
    CHECK(nl.potential(1, 0.0) == 0.0);
    CHECK(nl.potential(2, 1.3) == Approx(2.0 * std::sin(1.3)).epsilon(1e-12));
    CHECK(nl.potential(1, -0.4) == Approx(std::sin(-0.4)).epsilon(1e-12));
    CHECK(nl.potential(1, 1e-11) == Approx(1e-11).epsilon(1e-9));
    CHECK(nl.df(1, 0.5) == Approx(-std::sin(0.5)).epsilon(1e-6));

    // memoized values are shared safely between workers
    std::vector<double> seen(64);
    parallel_for(seen.size(), [&](std::size_t i) { seen[i] = nl.potential(1 + int(i % 3), 0.1 * double(i % 7)); });
    for (std::size_t i = 0; i < seen.size(); ++i)
        CHECK(seen[i] == Approx((1 + int(i % 3)) * std::sin(0.1 * double(i % 7))).epsilon(1e-12));

    const auto wild = Nonlinearity::from_function([](int, double t) { return 1.0 / std::abs(t - 0.5); }, true);
    CHECK_THROWS_AS(wild.potential(1, 1.0), QuadratureError);
}

TEST_CASE("truncation at zero") {
    const auto lin = nonlinearities::linear(1.0).truncated();
    CHECK(lin.is_truncated());
    CHECK(lin.f(1, -1.0) == 0.0);
    CHECK(lin.f(1, 2.0) == 2.0);
    const auto br = nonlinearities::bounded_rational().truncated();
    CHECK(br.f(1, -5.0) == 0.0);
    CHECK(br.potential(1, -5.0) == 0.0);
    const auto affine = Nonlinearity::with_potential([](int, double t) { return 1.0 + t; },
                                                     [](int, double x) { return x + 0.5 * x * x; }, true)
                            .truncated();
    CHECK(affine.f(1, -2.0) == 1.0);
    CHECK(affine.potential(1, -2.0) == -2.0);
    CHECK(affine.potential(1, 2.0) == 4.0);
    CHECK(affine.is_nonnegative());

    const auto quad = Nonlinearity::from_function([](int, double t) { return 2.0 + t; }, true).truncated();
    CHECK(quad.potential(1, -1.0) == Approx(-2.0));
    CHECK(quad.potential(1, 1.0) == Approx(2.5));
}

TEST_CASE("nonnegativity flags of built-ins") {
    CHECK(nonlinearities::zero().is_nonnegative());
    CHECK(nonlinearities::constant(2.0).is_nonnegative());
    CHECK_FALSE(nonlinearities::constant(-1.0).is_nonnegative());
    CHECK(nonlinearities::bounded_rational(1.0).is_nonnegative());
    CHECK_FALSE(nonlinearities::linear(-1.0).is_nonnegative());
    CHECK(nonlinearities::table({0.0, 1.0}, {{0.0, 1.0}}).is_nonnegative());
    CHECK_FALSE(nonlinearities::table({0.0, 1.0}, {{0.0, -1.0}}).is_nonnegative());
    CHECK_THROWS_AS(nonlinearities::table({1.0, 0.0}, {{0.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("counter-based generator is reproducible") {
    CounterRng a(9, 3);
    CounterRng b(9, 3);
    CounterRng c(9, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        differs = differs || x != c.uniform();
    }
    CHECK(differs);
}

TEST_CASE("parallel_for visits each index once and rethrows") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    CHECK(thread_count() >= 1);
}
