#include "dplap/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "dplap/energy.hpp"

namespace dplap {

namespace {

double power_sum(const GridFunction& u, double p) {
    double s = 0.0;
    for (double x : u.interior()) s += std::pow(std::abs(x), p);
    return s;
}

GridFunction normalized(const GridFunction& u, double p) {
    return u.scaled(1.0 / std::pow(power_sum(u, p), 1.0 / p));
}

/// r_k = -Δ(φ_p(Δu(k-1))) - λ φ_p(u(k)); equals ∇R(u)/p when Σ|u|^p = 1.
std::vector<double> eigen_defect(const GridFunction& u, double lambda, double p) {
    auto r = p_laplacian(u, p);
    for (int k = 1; k <= u.T(); ++k) r[k - 1] -= lambda * phi_p(u[k], p);
    return r;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double squared_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

double rayleigh_quotient(const GridFunction& u, double p) {
    validate_exponent(p);
    const double denominator = power_sum(u, p);
    if (denominator == 0.0) throw std::invalid_argument("rayleigh_quotient: u must not vanish identically");
    return p_norm_pow(u, p) / denominator;
}

std::vector<double> eigenvalues_p2(int T) {
    validate_size(T);
    std::vector<double> out(static_cast<std::size_t>(T));
    for (int k = 1; k <= T; ++k) {
        const double s = std::sin(k * std::numbers::pi / (2.0 * (T + 1)));
        out[k - 1] = 4.0 * s * s;
    }
    return out;
}

double lambda1_closed_form_p2(int T) {
    validate_size(T);
    const double s = std::sin(std::numbers::pi / (2.0 * (T + 1)));
    return 4.0 * s * s;
}

Tridiagonal matrix_A(int T) {
    validate_size(T);
    Tridiagonal a(static_cast<std::size_t>(T));
    std::fill(a.diag.begin(), a.diag.end(), 2.0);
    std::fill(a.lower.begin(), a.lower.end(), -1.0);
    std::fill(a.upper.begin(), a.upper.end(), -1.0);
    return a;
}

namespace {

/// Number of eigenvalues strictly below x.
std::size_t sturm_count(const Tridiagonal& m, double x) {
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double off = i > 0 ? m.lower[i - 1] : 0.0;
        q = m.diag[i] - x - (i > 0 ? off * off / q : 0.0);
        if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
        if (q < 0.0) ++count;
    }
    return count;
}

}  // namespace

std::vector<double> symmetric_tridiagonal_eigenvalues(const Tridiagonal& m) {
    if (!m.is_symmetric()) throw std::invalid_argument("matrix is not symmetric");
    const std::size_t n = m.size();
    // Gershgorin bounds
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(m.lower[i - 1]);
        if (i + 1 < n) radius += std::abs(m.upper[i]);
        lo = std::min(lo, m.diag[i] - radius);
        hi = std::max(hi, m.diag[i] + radius);
    }
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double a = lo;
        double b = hi;
        for (int it = 0; it < 200 && b - a > 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)); ++it) {
            const double mid = 0.5 * (a + b);
            if (mid == a || mid == b) break;
            if (sturm_count(m, mid) > k) b = mid;
            else a = mid;
        }
        out[k] = 0.5 * (a + b);
    }
    return out;
}

namespace {

/// Solves φ_p(Δu(k)) = φ_p(Δu(k-1)) - λ φ_p(u(k)) forward from u(0) = 0, u(1) = 1.
/// Returns nodes 0..T+1 (the last one is the shooting mismatch).
std::vector<double> shoot(double lambda, double p, int T) {
    std::vector<double> u(static_cast<std::size_t>(T) + 2, 0.0);
    u[1] = 1.0;
    double flux = 1.0;  // φ_p(Δu(0))
    for (int k = 1; k <= T; ++k) {
        flux -= lambda * phi_p(u[k], p);
        u[k + 1] = u[k] + phi_p(flux, p / (p - 1.0));
    }
    return u;
}

bool stays_positive(const std::vector<double>& u) {
    return std::all_of(u.begin() + 1, u.end(), [](double x) { return x > 0.0; });
}

/// Positive eigenpair by bisection on λ: below λ₁ the shot stays positive through T+1
/// and above it the shot changes sign.
std::optional<EigenPair> shooting_refine(double p, int T, double guess) {
    double lo = 0.0;
    double hi = std::max(guess, 1e-3);
    for (int i = 0; i < 200 && stays_positive(shoot(hi, p, T)); ++i) hi *= 2.0;
    if (stays_positive(shoot(hi, p, T))) return std::nullopt;
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (stays_positive(shoot(mid, p, T)) ? lo : hi) = mid;
    }
    auto values = shoot(lo, p, T);
    values.back() = 0.0;
    // φ₁ is reflection-symmetric; for p > 2 a vanishing middle difference is only fixed to √eps.
    for (int k = 1; 2 * k <= T + 1; ++k) values[k] = values[T + 1 - k] = 0.5 * (values[k] + values[T + 1 - k]);
    GridFunction u = normalized(GridFunction::from_values(values), p);
    const double lambda = p_norm_pow(u, p);
    const double res = eigen_residual(u, lambda, p);
    return EigenPair{lambda, std::move(u), res, 0};
}

}  // namespace

double eigen_residual(const GridFunction& u, double lambda, double p) {
    return max_abs(eigen_defect(u, lambda, p));
}

EigenPair first_eigenpair(double p, int T, const SolverOptions& opts) {
    validate_exponent(p);
    validate_size(T);
    opts.validate();

    std::vector<double> start(static_cast<std::size_t>(T));
    for (int k = 1; k <= T; ++k) start[k - 1] = std::sin(k * std::numbers::pi / (T + 1));
    GridFunction u = normalized(GridFunction::from_interior(start), p);

    double lambda = p_norm_pow(u, p);
    auto r = eigen_defect(u, lambda, p);
    double res = max_abs(r);
    double step = 1.0 / (4.0 * std::max(1.0, std::pow(2.0, p)));
    const double rounding = 64.0 * std::numeric_limits<double>::epsilon();

    long it = 0;
    double plateau_res = res;
    long plateau_it = 0;
    for (; it < opts.max_iters && res > opts.tol; ++it) {
        if (res < 0.5 * plateau_res) {
            plateau_res = res;
            plateau_it = it;
        } else if (it - plateau_it > 2000) {
            break;
        }
        const double slope = p * squared_norm(r);
        double t = std::min(step * 2.0, 1e6);
        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries, t *= opts.backtrack) {
            GridFunction trial = normalized(u.stepped(-t, r), p);
            const double trial_lambda = p_norm_pow(trial, p);
            const bool armijo = trial_lambda <= lambda - opts.armijo_c * t * slope;
            bool flat_progress = false;
            if (!armijo && std::abs(trial_lambda - lambda) <= rounding * lambda) {
                flat_progress = eigen_residual(trial, trial_lambda, p) < res;
            }
            if (armijo || flat_progress) {
                u = std::move(trial);
                lambda = trial_lambda;
                step = t;
                accepted = true;
                break;
            }
        }
        r = eigen_defect(u, lambda, p);
        res = max_abs(r);
        if (!accepted) break;
    }

    if (u[1] < 0.0) u = u.scaled(-1.0);
    EigenPair pair{lambda, u, res, it};
    // Descent stalls where φ_p is not smooth (p < 2 and a vanishing difference).
    if (auto shot = shooting_refine(p, T, lambda); shot && shot->residual < pair.residual &&
                                                     shot->lambda <= lambda + std::max(res, opts.tol)) {
        shot->iterations = it;
        pair = std::move(*shot);
    }
    if (pair.residual > opts.tol) {
        std::ostringstream msg;
        msg << "first_eigenpair: residual " << pair.residual << " above tolerance " << opts.tol << " after " << it
            << " iterations";
        throw EigenConvergenceError(msg.str(), std::move(pair));
    }
    return pair;
}

}  // namespace dplap
