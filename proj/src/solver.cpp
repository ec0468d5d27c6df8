#include "dplap/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "dplap/energy.hpp"
#include "dplap/parallel.hpp"
#include "dplap/rng.hpp"

namespace dplap {

void SolverOptions::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw std::invalid_argument("armijo_c must lie in (0,1)");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("backtrack must lie in (0,1)");
    if (!(dedup_dist > 0.0)) throw std::invalid_argument("dedup_dist must be positive");
    if (!(start_radius > 0.0)) throw std::invalid_argument("start_radius must be positive");
    if (polish_iters < 0) throw std::invalid_argument("polish_iters must be nonnegative");
}

const char* to_string(Positivity p) noexcept {
    switch (p) {
        case Positivity::positive: return "positive";
        case Positivity::zero: return "zero";
        case Positivity::indefinite: return "indefinite";
    }
    return "indefinite";
}

namespace {

constexpr int max_backtracks = 60;
constexpr int polish_patience = 10;
constexpr double boundary_rel = 1e-8;
constexpr double boundary_kkt_tol = 1e-8;

/// Energy differences below this (relative) are indistinguishable from rounding.
const double energy_rounding = 1e3 * std::numeric_limits<double>::epsilon();

struct Iterate {
    GridFunction u;
    double energy;
    std::vector<double> grad;
    double residual;
};

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void require_positive_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
}

Iterate evaluate(GridFunction u, const ProblemSpec& prob, double alpha) {
    Iterate it{std::move(u), 0.0, {}, 0.0};
    it.energy = energy(it.u, prob, alpha);
    it.grad = gradient(it.u, prob, alpha);
    it.residual = max_abs(it.grad);
    return it;
}

bool energy_flat(double trial, double current) {
    return std::abs(trial - current) <= energy_rounding * (1.0 + std::abs(current));
}

/// One accepted step or nothing when the step stalls.
using StepFn = std::function<std::optional<Iterate>(const Iterate&)>;

struct RunResult {
    Iterate state;
    long iterations;
};

/// Iterates until residual ≤ tol, then keeps stepping (up to opts.polish_iters) while
/// the residual improves, returning the best polished iterate. Degenerate critical
/// points converge slowly, and polishing keeps their copies within the dedup distance.
RunResult drive(Iterate state, const StepFn& step, const SolverOptions& opts,
                const std::function<bool(const Iterate&)>& done) {
    long iterations = 0;
    while (iterations < opts.max_iters && !done(state)) {
        auto next = step(state);
        ++iterations;
        if (!next) break;
        state = std::move(*next);
    }
    if (!done(state)) return {std::move(state), iterations};

    // polish steps are not counted: iterations is the count at which tol was first met
    Iterate best = state;
    int stale = 0;
    for (int i = 0; i < opts.polish_iters && best.residual > 0.0; ++i) {
        auto next = step(state);
        if (!next) break;
        state = std::move(*next);
        if (state.residual < best.residual && done(state)) {
            best = state;
            stale = 0;
        } else if (++stale >= polish_patience) {
            break;
        }
    }
    return {std::move(best), iterations};
}

/// Armijo backtracking along -grad, optionally composed with a projection.
class GradientStepper {
public:
    GradientStepper(const ProblemSpec& prob, double alpha, const SolverOptions& opts,
                    std::function<GridFunction(GridFunction)> project = {})
        : prob_(prob), alpha_(alpha), opts_(opts), project_(std::move(project)) {}

    std::optional<Iterate> operator()(const Iterate& cur) {
        const double slope = dot(cur.grad, cur.grad);
        if (slope == 0.0) return std::nullopt;
        double t = std::min(2.0 * step_, 1e8);
        for (int tries = 0; tries < max_backtracks; ++tries, t *= opts_.backtrack) {
            GridFunction trial_u = cur.u.stepped(-t, cur.grad);
            bool projected = false;
            if (project_) {
                GridFunction mapped = project_(trial_u);
                projected = mapped != trial_u;
                trial_u = std::move(mapped);
            }
            double moved_sq = 0.0;
            for (int k = 1; k <= trial_u.T(); ++k) moved_sq += (trial_u[k] - cur.u[k]) * (trial_u[k] - cur.u[k]);
            if (moved_sq == 0.0) return std::nullopt;

            // Projected-gradient mapping below tol: stationary on the constraint.
            if (projected && moved_sq <= opts_.tol * opts_.tol * t * t) return std::nullopt;

            const double trial_energy = energy(trial_u, prob_, alpha_);
            const double decrease = project_ ? moved_sq / t : t * slope;
            const bool armijo = trial_energy <= cur.energy - opts_.armijo_c * decrease;
            if (armijo || energy_flat(trial_energy, cur.energy)) {
                Iterate next = evaluate(std::move(trial_u), prob_, alpha_);
                if (armijo || next.residual < cur.residual) {
                    assert(next.energy <= cur.energy + energy_rounding * (1.0 + std::abs(cur.energy)));
                    step_ = t;
                    return next;
                }
            }
        }
        return std::nullopt;
    }

private:
    const ProblemSpec& prob_;
    double alpha_;
    const SolverOptions& opts_;
    std::function<GridFunction(GridFunction)> project_;
    double step_ = 0.5;
};

/// Second derivative of J_α for p ≥ 2: weights (p-1)|Δu|^{p-2} on the difference
/// stencil minus α diag(∂f/∂t).
Tridiagonal curvature(const GridFunction& u, const ProblemSpec& prob, double alpha) {
    const int T = prob.T();
    const double p = prob.p();
    std::vector<double> w(static_cast<std::size_t>(T) + 1);
    for (int j = 0; j <= T; ++j) w[j] = (p - 1.0) * std::pow(std::abs(u[j + 1] - u[j]), p - 2.0);
    Tridiagonal h(static_cast<std::size_t>(T));
    for (int k = 1; k <= T; ++k) {
        h.diag[k - 1] = w[k - 1] + w[k] - alpha * prob.nonlinearity().df(k, u[k]);
        if (k < T) h.lower[k - 1] = h.upper[k - 1] = -w[k];
    }
    return h;
}

/// For p ≥ 2, steps along -H⁻¹g with H the curvature of J_α shifted until positive
/// definite, so the direction is always a descent direction. For p < 2 (and whenever
/// that step fails) a plain gradient step is taken.
class PreconditionedStepper {
public:
    PreconditionedStepper(const ProblemSpec& prob, double alpha, const SolverOptions& opts,
                          std::function<GridFunction(GridFunction)> project = {})
        : prob_(prob), alpha_(alpha), opts_(opts), project_(project), fallback_(prob, alpha, opts, project) {}

    std::optional<Iterate> operator()(const Iterate& cur) {
        if (auto d = direction(cur)) {
            const double slope = dot(cur.grad, *d);
            double t = 1.0;
            for (int tries = 0; tries < 30 && slope < 0.0; ++tries, t *= opts_.backtrack) {
                GridFunction trial_u = cur.u.stepped(t, *d);
                double decrease = -t * slope;
                if (project_) {
                    trial_u = project_(std::move(trial_u));
                    std::vector<double> moved(static_cast<std::size_t>(trial_u.T()));
                    for (int k = 1; k <= trial_u.T(); ++k) moved[k - 1] = trial_u[k] - cur.u[k];
                    decrease = -dot(cur.grad, moved);
                    if (!(decrease > 0.0)) continue;
                }
                const double trial_energy = energy(trial_u, prob_, alpha_);
                const bool armijo = trial_energy <= cur.energy - opts_.armijo_c * decrease;
                if (armijo || energy_flat(trial_energy, cur.energy)) {
                    Iterate next = evaluate(std::move(trial_u), prob_, alpha_);
                    if (armijo || next.residual < cur.residual) return next;
                }
            }
        }
        return fallback_(cur);
    }

private:
    std::optional<std::vector<double>> direction(const Iterate& cur) const {
        if (prob_.p() < 2.0) return std::nullopt;
        const Tridiagonal h = curvature(cur.u, prob_, alpha_);
        std::vector<double> rhs(cur.grad);
        for (double& r : rhs) r = -r;
        double scale = 1.0;
        for (double v : h.diag) scale = std::max(scale, std::abs(v));
        if (auto d = h.solve_positive_definite(rhs)) return d;
        for (double mu = 1e-10; mu <= 1e2; mu *= 10.0) {
            Tridiagonal shifted = h;
            for (double& v : shifted.diag) v += mu * scale;
            if (auto d = shifted.solve_positive_definite(rhs)) return d;
        }
        return std::nullopt;
    }

    const ProblemSpec& prob_;
    double alpha_;
    const SolverOptions& opts_;
    std::function<GridFunction(GridFunction)> project_;
    GradientStepper fallback_;
};

/// Newton direction on the p = 2 Hessian; shifted until positive definite so the
/// step is always a descent direction.
std::optional<std::vector<double>> newton_direction(const Tridiagonal& hess, std::span<const double> grad) {
    std::vector<double> rhs(grad.begin(), grad.end());
    for (double& r : rhs) r = -r;
    if (auto d = hess.solve_positive_definite(rhs)) return d;
    double scale = 1.0;
    for (double v : hess.diag) scale = std::max(scale, std::abs(v));
    for (double mu = 1e-10; mu <= 1e2; mu *= 10.0) {
        Tridiagonal shifted = hess;
        for (double& v : shifted.diag) v += mu * scale;
        if (auto d = shifted.solve_positive_definite(rhs)) return d;
    }
    return std::nullopt;
}

SolveOutcome to_outcome(RunResult run, const ProblemSpec& prob, double alpha, const SolverOptions& opts) {
    SolveOutcome out{std::move(run.state.u)};
    out.residual = run.state.residual;
    out.energy = run.state.energy;
    out.iterations = run.iterations;
    out.converged = out.residual <= opts.tol;
    out.positivity = check_positivity(out.u, prob, alpha, opts.tol);
    out.seed = opts.seed;
    return out;
}

void require_matching(const ProblemSpec& prob, const GridFunction& u0) {
    if (u0.T() != prob.T()) throw std::invalid_argument("initial guess size does not match problem T");
}

}  // namespace

Nonlinearity truncate_nonnegative(const Nonlinearity& nl) { return nl.truncated(); }

SolveOutcome solve_descent(const ProblemSpec& prob, double alpha, const GridFunction& u0,
                           const SolverOptions& opts) {
    require_positive_alpha(alpha);
    require_matching(prob, u0);
    opts.validate();
    PreconditionedStepper stepper(prob, alpha, opts);
    auto run = drive(evaluate(u0, prob, alpha), std::ref(stepper), opts,
                     [&](const Iterate& s) { return s.residual <= opts.tol; });
    return to_outcome(std::move(run), prob, alpha, opts);
}

SolveOutcome solve_newton_p2(const ProblemSpec& prob, double alpha, const GridFunction& u0,
                             const SolverOptions& opts) {
    if (prob.p() != 2.0) throw std::invalid_argument("solve_newton_p2 requires p = 2");
    require_positive_alpha(alpha);
    require_matching(prob, u0);
    opts.validate();

    GradientStepper fallback(prob, alpha, opts);
    auto newton = [&](const Iterate& cur) -> std::optional<Iterate> {
        if (auto d = newton_direction(hessian_p2(cur.u, prob, alpha), cur.grad)) {
            const double slope = dot(cur.grad, *d);
            const double grad_norm = std::sqrt(dot(cur.grad, cur.grad));
            double t = 1.0;
            for (int tries = 0; tries < 30; ++tries, t *= opts.backtrack) {
                Iterate next = evaluate(cur.u.stepped(t, *d), prob, alpha);
                const bool armijo = slope < 0.0 && next.energy <= cur.energy + opts.armijo_c * t * slope;
                const bool residual_drop =
                    std::sqrt(dot(next.grad, next.grad)) <= (1.0 - opts.armijo_c * t) * grad_norm;
                if (armijo || residual_drop) return next;
            }
        }
        return fallback(cur);
    };
    auto run = drive(evaluate(u0, prob, alpha), newton, opts,
                     [&](const Iterate& s) { return s.residual <= opts.tol; });
    return to_outcome(std::move(run), prob, alpha, opts);
}

SolveOutcome minimize_on_sublevel(const ProblemSpec& prob, double alpha, double sigma, const SolverOptions& opts) {
    require_positive_alpha(alpha);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
    opts.validate();
    const double p = prob.p();
    const int T = prob.T();

    auto project = [sigma, p](GridFunction u) {
        const double psi = p_norm_pow(u, p);
        if (psi <= sigma) return u;
        return u.scaled(std::pow(sigma / psi, 1.0 / p));
    };
    auto on_boundary = [sigma, p](const GridFunction& u) { return p_norm_pow(u, p) >= sigma * (1.0 - boundary_rel); };

    std::vector<GridFunction> starts{GridFunction(T)};
    for (int s = 0; s < 8; ++s) {
        CounterRng rng(opts.seed, static_cast<std::uint64_t>(s));
        std::vector<double> w(static_cast<std::size_t>(T));
        for (double& x : w) x = rng.uniform(-1.0, 1.0);
        GridFunction u = GridFunction::from_interior(w);
        const double psi = p_norm_pow(u, p);
        const double target = sigma * rng.uniform(0.05, 0.9);
        starts.push_back(psi > 0.0 ? u.scaled(std::pow(target / psi, 1.0 / p)) : u);
    }

    // Tangential part g + μ∇Ψ of the gradient on the constraint, when μ ≥ 0 (g points outward).
    auto tangential = [&](const Iterate& it) -> std::optional<std::vector<double>> {
        if (!on_boundary(it.u)) return std::nullopt;
        const auto normal = p_laplacian(it.u, p);
        const double nn = dot(normal, normal);
        if (nn == 0.0) return std::nullopt;
        const double mu = -dot(it.grad, normal) / nn;
        if (mu < 0.0) return std::nullopt;
        std::vector<double> tan(it.grad);
        for (std::size_t k = 0; k < tan.size(); ++k) tan[k] += mu * normal[k];
        return tan;
    };
    auto kkt_tol = [&](const Iterate& it) { return std::max(opts.tol, boundary_kkt_tol * (1.0 + max_abs(it.grad))); };

    std::vector<std::optional<SolveOutcome>> results(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) {
        PreconditionedStepper inner(prob, alpha, opts, project);
        double tan_step = 0.5;
        StepFn stepper = [&](const Iterate& cur) -> std::optional<Iterate> {
            const auto tan = tangential(cur);
            if (!tan) return inner(cur);
            const double tan_res = max_abs(*tan);
            if (tan_res <= kkt_tol(cur)) return std::nullopt;
            const double slope = dot(*tan, *tan);
            double t = std::min(2.0 * tan_step, 1e8);
            for (int tries = 0; tries < max_backtracks; ++tries, t *= opts.backtrack) {
                GridFunction trial_u = project(cur.u.stepped(-t, *tan));
                const double trial_energy = energy(trial_u, prob, alpha);
                const bool armijo = trial_energy <= cur.energy - opts.armijo_c * t * slope;
                if (armijo || energy_flat(trial_energy, cur.energy)) {
                    Iterate next = evaluate(std::move(trial_u), prob, alpha);
                    const auto next_tan = tangential(next);
                    if (armijo || (next_tan && max_abs(*next_tan) < tan_res)) {
                        tan_step = t;
                        return next;
                    }
                }
            }
            return inner(cur);
        };
        auto run = drive(evaluate(starts[i], prob, alpha), stepper, opts,
                         [&](const Iterate& s) { return s.residual <= opts.tol && !on_boundary(s.u); });
        SolveOutcome out = to_outcome(std::move(run), prob, alpha, opts);
        out.boundary_hit = on_boundary(out.u);
        out.converged = out.converged && !out.boundary_hit;
        out.start_index = static_cast<int>(i);
        results[i] = std::move(out);
    });

    // Lowest energy wins; an interior critical point beats a boundary point of equal energy.
    const SolveOutcome* best = nullptr;
    for (const auto& r : results) {
        if (!r->converged && !r->boundary_hit) continue;
        if (!best || r->energy < best->energy || (r->energy == best->energy && r->converged && !best->converged))
            best = &*r;
    }
    if (!best) {
        for (const auto& r : results)
            if (!best || r->energy < best->energy) best = &*r;
    }
    return *best;
}

SolveOutcome minimize_on_certificate(const ProblemSpec& prob, const ExistenceCertificate& cert,
                                     const SolverOptions& opts) {
    SolveOutcome out = minimize_on_sublevel(prob, cert.alpha, cert.sigma, opts);
    if (cert.verdict && out.converged && !(sup_norm(out.u) < cert.eps)) {
        throw std::logic_error("interior sublevel minimizer violates the sup-norm bound ||u||_inf < eps");
    }
    return out;
}

Positivity check_positivity(const GridFunction& u, const ProblemSpec& prob, double alpha, double tol) {
    require_positive_alpha(alpha);
    if (u.T() != prob.T()) throw std::invalid_argument("grid function size does not match problem T");
    if (sup_norm(u) <= tol) return Positivity::zero;
    for (double v : p_laplacian(u, prob.p()))
        if (v < -tol) return Positivity::indefinite;
    double lowest = std::numeric_limits<double>::infinity();
    for (double v : u.interior()) lowest = std::min(lowest, v);
    return lowest > tol ? Positivity::positive : Positivity::indefinite;
}

std::optional<NontrivialityWitness> nontriviality_certificate(const ProblemSpec& prob, double alpha,
                                                              const EigenPair& eigen,
                                                              std::span<const double> zeta_grid) {
    require_positive_alpha(alpha);
    if (eigen.phi.T() != prob.T()) throw std::invalid_argument("eigenfunction size does not match problem T");
    for (double zeta : zeta_grid) {
        if (!(zeta > 0.0)) throw std::invalid_argument("zeta grid must be positive");
        const double e = energy(eigen.phi.scaled(zeta), prob, alpha);
        if (e < 0.0) return NontrivialityWitness{zeta, e};
    }
    return std::nullopt;
}

std::vector<double> default_zeta_grid() {
    auto g = geometric_grid(1e-4, 10.0, 80);
    std::reverse(g.begin(), g.end());
    return g;
}

std::vector<SolveOutcome> multistart_solve(const ProblemSpec& prob, double alpha, int n_starts,
                                           const SolverOptions& opts, std::span<const GridFunction> extra_starts) {
    require_positive_alpha(alpha);
    if (n_starts < 1) throw std::invalid_argument("n_starts must be at least 1");
    opts.validate();
    const int T = prob.T();
    const double r = opts.start_radius;

    std::vector<GridFunction> starts(extra_starts.begin(), extra_starts.end());
    for (const auto& s : starts) require_matching(prob, s);
    starts.emplace_back(T);

    // φ₁ for p = 2 is the sine profile; other p need the eigen solve.
    GridFunction phi = prob.p() == 2.0 ? [&] {
        std::vector<double> v(static_cast<std::size_t>(T));
        for (int k = 1; k <= T; ++k) v[k - 1] = std::sin(k * std::numbers::pi / (T + 1));
        return GridFunction::from_interior(v);
    }()
                                       : first_eigenpair(prob.p(), T).phi;
    phi = phi.scaled(1.0 / sup_norm(phi));
    for (double s : {0.1 * r, -0.1 * r, r, -r}) starts.push_back(phi.scaled(s));

    for (int i = 0; i < n_starts; ++i) {
        CounterRng rng(opts.seed, static_cast<std::uint64_t>(i));
        std::vector<double> w(static_cast<std::size_t>(T));
        for (double& x : w) x = rng.uniform(-r, r);
        starts.push_back(GridFunction::from_interior(w));
    }

    std::vector<std::optional<SolveOutcome>> results(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) {
        SolveOutcome out = prob.p() == 2.0 ? solve_newton_p2(prob, alpha, starts[i], opts)
                                           : solve_descent(prob, alpha, starts[i], opts);
        out.start_index = static_cast<int>(i);
        results[i] = std::move(out);
    });

    std::vector<SolveOutcome> distinct;
    for (auto& r_i : results) {
        if (!r_i->converged) continue;
        const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const SolveOutcome& d) {
            return sup_distance(d.u, r_i->u) < opts.dedup_dist;
        });
        if (!seen) distinct.push_back(std::move(*r_i));
    }
    std::stable_sort(distinct.begin(), distinct.end(),
                     [](const SolveOutcome& a, const SolveOutcome& b) { return a.energy < b.energy; });
    return distinct;
}

std::vector<SweepRow> sweep_alpha(const ProblemSpec& prob, std::span<const double> alphas, int n_starts,
                                  const SolverOptions& opts, bool warm_start) {
    if (alphas.empty()) throw std::invalid_argument("sweep needs at least one alpha");
    std::optional<EigenPair> eigen;
    try {
        eigen = first_eigenpair(prob.p(), prob.T());
    } catch (const EigenConvergenceError& e) {
        eigen = e.best();
    }
    const auto zetas = default_zeta_grid();

    std::vector<SweepRow> rows;
    std::optional<GridFunction> previous;
    for (double alpha : alphas) {
        SweepRow row;
        row.alpha = alpha;
        try {
            std::vector<GridFunction> extra;
            if (warm_start && previous) extra.push_back(*previous);
            const auto sols = multistart_solve(prob, alpha, n_starts, opts, extra);
            row.n_solutions = static_cast<int>(sols.size());
            for (const auto& s : sols) row.iterations += s.iterations;
            if (!sols.empty()) {
                row.min_energy = sols.front().energy;
                row.sup_norm = sup_norm(sols.front().u);
                row.positivity = sols.front().positivity;
                previous = sols.front().u;
            }
            if (auto w = nontriviality_certificate(prob, alpha, *eigen, zetas)) row.nontriviality_zeta = w->zeta;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace dplap
