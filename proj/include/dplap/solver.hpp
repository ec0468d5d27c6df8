#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dplap/core.hpp"
#include "dplap/existence.hpp"
#include "dplap/options.hpp"
#include "dplap/spectrum.hpp"

namespace dplap {

/// Sign classification of a computed solution via the strong comparison principle.
enum class Positivity { positive, zero, indefinite };

const char* to_string(Positivity p) noexcept;

struct SolveOutcome {
    GridFunction u;
    double residual = 0.0;  ///< strong residual at u
    double energy = 0.0;    ///< J_α(u)
    long iterations = 0;        ///< steps until the residual first met tol (polish steps excluded)
    bool converged = false;     ///< residual ≤ tol (for sublevel searches: interior and residual ≤ tol)
    bool boundary_hit = false;  ///< the constraint ‖u‖^p ≤ σ was active at termination
    Positivity positivity = Positivity::indefinite;
    std::uint64_t seed = 0;
    int start_index = -1;       ///< which start produced this outcome (multistart), -1 otherwise
};

/// f̃(k,t) = f(k,t) for t ≥ 0 and f(k,0) for t < 0.
Nonlinearity truncate_nonnegative(const Nonlinearity& nl);

/// Armijo gradient descent on J_α from u0, stopping at strong residual ≤ opts.tol.
SolveOutcome solve_descent(const ProblemSpec& prob, double alpha, const GridFunction& u0,
                           const SolverOptions& opts = {});

/// Damped Newton for p = 2 with O(T) tridiagonal solves. An indefinite Hessian is shifted
/// until positive definite; a rejected step falls back to a gradient step.
/// Throws std::invalid_argument when p != 2.
SolveOutcome solve_newton_p2(const ProblemSpec& prob, double alpha, const GridFunction& u0,
                             const SolverOptions& opts = {});

/// Minimizes J_α over ‖u‖^p ≤ sigma by projected descent (radial rescaling onto the
/// constraint, tangential steps once on it), from u = 0 and 8 random interior points.
/// Returns the lowest-energy result among interior critical points and constrained
/// stationary points on ‖u‖^p = sigma; the latter carry boundary_hit = true, converged = false.
SolveOutcome minimize_on_sublevel(const ProblemSpec& prob, double alpha, double sigma,
                                  const SolverOptions& opts = {});

/// minimize_on_sublevel with cert.sigma. When cert.verdict holds and the minimizer is
/// interior, checks ‖u‖_∞ < cert.eps and throws std::logic_error otherwise.
SolveOutcome minimize_on_certificate(const ProblemSpec& prob, const ExistenceCertificate& cert,
                                     const SolverOptions& opts = {});

/// zero when ‖u‖_∞ ≤ tol; positive when -Δ(φ_p(Δu(k-1))) ≥ -tol for all k and
/// min_k u(k) > tol; indefinite otherwise.
Positivity check_positivity(const GridFunction& u, const ProblemSpec& prob, double alpha, double tol);

struct NontrivialityWitness {
    double zeta = 0.0;
    double energy = 0.0;  ///< J_α(ζ φ₁) < 0
};

/// First ζ on the grid with J_α(ζ φ₁) < 0, which shows u = 0 is not a local minimum.
std::optional<NontrivialityWitness> nontriviality_certificate(const ProblemSpec& prob, double alpha,
                                                              const EigenPair& eigen,
                                                              std::span<const double> zeta_grid);

/// Solves from extra_starts, u = 0, ±0.1r φ̂₁, ±r φ̂₁ (φ̂₁ scaled to unit sup norm,
/// r = opts.start_radius) and n_starts uniform random points in [-r, r]^T. Returns distinct
/// converged solutions (sup distance ≥ opts.dedup_dist) sorted by energy.
std::vector<SolveOutcome> multistart_solve(const ProblemSpec& prob, double alpha, int n_starts,
                                           const SolverOptions& opts = {},
                                           std::span<const GridFunction> extra_starts = {});

struct SweepRow {
    double alpha = 0.0;
    int n_solutions = 0;
    double min_energy = 0.0;
    double sup_norm = 0.0;  ///< of the lowest-energy solution
    std::optional<Positivity> positivity;
    std::optional<double> nontriviality_zeta;
    long iterations = 0;    ///< summed over the returned solutions
    std::string error;      ///< nonempty when the row failed
};

/// One multistart_solve per α, warm-started from the previous row's best solution.
std::vector<SweepRow> sweep_alpha(const ProblemSpec& prob, std::span<const double> alphas, int n_starts,
                                  const SolverOptions& opts = {}, bool warm_start = true);

/// ζ grid used by sweep_alpha and the CLI: 80 geometric points from 10 down to 1e-4.
std::vector<double> default_zeta_grid();

}  // namespace dplap
