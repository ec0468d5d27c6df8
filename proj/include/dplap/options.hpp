#pragma once

#include <cstdint>

namespace dplap {

/// Shared knobs for the iterative solvers.
struct SolverOptions {
    double tol = 1e-10;           ///< strong-residual stopping tolerance
    long max_iters = 100000;
    double armijo_c = 1e-4;       ///< sufficient-decrease constant, in (0,1)
    double backtrack = 0.5;       ///< step reduction factor, in (0,1)
    std::uint64_t seed = 0;       ///< multistart RNG seed
    double dedup_dist = 1e-6;     ///< sup-norm distance separating distinct solutions
    double start_radius = 3.0;    ///< random starts are drawn from [-r, r]^T
    int polish_iters = 200;       ///< extra iterations allowed once tol is met

    /// Defaults for the first-eigenpair computation (eigen-residual 1e-9).
    static SolverOptions eigen_defaults() {
        SolverOptions o;
        o.tol = 1e-9;
        return o;
    }

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

}  // namespace dplap
