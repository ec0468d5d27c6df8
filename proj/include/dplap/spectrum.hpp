#pragma once

#include <stdexcept>
#include <vector>

#include "dplap/core.hpp"
#include "dplap/options.hpp"
#include "dplap/tridiagonal.hpp"

namespace dplap {

/// First eigenpair of -Δ(φ_p(Δu(k-1))) = λ φ_p(u(k)) with Dirichlet boundary.
/// phi is positive on 1..T and normalized by Σ_k phi(k)^p = 1.
struct EigenPair {
    double lambda = 0.0;
    GridFunction phi;
    double residual = 0.0;  ///< max_k |-Δ(φ_p(Δφ(k-1))) - λ φ_p(φ(k))|
    long iterations = 0;
};

/// Raised by first_eigenpair when the residual target is not met; carries the best iterate.
class EigenConvergenceError : public std::runtime_error {
public:
    EigenConvergenceError(const std::string& what, EigenPair best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const EigenPair& best() const noexcept { return best_; }

private:
    EigenPair best_;
};

/// Σ|Δu(k-1)|^p / Σ|u(k)|^p; throws std::invalid_argument for u ≡ 0.
double rayleigh_quotient(const GridFunction& u, double p);

/// λ_k = 4 sin²(kπ/(2(T+1))), k = 1..T, the spectrum of matrix_A(T).
std::vector<double> eigenvalues_p2(int T);

/// 4 sin²(π/(2(T+1))).
double lambda1_closed_form_p2(int T);

/// The T×T matrix with 2 on the diagonal and -1 beside it.
Tridiagonal matrix_A(int T);

/// All eigenvalues of a symmetric tridiagonal matrix, ascending, by Sturm-sequence bisection.
std::vector<double> symmetric_tridiagonal_eigenvalues(const Tridiagonal& m);

/// max_k |-Δ(φ_p(Δu(k-1))) - λ φ_p(u(k))|.
double eigen_residual(const GridFunction& u, double lambda, double p);

/// Projected Armijo descent on the Rayleigh quotient over Σ|u(k)|^p = 1, started from
/// sin(kπ/(T+1)). Throws EigenConvergenceError if opts.tol is not reached in opts.max_iters.
EigenPair first_eigenpair(double p, int T, const SolverOptions& opts = SolverOptions::eigen_defaults());

}  // namespace dplap
