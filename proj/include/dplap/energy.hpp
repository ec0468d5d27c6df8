#pragma once

#include <vector>

#include "dplap/core.hpp"
#include "dplap/tridiagonal.hpp"

namespace dplap {

/// Diagnostics of J_α at one grid function.
struct EnergyReport {
    double value = 0.0;
    double grad_norm = 0.0;        ///< sup norm of the gradient
    double strong_residual = 0.0;  ///< max_k of the difference-equation defect
    double alpha = 1.0;
};

/// J_α(u) = (1/p)‖u‖^p - α Σ_{k=1}^T F_k(u(k)). alpha = 1 gives the unscaled functional.
double energy(const GridFunction& u, const ProblemSpec& prob, double alpha);

/// Component k-1 holds ⟨J_α'(u), e_k⟩ = -Δ(φ_p(Δu(k-1))) - α f(k, u(k)) for k = 1..T.
std::vector<double> gradient(const GridFunction& u, const ProblemSpec& prob, double alpha);

/// -Δ(φ_p(Δu(k-1))) for k = 1..T, the discrete p-Laplacian alone.
std::vector<double> p_laplacian(const GridFunction& u, double p);

/// max_k |-Δ(φ_p(Δu(k-1))) - α f(k, u(k))|.
double strong_residual(const GridFunction& u, const ProblemSpec& prob, double alpha);

/// Σ_{k=1}^{T+1} φ_p(Δu(k-1))Δv(k-1) - α Σ_{k=1}^T f(k,u(k)) v(k).
double weak_residual(const GridFunction& u, const GridFunction& v, const ProblemSpec& prob, double alpha);

EnergyReport energy_report(const GridFunction& u, const ProblemSpec& prob, double alpha);

/// Jacobian of the gradient for p = 2: A - α diag(∂f/∂t(k, u(k))).
/// Throws std::invalid_argument when p != 2.
Tridiagonal hessian_p2(const GridFunction& u, const ProblemSpec& prob, double alpha);

}  // namespace dplap
