#pragma once

#include <span>
#include <vector>

#include "dplap/core.hpp"

/// Ready-made right-hand sides f(k,t) with closed-form potentials.
namespace dplap::nonlinearities {

/// f ≡ 0.
Nonlinearity zero();

/// f(k,t) = c; F_k(ξ) = c ξ.
Nonlinearity constant(double c);

/// f(k,t) = a t; F_k(ξ) = a ξ²/2.
Nonlinearity linear(double a = 1.0);

/// f(k,t) = a |t|^{q-1} t with q > 0; F_k(ξ) = a |ξ|^{q+1}/(q+1).
Nonlinearity power(double a, double q);

/// f(k,t) = a t/(1+t²); F_k(ξ) = (a/2) ln(1+ξ²).
Nonlinearity bounded_rational(double a = 1.0);

/// Piecewise-linear interpolant of samples (t_i, f(k, t_i)), held constant outside
/// [t_0, t_n]. values[k-1] is the row for node k, or a single row shared by all k.
/// The potential is the exact piecewise-quadratic antiderivative.
Nonlinearity table(std::vector<double> t, std::vector<std::vector<double>> values);

/// s_k f(k,t), s_k F_k(ξ); scale[k-1] applies to node k.
Nonlinearity scaled_per_node(const Nonlinearity& base, std::vector<double> scale);

}  // namespace dplap::nonlinearities
