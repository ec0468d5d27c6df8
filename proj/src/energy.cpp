#include "dplap/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dplap/spectrum.hpp"

namespace dplap {

namespace {

void require_positive_alpha(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
}

void require_same_size(const GridFunction& u, const ProblemSpec& prob) {
    if (u.T() != prob.T()) throw std::invalid_argument("grid function size does not match problem T");
}

}  // namespace

double energy(const GridFunction& u, const ProblemSpec& prob, double alpha) {
    require_positive_alpha(alpha);
    require_same_size(u, prob);
    double potential = 0.0;
    for (int k = 1; k <= prob.T(); ++k) potential += prob.nonlinearity().potential(k, u[k]);
    return p_norm_pow(u, prob.p()) / prob.p() - alpha * potential;
}

std::vector<double> p_laplacian(const GridFunction& u, double p) {
    const int T = u.T();
    std::vector<double> flux(static_cast<std::size_t>(T) + 1);
    for (int j = 0; j <= T; ++j) flux[j] = phi_p(u[j + 1] - u[j], p);
    std::vector<double> out(static_cast<std::size_t>(T));
    for (int k = 1; k <= T; ++k) out[k - 1] = flux[k - 1] - flux[k];
    return out;
}

std::vector<double> gradient(const GridFunction& u, const ProblemSpec& prob, double alpha) {
    require_positive_alpha(alpha);
    require_same_size(u, prob);
    auto g = p_laplacian(u, prob.p());
    for (int k = 1; k <= prob.T(); ++k) g[k - 1] -= alpha * prob.nonlinearity().f(k, u[k]);
    return g;
}

double strong_residual(const GridFunction& u, const ProblemSpec& prob, double alpha) {
    double m = 0.0;
    for (double g : gradient(u, prob, alpha)) m = std::max(m, std::abs(g));
    return m;
}

double weak_residual(const GridFunction& u, const GridFunction& v, const ProblemSpec& prob, double alpha) {
    require_positive_alpha(alpha);
    require_same_size(u, prob);
    if (v.T() != u.T()) throw std::invalid_argument("weak_residual: u and v differ in T");
    const int T = u.T();
    double s = 0.0;
    for (int j = 0; j <= T; ++j) s += phi_p(u[j + 1] - u[j], prob.p()) * (v[j + 1] - v[j]);
    for (int k = 1; k <= T; ++k) s -= alpha * prob.nonlinearity().f(k, u[k]) * v[k];
    return s;
}

EnergyReport energy_report(const GridFunction& u, const ProblemSpec& prob, double alpha) {
    EnergyReport r;
    r.alpha = alpha;
    r.value = energy(u, prob, alpha);
    r.strong_residual = strong_residual(u, prob, alpha);
    r.grad_norm = r.strong_residual;
    return r;
}

Tridiagonal hessian_p2(const GridFunction& u, const ProblemSpec& prob, double alpha) {
    if (prob.p() != 2.0) throw std::invalid_argument("hessian_p2 requires p = 2");
    require_positive_alpha(alpha);
    require_same_size(u, prob);
    Tridiagonal h = matrix_A(prob.T());
    for (int k = 1; k <= prob.T(); ++k) h.diag[k - 1] -= alpha * prob.nonlinearity().df(k, u[k]);
    return h;
}

}  // namespace dplap
