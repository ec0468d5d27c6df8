#include "dplap/existence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dplap/parallel.hpp"
#include "dplap/spectrum.hpp"

namespace dplap {

namespace {

constexpr int chi_samples = 1025;
constexpr double golden = 0.6180339887498949;

/// Max of F_k over [a, b] from n evenly spaced samples and a golden-section polish
/// on the bracket around the best sample.
double sampled_max(const Nonlinearity& nl, int k, double a, double b, int n) {
    const double dx = (b - a) / (n - 1);
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double v = nl.potential(k, a + i * dx);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double lo = a + std::max(best - 1, 0) * dx;
    double hi = a + std::min(best + 1, n - 1) * dx;
    double x1 = hi - golden * (hi - lo);
    double x2 = lo + golden * (hi - lo);
    double f1 = nl.potential(k, x1);
    double f2 = nl.potential(k, x2);
    for (int it = 0; it < 80 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = nl.potential(k, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = nl.potential(k, x1);
        }
    }
    return std::max({best_value, f1, f2});
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

std::vector<double> geometric_grid(double lo, double hi, int n) {
    require_positive(lo, "grid lower end");
    if (!(hi > lo)) throw std::invalid_argument("grid needs lo < hi");
    if (n < 1) throw std::invalid_argument("grid needs at least one point");
    if (n == 1) return {lo};
    std::vector<double> g(static_cast<std::size_t>(n));
    const double ratio = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo * std::exp(ratio * i);
    g.back() = hi;
    return g;
}

double max_potential_sampled(const Nonlinearity& nl, int k, double eps) {
    require_positive(eps, "eps");
    return std::max(0.0, sampled_max(nl, k, -eps, eps, chi_samples));
}

double max_potential(const Nonlinearity& nl, int k, double eps) {
    require_positive(eps, "eps");
    if (!nl.is_nonnegative()) return max_potential_sampled(nl, k, eps);
    // F_k is nondecreasing on [0, ε]; on [-ε, 0] the truncated extension f(k,0)ξ is ≤ 0.
    const double positive_side = nl.potential(k, eps);
    const double negative_side =
        nl.is_truncated() ? 0.0 : sampled_max(nl, k, -eps, 0.0, chi_samples / 2 + 1);
    return std::max({0.0, positive_side, negative_side});
}

double chi(double eps, const ProblemSpec& prob) {
    require_positive(eps, "eps");
    double sum = 0.0;
    for (int k = 1; k <= prob.T(); ++k) sum += max_potential(prob.nonlinearity(), k, eps);
    return sum / std::pow(eps, prob.p());
}

double h(double xi, const ProblemSpec& prob) {
    require_positive(xi, "xi");
    double sum = 0.0;
    for (int k = 1; k <= prob.T(); ++k) sum += prob.nonlinearity().potential(k, xi);
    return sum / std::pow(xi, prob.p());
}

ExistenceCertificate check_thm_esistenza(const ProblemSpec& prob, double eps, double alpha) {
    require_positive(eps, "eps");
    require_positive(alpha, "alpha");
    const double k = kappa(prob.p(), prob.T());
    ExistenceCertificate cert;
    cert.eps = eps;
    cert.alpha = alpha;
    cert.chi_eps = alpha * chi(eps, prob);
    cert.bound = std::pow(k, prob.p()) / prob.p();
    cert.margin = cert.bound - cert.chi_eps;
    cert.verdict = cert.chi_eps < cert.bound;
    cert.sigma = std::pow(k * eps, prob.p());
    return cert;
}

std::optional<ExistenceCertificate> find_admissible_eps(const ProblemSpec& prob, double lo, double hi,
                                                        int n_grid, double alpha) {
    const auto grid = geometric_grid(lo, hi, n_grid);
    std::vector<std::optional<ExistenceCertificate>> certs(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { certs[i] = check_thm_esistenza(prob, grid[i], alpha); });
    std::optional<ExistenceCertificate> best;
    for (const auto& c : certs) {
        if (c->verdict && (!best || c->margin > best->margin)) best = c;
    }
    return best;
}

double alpha_threshold(const ProblemSpec& prob, std::span<const double> gamma, const SolverOptions& opts) {
    if (!prob.nonlinearity().is_nonnegative())
        throw std::invalid_argument("alpha_threshold requires a nonlinearity declared nonnegative");
    if (static_cast<int>(gamma.size()) != prob.T())
        throw std::invalid_argument("alpha_threshold needs one gamma per interior node");
    for (double g : gamma)
        if (!(g > 0.0)) throw std::invalid_argument("alpha_threshold requires every gamma_k > 0");
    const double min_gamma = *std::min_element(gamma.begin(), gamma.end());
    const double lambda1 =
        prob.p() == 2.0 ? lambda1_closed_form_p2(prob.T()) : first_eigenpair(prob.p(), prob.T(), opts).lambda;
    return lambda1 / (prob.p() * min_gamma);
}

double alpha_threshold(const ProblemSpec& prob, const SolverOptions& opts) {
    const auto& gamma = prob.nonlinearity().gamma();
    if (!gamma) throw std::invalid_argument("alpha_threshold: no gamma declared for this nonlinearity");
    return alpha_threshold(prob, *gamma, opts);
}

double alpha_threshold_p2_display(int T, std::span<const double> gamma) {
    validate_size(T);
    if (gamma.empty()) throw std::invalid_argument("gamma must not be empty");
    const double min_gamma = *std::min_element(gamma.begin(), gamma.end());
    const double s = std::sin(std::numbers::pi / (2.0 * (T + 1)));
    return 2.0 / min_gamma * s * s;
}

GammaEstimate estimate_gamma(const ProblemSpec& prob, int k, std::span<const double> xi_samples) {
    if (k < 1 || k > prob.T()) throw std::out_of_range("estimate_gamma: node index out of range");
    if (xi_samples.empty()) throw std::invalid_argument("estimate_gamma needs samples");
    GammaEstimate est;
    est.value = std::numeric_limits<double>::infinity();
    for (double xi : xi_samples) {
        require_positive(xi, "gamma sample");
        const double ratio = prob.nonlinearity().potential(k, xi) / std::pow(xi, prob.p());
        est.ratios.push_back(ratio);
        est.value = std::min(est.value, ratio);
    }
    return est;
}

DecayReport check_superlinearity_decay(const ProblemSpec& prob, std::span<const double> xi_probe, double tol) {
    if (xi_probe.size() < 2) throw std::invalid_argument("decay check needs at least two probes");
    DecayReport report;
    for (double xi : xi_probe) {
        report.xi.push_back(xi);
        report.h.push_back(h(xi, prob));
    }
    const std::size_t n = report.h.size();
    const std::size_t tail = std::min(n - 1, n / 2);
    bool monotone = true;
    for (std::size_t i = tail; i + 1 < n; ++i) monotone = monotone && report.h[i + 1] <= report.h[i];
    report.verdict = monotone && std::abs(report.h.back()) <= tol;
    return report;
}

MultiplicityWindow check_three_solutions_window(const ProblemSpec& prob, double c, double d) {
    require_positive(c, "c");
    if (!(d > c)) throw std::invalid_argument("three-solutions window needs c < d");
    const double p = prob.p();
    const double tp = std::pow(prob.T() + 1.0, p - 1.0);
    MultiplicityWindow w;
    w.c = c;
    w.d = d;
    w.chi_c = chi(c, prob);
    w.h_d = h(d, prob);
    const double gap = w.h_d - std::pow(c / d, p) * w.chi_c;
    w.verdict = w.chi_c < std::pow(2.0, p - 1.0) / tp * gap;
    const double inf = std::numeric_limits<double>::infinity();
    w.alpha_lo = gap > 0.0 ? 2.0 / (p * gap) : inf;
    w.alpha_hi = w.chi_c > 0.0 ? std::pow(2.0, p) / (p * w.chi_c * tp) : inf;
    return w;
}

}  // namespace dplap
