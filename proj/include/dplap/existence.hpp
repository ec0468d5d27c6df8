#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dplap/core.hpp"
#include "dplap/options.hpp"

namespace dplap {

/// Outcome of the small-potential existence test
///   Σ_k max_{|ξ|≤ε} F_k(ξ) / ε^p < κ^p/p
/// applied to α f. A true verdict licenses a search in the sublevel set
/// ‖u‖^p < σ = κ^p ε^p, whose minimizers satisfy ‖u‖_∞ < ε.
struct ExistenceCertificate {
    double eps = 0.0;
    double chi_eps = 0.0;  ///< α χ(ε)
    double bound = 0.0;    ///< κ^p / p
    double margin = 0.0;   ///< bound - chi_eps
    bool verdict = false;  ///< chi_eps < bound
    double sigma = 0.0;    ///< κ^p ε^p
    double alpha = 1.0;
};

/// The (c, d) three-solutions test and its open α-interval (alpha_lo, alpha_hi).
/// An empty interval is reported with alpha_lo = +∞.
struct MultiplicityWindow {
    double c = 0.0;
    double d = 0.0;
    double chi_c = 0.0;
    double h_d = 0.0;
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    bool verdict = false;
};

/// Sampled lower estimate of γ_k = liminf_{ξ→0⁺} F_k(ξ)/ξ^p. This is a heuristic:
/// a liminf is not determined by finitely many samples.
struct GammaEstimate {
    double value = 0.0;
    std::vector<double> ratios;  ///< F_k(ξ)/ξ^p per sample
    static constexpr const char* label = "heuristic";
};

/// h(ξ) along probe points plus a verdict on whether h tends to 0. Heuristic as well.
struct DecayReport {
    std::vector<double> xi;
    std::vector<double> h;
    bool verdict = false;
    static constexpr const char* label = "heuristic";
};

/// max_{|ξ|≤ε} F_k(ξ) for one node: 1025 samples on [-ε, ε] and golden-section polish.
/// For nonnegative f the half [0, ε] reduces to F_k(ε).
double max_potential(const Nonlinearity& nl, int k, double eps);

/// Same value without the nonnegativity shortcut.
double max_potential_sampled(const Nonlinearity& nl, int k, double eps);

/// χ(ε) = Σ_k max_{|ξ|≤ε} F_k(ξ) / ε^p.
double chi(double eps, const ProblemSpec& prob);

/// h(ξ) = Σ_k F_k(ξ) / ξ^p.
double h(double xi, const ProblemSpec& prob);

ExistenceCertificate check_thm_esistenza(const ProblemSpec& prob, double eps, double alpha = 1.0);

/// Scans n_grid geometric ε values in [lo, hi]; returns the passing certificate with the
/// largest margin, or nothing.
std::optional<ExistenceCertificate> find_admissible_eps(const ProblemSpec& prob, double lo = 1e-3,
                                                        double hi = 1e3, int n_grid = 200,
                                                        double alpha = 1.0);

/// λ_{1,p} / (p min_k γ_k). Requires a nonnegative nonlinearity and γ_k > 0.
double alpha_threshold(const ProblemSpec& prob, std::span<const double> gamma,
                       const SolverOptions& opts = SolverOptions::eigen_defaults());

/// Same, with the γ declared on the nonlinearity; throws when none was declared.
double alpha_threshold(const ProblemSpec& prob, const SolverOptions& opts = SolverOptions::eigen_defaults());

/// The p = 2 display (2 / min γ_k) sin²(π/(2(T+1))).
double alpha_threshold_p2_display(int T, std::span<const double> gamma);

GammaEstimate estimate_gamma(const ProblemSpec& prob, int k, std::span<const double> xi_samples);

/// Verdict true when h is non-increasing over the last half of the probes and ends below tol.
DecayReport check_superlinearity_decay(const ProblemSpec& prob, std::span<const double> xi_probe,
                                       double tol = 1e-3);

MultiplicityWindow check_three_solutions_window(const ProblemSpec& prob, double c, double d);

/// n geometric points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int n);

}  // namespace dplap
