#pragma once

/// Core domain types for the discrete p-Laplacian Dirichlet problem
///
///   -Δ(φ_p(Δu(k-1))) = α f(k, u(k)),   k = 1..T,   u(0) = u(T+1) = 0,
///
/// together with the norms, difference operators and explicit constants
/// (embedding constant κ, c(p,T), θ) used throughout the library.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dplap {

/// Thrown when an adaptive quadrature of a potential cannot reach its tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A member of H: real values on nodes 0..T+1 with zero Dirichlet boundary.
///
/// Boundary zeros are stored explicitly so index arithmetic matches the
/// k = 1..T+1 sums of the difference operators.
class GridFunction {
public:
    /// u ≡ 0 with T interior nodes.
    explicit GridFunction(int T);

    /// Interior values u(1..T); boundary zeros are added.
    static GridFunction from_interior(std::span<const double> interior);

    /// Full values u(0..T+1); throws std::invalid_argument on nonzero boundary.
    static GridFunction from_values(std::span<const double> values);

    int T() const noexcept { return static_cast<int>(values_.size()) - 2; }

    double operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }

    /// Sets an interior value; k must lie in 1..T.
    void set(int k, double value);

    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> interior() const noexcept {
        return std::span<const double>(values_).subspan(1, values_.size() - 2);
    }

    GridFunction scaled(double c) const;

    /// this + t * direction (direction holds T interior components).
    GridFunction stepped(double t, std::span<const double> direction) const;

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    std::vector<double> values_;
};

/// Evaluator for f(k,t) and its potential F_k(ξ) = ∫₀^ξ f(k,s) ds.
///
/// The potential is either supplied in closed form or computed by global
/// adaptive Gauss-Kronrod quadrature (error below 1e-10 + 1e-13·∫|f|) with a
/// per-instance memo that is safe for concurrent use. Copies share the memo.
class Nonlinearity {
public:
    using Function = std::function<double(int k, double t)>;

    /// f with a closed-form potential. df may be empty (finite-difference fallback).
    static Nonlinearity with_potential(Function f, Function potential, bool is_nonnegative,
                                       Function df = {});

    /// f whose potential is obtained by quadrature.
    static Nonlinearity from_function(Function f, bool is_nonnegative, Function df = {});

    double f(int k, double t) const { return f_(k, t); }

    /// F_k(ξ); throws QuadratureError when the quadrature fails.
    double potential(int k, double xi) const;

    /// ∂f/∂t; central difference with step 1e-7·(1+|t|) unless supplied analytically.
    double df(int k, double t) const;

    bool has_closed_form_potential() const noexcept { return static_cast<bool>(potential_); }
    bool has_analytic_derivative() const noexcept { return static_cast<bool>(df_); }

    /// Declared f(k,t) ≥ 0 for t ≥ 0.
    bool is_nonnegative() const noexcept { return nonnegative_; }

    /// Declared γ_k = liminf_{ξ→0⁺} F_k(ξ)/ξ^p, when known.
    const std::optional<std::vector<double>>& gamma() const noexcept { return gamma_; }
    Nonlinearity with_gamma(std::vector<double> gamma) const;
    Nonlinearity with_nonnegative(bool flag) const;

    /// True when this is the extension f̃ produced by truncation at t = 0.
    bool is_truncated() const noexcept { return truncated_; }

    /// Max over k = 1..T and the sample points of |F_k(ξ) - quadrature of f| / (1+|F_k(ξ)|).
    /// Zero for quadrature-backed potentials.
    double potential_consistency(int T, std::span<const double> samples) const;

    /// Quadrature of f(k,·) over [0, xi], independent of any closed-form potential.
    double integrate_f(int k, double xi) const;

    /// f̃(k,t) = f(k,t) for t ≥ 0 and f(k,0) for t < 0, with the matching potential.
    Nonlinearity truncated() const;

private:
    struct Memo;

    Function f_;
    Function potential_;
    Function df_;
    bool nonnegative_ = false;
    bool truncated_ = false;
    std::optional<std::vector<double>> gamma_;
    std::shared_ptr<Memo> memo_;
};

/// One instance of the Dirichlet problem: T interior nodes, exponent p, right-hand side f.
class ProblemSpec {
public:
    /// Throws std::invalid_argument unless T ≥ 2 and p > 1.
    ProblemSpec(int T, double p, Nonlinearity nonlinearity);

    int T() const noexcept { return T_; }
    double p() const noexcept { return p_; }
    const Nonlinearity& nonlinearity() const noexcept { return nonlinearity_; }

    ProblemSpec with_nonlinearity(Nonlinearity nl) const { return {T_, p_, std::move(nl)}; }

private:
    int T_;
    double p_;
    Nonlinearity nonlinearity_;
};

/// φ_p(s) = |s|^{p-2} s, with φ_p(0) = 0 for every p > 1.
double phi_p(double s, double p);

/// Δu(j) = u(j+1) - u(j) for j = 0..T.
std::vector<double> forward_difference(const GridFunction& u);

/// ‖u‖ = (Σ_{k=1}^{T+1} |Δu(k-1)|^p)^{1/p}.
double p_norm(const GridFunction& u, double p);

/// Σ_{k=1}^{T+1} |Δu(k-1)|^p, i.e. ‖u‖^p without the root.
double p_norm_pow(const GridFunction& u, double p);

/// max_{k=1..T} |u(k)|.
double sup_norm(const GridFunction& u);

/// Sup-norm distance between two grid functions of the same T.
double sup_distance(const GridFunction& a, const GridFunction& b);

/// Embedding constant with ‖u‖_∞ ≤ ‖u‖/κ (separate formulas for even and odd T).
double kappa(double p, int T);

/// c(p,T); equals kappa(p,T)^p / p.
double c_const(double p, int T);

/// θ(s) = 1/(T-s+1)^{p-1} + 1/s^{p-1} on 0 < s < T+1; throws std::domain_error otherwise.
double theta(double s, double p, int T);

/// Both sides of [(2/T)^{p-1} + (2/(T+2))^{p-1}]^{-1/p} < (T+1)^{(p-1)/p}/2.
struct EmbeddingComparison {
    double even_side;
    double odd_side;
    double margin() const noexcept { return odd_side - even_side; }
};
EmbeddingComparison compare_embedding_constants(double p, int T);

void validate_exponent(double p);
void validate_size(int T);

}  // namespace dplap
