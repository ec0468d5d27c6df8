#pragma once

#include <optional>
#include <span>
#include <vector>

namespace dplap {

/// Square tridiagonal matrix stored by diagonals.
/// lower[i] sits at (i+1, i), upper[i] at (i, i+1).
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    explicit Tridiagonal(std::size_t n) : lower(n ? n - 1 : 0), diag(n), upper(n ? n - 1 : 0) {}

    std::size_t size() const noexcept { return diag.size(); }

    /// Entry (i, j); zero outside the band.
    double at(std::size_t i, std::size_t j) const;

    std::vector<double> multiply(std::span<const double> x) const;

    /// Thomas elimination without pivoting. Empty when a pivot falls below
    /// pivot_tol relative to the largest entry.
    std::optional<std::vector<double>> solve(std::span<const double> rhs, double pivot_tol = 1e-14) const;

    /// LDLᵀ solve for a symmetric matrix; empty unless every pivot is positive
    /// (i.e. unless the matrix is positive definite).
    std::optional<std::vector<double>> solve_positive_definite(std::span<const double> rhs) const;

    bool is_symmetric() const noexcept { return lower == upper; }
};

}  // namespace dplap
