#include "dplap/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dplap {

double Tridiagonal::at(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw std::out_of_range("tridiagonal index out of range");
    if (i == j) return diag[i];
    if (i == j + 1) return lower[j];
    if (j == i + 1) return upper[i];
    return 0.0;
}

std::vector<double> Tridiagonal::multiply(std::span<const double> x) const {
    const std::size_t n = size();
    if (x.size() != n) throw std::invalid_argument("tridiagonal multiply: size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += lower[i - 1] * x[i - 1];
        if (i + 1 < n) s += upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

std::optional<std::vector<double>> Tridiagonal::solve(std::span<const double> rhs, double pivot_tol) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw std::invalid_argument("tridiagonal solve: size mismatch");
    double scale = 0.0;
    for (double v : diag) scale = std::max(scale, std::abs(v));
    for (double v : lower) scale = std::max(scale, std::abs(v));
    for (double v : upper) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return std::nullopt;

    std::vector<double> c(n), d(n);
    double pivot = diag[0];
    if (std::abs(pivot) <= pivot_tol * scale) return std::nullopt;
    c[0] = n > 1 ? upper[0] / pivot : 0.0;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if (std::abs(pivot) <= pivot_tol * scale || !std::isfinite(pivot)) return std::nullopt;
        c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

std::optional<std::vector<double>> Tridiagonal::solve_positive_definite(std::span<const double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw std::invalid_argument("right-hand side size mismatch");
    std::vector<double> d(n);
    std::vector<double> l(n ? n - 1 : 0);
    std::vector<double> y(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = diag[i] - (i > 0 ? l[i - 1] * l[i - 1] * d[i - 1] : 0.0);
        if (!(d[i] > 0.0) || !std::isfinite(d[i])) return std::nullopt;
        if (i + 1 < n) l[i] = lower[i] / d[i];
        if (i > 0) y[i] -= l[i - 1] * y[i - 1];
    }
    for (std::size_t i = 0; i < n; ++i) y[i] /= d[i];
    for (std::size_t i = n; i-- > 1;) y[i - 1] -= l[i - 1] * y[i];
    return y;
}

}  // namespace dplap
