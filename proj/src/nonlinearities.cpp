#include "dplap/nonlinearities.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <stdexcept>

namespace dplap::nonlinearities {

Nonlinearity zero() {
    auto f = [](int, double) { return 0.0; };
    return Nonlinearity::with_potential(f, f, true, f);
}

Nonlinearity constant(double c) {
    return Nonlinearity::with_potential([c](int, double) { return c; },
                                        [c](int, double xi) { return c * xi; }, c >= 0.0,
                                        [](int, double) { return 0.0; });
}

Nonlinearity linear(double a) {
    return Nonlinearity::with_potential([a](int, double t) { return a * t; },
                                        [a](int, double xi) { return 0.5 * a * xi * xi; }, a >= 0.0,
                                        [a](int, double) { return a; });
}

Nonlinearity power(double a, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("power nonlinearity needs exponent q > 0");
    return Nonlinearity::with_potential(
        [a, q](int, double t) { return a * std::copysign(std::pow(std::abs(t), q), t); },
        [a, q](int, double xi) { return a * std::pow(std::abs(xi), q + 1.0) / (q + 1.0); }, a >= 0.0,
        [a, q](int, double t) {
            if (t == 0.0) return q == 1.0 ? a : (q > 1.0 ? 0.0 : HUGE_VAL);
            return a * q * std::pow(std::abs(t), q - 1.0);
        });
}

Nonlinearity bounded_rational(double a) {
    return Nonlinearity::with_potential(
        [a](int, double t) { return a * t / (1.0 + t * t); },
        [a](int, double xi) { return 0.5 * a * std::log1p(xi * xi); }, a >= 0.0,
        [a](int, double t) {
            const double d = 1.0 + t * t;
            return a * (1.0 - t * t) / (d * d);
        });
}

Nonlinearity table(std::vector<double> t, std::vector<std::vector<double>> values) {
    if (t.size() < 2) throw std::invalid_argument("table needs at least two abscissae");
    if (!std::is_sorted(t.begin(), t.end()) || std::adjacent_find(t.begin(), t.end()) != t.end())
        throw std::invalid_argument("table abscissae must be strictly increasing");
    if (values.empty()) throw std::invalid_argument("table needs at least one row of values");
    for (const auto& row : values)
        if (row.size() != t.size()) throw std::invalid_argument("table row length must match abscissae");

    bool nonnegative = true;
    for (const auto& row : values)
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t[i] >= 0.0 && row[i] < 0.0) nonnegative = false;
    // The constant extension left of t_0 counts for t ≥ 0 too.
    if (t.front() > 0.0)
        for (const auto& row : values)
            if (row.front() < 0.0) nonnegative = false;

    struct Table {
        std::vector<double> t;
        std::vector<std::vector<double>> values;

        const std::vector<double>& row(int k) const {
            return values.size() == 1 ? values.front() : values.at(static_cast<std::size_t>(k - 1));
        }
        /// Segment index i with t[i] ≤ x < t[i+1]; callers keep x inside [t.front(), t.back()).
        std::size_t segment(double x) const {
            return static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin()) - 1;
        }
        double f(int k, double x) const {
            const auto& r = row(k);
            if (x <= t.front()) return r.front();
            if (x >= t.back()) return r.back();
            const std::size_t i = segment(x);
            const double w = (x - t[i]) / (t[i + 1] - t[i]);
            return (1.0 - w) * r[i] + w * r[i + 1];
        }
        double slope(int k, double x) const {
            const auto& r = row(k);
            if (x < t.front() || x >= t.back()) return 0.0;
            const std::size_t i = segment(x);
            return (r[i + 1] - r[i]) / (t[i + 1] - t[i]);
        }
        /// ∫_{t.front()}^x f(k, s) ds.
        double primitive(int k, double x) const {
            const auto& r = row(k);
            if (x <= t.front()) return r.front() * (x - t.front());
            double sum = 0.0;
            for (std::size_t i = 0; i + 1 < t.size(); ++i) {
                if (x <= t[i]) break;
                const double hi = std::min(x, t[i + 1]);
                sum += 0.5 * (r[i] + f(k, hi)) * (hi - t[i]);
            }
            if (x > t.back()) sum += r.back() * (x - t.back());
            return sum;
        }
    };
    auto table = std::make_shared<const Table>(Table{std::move(t), std::move(values)});
    return Nonlinearity::with_potential(
        [table](int k, double x) { return table->f(k, x); },
        [table](int k, double xi) { return table->primitive(k, xi) - table->primitive(k, 0.0); }, nonnegative,
        [table](int k, double x) { return table->slope(k, x); });
}

Nonlinearity scaled_per_node(const Nonlinearity& base, std::vector<double> scale) {
    bool nonnegative = base.is_nonnegative();
    for (double s : scale)
        if (s < 0.0) nonnegative = false;
    auto factor = [scale](int k) { return scale.at(static_cast<std::size_t>(k - 1)); };
    auto f = [base, factor](int k, double t) { return factor(k) * base.f(k, t); };
    auto df = [base, factor](int k, double t) { return factor(k) * base.df(k, t); };
    if (base.has_closed_form_potential()) {
        auto potential = [base, factor](int k, double xi) { return factor(k) * base.potential(k, xi); };
        return Nonlinearity::with_potential(f, potential, nonnegative, df);
    }
    return Nonlinearity::from_function(f, nonnegative, df);
}

}  // namespace dplap::nonlinearities
