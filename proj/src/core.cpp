#include "dplap/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dplap {

namespace {

constexpr double quadrature_abs_tol = 1e-10;
constexpr std::size_t memo_capacity = 1u << 20;

constexpr std::size_t max_panels = 4000;

/// Globally adaptive 15-point Gauss-Kronrod: the panel with the largest error
/// estimate is bisected until the summed estimate meets the tolerance.
double quadrature(const Nonlinearity::Function& f, int k, double xi) {
    if (xi == 0.0) return 0.0;
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    struct Panel {
        double a, b, value, error, l1;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    auto integrand = [&](double s) { return f(k, s); };
    auto panel = [&](double a, double b) {
        Panel p{a, b, 0.0, 0.0, 0.0};
        p.value = gk::integrate(integrand, a, b, 0, 0.0, &p.error, &p.l1);
        return p;
    };

    std::priority_queue<Panel> panels;
    panels.push(panel(std::min(0.0, xi), std::max(0.0, xi)));
    double value = panels.top().value;
    double error = panels.top().error;
    double l1 = panels.top().l1;
    auto done = [&] { return std::isfinite(value) && error <= quadrature_abs_tol + 1e-13 * l1; };
    while (!done() && std::isfinite(value) && panels.size() < max_panels) {
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;
        const Panel left = panel(worst.a, mid);
        const Panel right = panel(mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        panels.push(left);
        panels.push(right);
    }
    // resum to shed the drift of the running updates
    value = error = l1 = 0.0;
    for (; !panels.empty(); panels.pop()) {
        value += panels.top().value;
        error += panels.top().error;
        l1 += panels.top().l1;
    }
    if (!done()) {
        std::ostringstream msg;
        msg << "quadrature of f(" << k << ", .) over [0, " << xi << "] did not reach tolerance (value " << value
            << ", error estimate " << error << ")";
        throw QuadratureError(msg.str());
    }
    return xi > 0.0 ? value : -value;
}

}  // namespace

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(int T) {
    validate_size(T);
    values_.assign(static_cast<std::size_t>(T) + 2, 0.0);
}

GridFunction GridFunction::from_interior(std::span<const double> interior) {
    GridFunction u(static_cast<int>(interior.size()));
    std::copy(interior.begin(), interior.end(), u.values_.begin() + 1);
    return u;
}

GridFunction GridFunction::from_values(std::span<const double> values) {
    if (values.size() < 4) throw std::invalid_argument("grid function needs T+2 >= 4 values");
    if (values.front() != 0.0 || values.back() != 0.0)
        throw std::invalid_argument("grid function must vanish at nodes 0 and T+1");
    return from_interior(values.subspan(1, values.size() - 2));
}

void GridFunction::set(int k, double value) {
    if (k < 1 || k > T()) throw std::out_of_range("interior index out of range: " + std::to_string(k));
    values_[static_cast<std::size_t>(k)] = value;
}

GridFunction GridFunction::scaled(double c) const {
    GridFunction out = *this;
    for (double& v : out.values_) v *= c;
    return out;
}

GridFunction GridFunction::stepped(double t, std::span<const double> direction) const {
    if (static_cast<int>(direction.size()) != T())
        throw std::invalid_argument("direction length must equal T");
    GridFunction out = *this;
    for (int k = 1; k <= T(); ++k) out.values_[k] += t * direction[k - 1];
    return out;
}

// ---------------------------------------------------------------------------
// Nonlinearity

struct Nonlinearity::Memo {
    using Key = std::pair<int, std::uint64_t>;
    struct KeyHash {
        std::size_t operator()(const Key& key) const noexcept {
            return std::hash<std::uint64_t>{}(key.second ^
                                              (static_cast<std::uint64_t>(key.first) * 0x9E3779B97F4A7C15ull));
        }
    };

    std::mutex mutex;
    std::unordered_map<Key, double, KeyHash> values;

    static Key key(int k, double xi) { return {k, std::bit_cast<std::uint64_t>(xi)}; }
};

Nonlinearity Nonlinearity::with_potential(Function f, Function potential, bool is_nonnegative,
                                          Function df) {
    Nonlinearity nl;
    nl.f_ = std::move(f);
    nl.potential_ = std::move(potential);
    nl.df_ = std::move(df);
    nl.nonnegative_ = is_nonnegative;
    return nl;
}

Nonlinearity Nonlinearity::from_function(Function f, bool is_nonnegative, Function df) {
    Nonlinearity nl;
    nl.f_ = std::move(f);
    nl.df_ = std::move(df);
    nl.nonnegative_ = is_nonnegative;
    nl.memo_ = std::make_shared<Memo>();
    return nl;
}

double Nonlinearity::integrate_f(int k, double xi) const { return quadrature(f_, k, xi); }

double Nonlinearity::potential(int k, double xi) const {
    if (xi == 0.0) return 0.0;
    if (potential_) return potential_(k, xi);

    const auto key = Memo::key(k, xi);
    {
        std::scoped_lock lock(memo_->mutex);
        if (auto it = memo_->values.find(key); it != memo_->values.end()) return it->second;
    }
    const double value = quadrature(f_, k, xi);
    std::scoped_lock lock(memo_->mutex);
    if (memo_->values.size() >= memo_capacity) memo_->values.clear();
    memo_->values.emplace(key, value);
    return value;
}

double Nonlinearity::df(int k, double t) const {
    if (df_) return df_(k, t);
    const double h = 1e-7 * (1.0 + std::abs(t));
    return (f_(k, t + h) - f_(k, t - h)) / (2.0 * h);
}

Nonlinearity Nonlinearity::with_gamma(std::vector<double> gamma) const {
    Nonlinearity nl = *this;
    nl.gamma_ = std::move(gamma);
    return nl;
}

Nonlinearity Nonlinearity::with_nonnegative(bool flag) const {
    Nonlinearity nl = *this;
    nl.nonnegative_ = flag;
    return nl;
}

double Nonlinearity::potential_consistency(int T, std::span<const double> samples) const {
    if (!potential_) return 0.0;
    double worst = 0.0;
    for (int k = 1; k <= T; ++k) {
        for (double xi : samples) {
            const double closed = potential_(k, xi);
            const double numeric = quadrature(f_, k, xi);
            worst = std::max(worst, std::abs(closed - numeric) / (1.0 + std::abs(closed)));
        }
    }
    return worst;
}

Nonlinearity Nonlinearity::truncated() const {
    Nonlinearity nl = *this;
    Function f = f_;
    nl.f_ = [f](int k, double t) { return t >= 0.0 ? f(k, t) : f(k, 0.0); };
    if (potential_) {
        Function potential = potential_;
        nl.potential_ = [f, potential](int k, double xi) {
            return xi >= 0.0 ? potential(k, xi) : f(k, 0.0) * xi;
        };
    } else {
        // Quadrature of the original on [0, ξ] for ξ ≥ 0, linear extension below.
        Nonlinearity original = *this;
        nl.potential_ = [f, original](int k, double xi) {
            return xi >= 0.0 ? original.potential(k, xi) : f(k, 0.0) * xi;
        };
        nl.memo_.reset();
    }
    if (df_) {
        Function df = df_;
        nl.df_ = [df](int k, double t) { return t >= 0.0 ? df(k, t) : 0.0; };
    } else {
        Nonlinearity original = *this;
        nl.df_ = [original](int k, double t) { return t >= 0.0 ? original.df(k, t) : 0.0; };
    }
    nl.truncated_ = true;
    return nl;
}

// ---------------------------------------------------------------------------
// ProblemSpec

ProblemSpec::ProblemSpec(int T, double p, Nonlinearity nonlinearity)
    : T_(T), p_(p), nonlinearity_(std::move(nonlinearity)) {
    validate_size(T);
    validate_exponent(p);
}

void validate_exponent(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must exceed 1");
}

void validate_size(int T) {
    if (T < 2) throw std::invalid_argument("T must be at least 2");
}

// ---------------------------------------------------------------------------
// operators and constants

double phi_p(double s, double p) {
    if (s == 0.0) return 0.0;
    if (p == 2.0) return s;
    return std::copysign(std::pow(std::abs(s), p - 1.0), s);
}

std::vector<double> forward_difference(const GridFunction& u) {
    const auto v = u.values();
    std::vector<double> d(v.size() - 1);
    for (std::size_t j = 0; j + 1 < v.size(); ++j) d[j] = v[j + 1] - v[j];
    return d;
}

double p_norm_pow(const GridFunction& u, double p) {
    const auto v = u.values();
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) sum += std::pow(std::abs(v[j + 1] - v[j]), p);
    return sum;
}

double p_norm(const GridFunction& u, double p) { return std::pow(p_norm_pow(u, p), 1.0 / p); }

double sup_norm(const GridFunction& u) {
    double m = 0.0;
    for (double x : u.interior()) m = std::max(m, std::abs(x));
    return m;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
    if (a.T() != b.T()) throw std::invalid_argument("grid functions differ in T");
    double m = 0.0;
    for (int k = 1; k <= a.T(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double kappa(double p, int T) {
    validate_exponent(p);
    validate_size(T);
    const double t = T;
    if (T % 2 == 0)
        return std::pow(std::pow(2.0 / t, p - 1.0) + std::pow(2.0 / (t + 2.0), p - 1.0), 1.0 / p);
    return 2.0 / std::pow(t + 1.0, (p - 1.0) / p);
}

double c_const(double p, int T) {
    validate_exponent(p);
    validate_size(T);
    const double t = T;
    if (T % 2 == 0)
        return (std::pow(2.0 / t, p - 1.0) + std::pow(2.0 / (t + 2.0), p - 1.0)) / p;
    return std::pow(2.0, p) / (p * std::pow(t + 1.0, p - 1.0));
}

double theta(double s, double p, int T) {
    validate_exponent(p);
    if (!(s > 0.0 && s < T + 1.0)) throw std::domain_error("theta: s must lie in (0, T+1)");
    return 1.0 / std::pow(T - s + 1.0, p - 1.0) + 1.0 / std::pow(s, p - 1.0);
}

EmbeddingComparison compare_embedding_constants(double p, int T) {
    validate_exponent(p);
    validate_size(T);
    const double t = T;
    const double bracket = std::pow(2.0 / t, p - 1.0) + std::pow(2.0 / (t + 2.0), p - 1.0);
    return {std::pow(bracket, -1.0 / p), std::pow(t + 1.0, (p - 1.0) / p) / 2.0};
}

}  // namespace dplap
