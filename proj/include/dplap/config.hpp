#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dplap/core.hpp"

namespace dplap {

/// Malformed or invalid problem configuration; field() names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct NonlinearityConfig {
    /// zero | constant | linear | power | bounded_rational | custom_table
    std::string kind = "zero";
    std::vector<double> params;
    std::optional<std::vector<double>> per_k_scale;
    /// custom_table only: abscissae and one row of samples per node (or one shared row).
    std::vector<double> table_t;
    std::vector<std::vector<double>> table_values;
    /// Overrides the nonnegativity flag derived from kind and params.
    std::optional<bool> nonnegative;
};

struct AlphaSweep {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
    bool geometric = true;

    std::vector<double> values() const;
};

/// One problem per file. JSON object with fields
///   T, p, nonlinearity {kind, params, per_k_scale, table, nonnegative},
///   gamma, alpha (number or {lo, hi, n, spacing}), truncate.
struct ProblemConfig {
    int T = 0;
    double p = 0.0;
    NonlinearityConfig nonlinearity;
    std::optional<std::vector<double>> gamma;
    std::variant<std::monostate, double, AlphaSweep> alpha;
    /// Solve the problem with f̃ (extension by f(k,0) for t < 0). Defaults to the
    /// nonnegativity flag of the nonlinearity.
    std::optional<bool> truncate;
};

ProblemConfig parse_config(std::istream& in);
ProblemConfig parse_config_text(const std::string& text);
ProblemConfig load_config(const std::string& path);

Nonlinearity build_nonlinearity(const ProblemConfig& config);

/// The problem exactly as configured (gamma attached when declared).
ProblemSpec build_problem(const ProblemConfig& config);

/// The problem handed to the solvers: truncated when config.truncate (or its default) says so.
ProblemSpec build_solve_problem(const ProblemConfig& config);

bool truncation_enabled(const ProblemConfig& config);

}  // namespace dplap
