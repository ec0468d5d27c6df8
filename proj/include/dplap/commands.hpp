#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

namespace dplap::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
    ok = 0,
    usage_error = 1,      ///< bad flags or malformed config
    no_result = 2,        ///< no converged solution, no admissible ε, or a false verdict
    selftest_failed = 3,
};

struct SolveArgs {
    std::string config_path;
    std::optional<double> alpha;
    std::optional<double> tol;
    std::uint64_t seed = 0;
    int starts = 16;
    std::optional<std::string> out_path;  ///< stdout when empty
};

struct EigenArgs {
    double p = 2.0;
    int T = 2;
    double tol = 1e-9;
};

struct CheckArgs {
    std::string config_path;
    std::optional<double> eps;  ///< single ε; otherwise a scan
    double scan_lo = 1e-3;
    double scan_hi = 1e3;
    int scan_n = 200;
    std::optional<std::pair<double, double>> cd;
    bool estimate_gamma = false;  ///< report a heuristic γ estimate when none is declared
};

struct SweepArgs {
    std::string config_path;
    std::optional<std::string> out_path;
    std::optional<double> tol;
    std::uint64_t seed = 0;
    int starts = 16;
};

/// Fault injection for exercising the self-test's failure path.
struct SelftestFaults {
    bool kappa = false;  ///< perturb κ by a relative 1e-6
};

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);
int cmd_eigen(const EigenArgs& args, std::ostream& out, std::ostream& err);
int cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_selftest(std::ostream& out, const SelftestFaults& faults = {});

}  // namespace dplap::cli
