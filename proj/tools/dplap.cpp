// Command-line front end: solve, eigen, check, sweep, selftest.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dplap/commands.hpp"

int main(int argc, char** argv) {
    using namespace dplap::cli;

    CLI::App app{"Discrete p-Laplacian Dirichlet problem toolkit"};
    app.require_subcommand(1);

    SolveArgs solve;
    std::string solve_out;
    auto* solve_cmd = app.add_subcommand("solve", "Find solutions by multistart energy minimization");
    solve_cmd->add_option("--config", solve.config_path, "Problem config (JSON)")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--alpha", solve.alpha, "Override the config alpha");
    solve_cmd->add_option("--tol", solve.tol, "Strong-residual tolerance");
    solve_cmd->add_option("--seed", solve.seed, "Multistart seed");
    solve_cmd->add_option("--starts", solve.starts, "Number of random starts");
    solve_cmd->add_option("--out", solve_out, "Result file (default: stdout)");

    EigenArgs eigen;
    auto* eigen_cmd = app.add_subcommand("eigen", "First eigenpair of the p-Laplacian");
    eigen_cmd->add_option("--p", eigen.p, "Exponent p > 1")->required();
    eigen_cmd->add_option("--T", eigen.T, "Interior nodes, T >= 2")->required();
    eigen_cmd->add_option("--tol", eigen.tol, "Eigen-residual tolerance");

    CheckArgs check;
    std::vector<double> cd;
    auto* check_cmd = app.add_subcommand("check", "Evaluate the existence and multiplicity criteria");
    check_cmd->add_option("--config", check.config_path, "Problem config (JSON)")->required()->check(CLI::ExistingFile);
    bool eps_scan = false;
    auto* eps_opt = check_cmd->add_option("--eps", check.eps, "Test a single eps instead of scanning");
    check_cmd->add_flag("--eps-scan", eps_scan, "Scan eps over a geometric grid (the default)")->excludes(eps_opt);
    check_cmd->add_option("--scan-lo", check.scan_lo, "Lower end of the eps scan");
    check_cmd->add_option("--scan-hi", check.scan_hi, "Upper end of the eps scan");
    check_cmd->add_option("--scan-n", check.scan_n, "Points in the eps scan");
    check_cmd->add_option("--cd", cd, "Pair c d for the three-solutions window")->expected(2);
    check_cmd->add_flag("--estimate-gamma", check.estimate_gamma, "Report a heuristic gamma estimate");

    SweepArgs sweep;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Solve over the alpha grid of a config");
    sweep_cmd->add_option("--config", sweep.config_path, "Problem config (JSON)")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--out", sweep_out, "CSV output (default: stdout)");
    sweep_cmd->add_option("--tol", sweep.tol, "Strong-residual tolerance");
    sweep_cmd->add_option("--seed", sweep.seed, "Multistart seed");
    sweep_cmd->add_option("--starts", sweep.starts, "Random starts per alpha");

    std::string fault;
    auto* selftest_cmd = app.add_subcommand("selftest", "Run built-in consistency checks");
    selftest_cmd->add_option("--inject-fault", fault, "Deliberately break a check")->check(CLI::IsMember({"kappa"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage_error;
    }

    if (*solve_cmd) {
        if (!solve_out.empty()) solve.out_path = solve_out;
        return cmd_solve(solve, std::cout, std::cerr);
    }
    if (*eigen_cmd) return cmd_eigen(eigen, std::cout, std::cerr);
    if (*check_cmd) {
        if (cd.size() == 2) check.cd = std::pair{cd[0], cd[1]};
        return cmd_check(check, std::cout, std::cerr);
    }
    if (*sweep_cmd) {
        if (!sweep_out.empty()) sweep.out_path = sweep_out;
        return cmd_sweep(sweep, std::cout, std::cerr);
    }
    SelftestFaults faults;
    faults.kappa = fault == "kappa";
    return cmd_selftest(std::cout, faults);
}
