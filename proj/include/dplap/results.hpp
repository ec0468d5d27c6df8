#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dplap/existence.hpp"
#include "dplap/solver.hpp"

namespace dplap {

/// 17 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double x);

struct SolveHeader {
    int T = 0;
    double p = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    bool truncated = false;
};

/// Line-oriented result file: `# key = value` header lines (T, p, alpha, seed, tol,
/// truncated, n_solutions), then per solution `# solution = i`, `# residual`, `# energy`,
/// `# positivity` and the `k u(k)` rows for k = 0..T+1.
void write_solve_result(std::ostream& out, const SolveHeader& header, std::span<const SolveOutcome> solutions);

struct ParsedSolution {
    std::map<std::string, std::string> header;
    GridFunction u;
};

struct ParsedResult {
    std::map<std::string, std::string> header;
    std::vector<ParsedSolution> solutions;
};

/// Reads a file written by write_solve_result; throws std::runtime_error on malformed input.
ParsedResult parse_solve_result(std::istream& in);

/// CSV with header alpha,n_solutions,min_energy,sup_norm,positivity,nontriviality_zeta.
/// Absent values are left blank; failed rows carry positivity "error".
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

void write_certificate(std::ostream& out, const ExistenceCertificate& cert);
void write_window(std::ostream& out, const MultiplicityWindow& window);

}  // namespace dplap
