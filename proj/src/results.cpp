#include "dplap/results.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace dplap {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void header_line(std::ostream& out, const std::string& key, const std::string& value) {
    out << "# " << key << " = " << value << '\n';
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void write_solve_result(std::ostream& out, const SolveHeader& header, std::span<const SolveOutcome> solutions) {
    header_line(out, "T", std::to_string(header.T));
    header_line(out, "p", format_number(header.p));
    header_line(out, "alpha", format_number(header.alpha));
    header_line(out, "seed", std::to_string(header.seed));
    header_line(out, "tol", format_number(header.tol));
    header_line(out, "truncated", header.truncated ? "true" : "false");
    header_line(out, "n_solutions", std::to_string(solutions.size()));
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        const auto& s = solutions[i];
        header_line(out, "solution", std::to_string(i + 1));
        header_line(out, "residual", format_number(s.residual));
        header_line(out, "energy", format_number(s.energy));
        header_line(out, "positivity", to_string(s.positivity));
        header_line(out, "iterations", std::to_string(s.iterations));
        const auto v = s.u.values();
        for (std::size_t k = 0; k < v.size(); ++k) out << k << ' ' << format_number(v[k]) << '\n';
    }
}

ParsedResult parse_solve_result(std::istream& in) {
    ParsedResult result;
    std::map<std::string, std::string>* current = &result.header;
    std::vector<double> values;
    std::map<std::string, std::string> block;
    bool in_block = false;

    auto flush = [&] {
        if (!in_block) return;
        result.solutions.push_back({block, GridFunction::from_values(values)});
        values.clear();
        block.clear();
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw std::runtime_error("line " + std::to_string(line_no) + ": expected '# key = value'");
            const std::string key = trim(line.substr(1, eq - 1));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "solution") {
                flush();
                in_block = true;
                current = &block;
            }
            (*current)[key] = value;
            continue;
        }
        if (!in_block) throw std::runtime_error("line " + std::to_string(line_no) + ": data before '# solution'");
        std::istringstream ss(line);
        std::size_t k = 0;
        std::string token;
        if (!(ss >> k >> token) || k != values.size())
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'k u(k)' with consecutive k");
        values.push_back(std::stod(token));
    }
    flush();
    return result;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "alpha,n_solutions,min_energy,sup_norm,positivity,nontriviality_zeta\n";
    for (const auto& r : rows) {
        out << format_number(r.alpha) << ',';
        if (!r.error.empty()) {
            out << ",,,error,\n";
            continue;
        }
        out << r.n_solutions << ',';
        if (r.n_solutions > 0) out << format_number(r.min_energy) << ',' << format_number(r.sup_norm);
        else out << ',';
        out << ',' << (r.positivity ? to_string(*r.positivity) : "") << ',';
        if (r.nontriviality_zeta) out << format_number(*r.nontriviality_zeta);
        out << '\n';
    }
}

void write_certificate(std::ostream& out, const ExistenceCertificate& cert) {
    header_line(out, "eps", format_number(cert.eps));
    header_line(out, "alpha", format_number(cert.alpha));
    header_line(out, "chi_eps", format_number(cert.chi_eps));
    header_line(out, "bound", format_number(cert.bound));
    header_line(out, "margin", format_number(cert.margin));
    header_line(out, "sigma", format_number(cert.sigma));
    header_line(out, "verdict", cert.verdict ? "true" : "false");
}

void write_window(std::ostream& out, const MultiplicityWindow& w) {
    header_line(out, "c", format_number(w.c));
    header_line(out, "d", format_number(w.d));
    header_line(out, "chi_c", format_number(w.chi_c));
    header_line(out, "h_d", format_number(w.h_d));
    header_line(out, "alpha_lo", format_number(w.alpha_lo));
    header_line(out, "alpha_hi", format_number(w.alpha_hi));
    header_line(out, "window_verdict", w.verdict ? "true" : "false");
}

}  // namespace dplap
