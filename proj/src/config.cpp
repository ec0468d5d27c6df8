#include "dplap/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "dplap/existence.hpp"
#include "dplap/nonlinearities.hpp"

namespace dplap {

namespace {

using nlohmann::json;

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
    return v;
}

std::vector<double> number_list(const json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError(field, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
    }
}

NonlinearityConfig parse_nonlinearity(const json& j, int T) {
    if (!j.is_object()) throw ConfigError("nonlinearity", "expected an object");
    reject_unknown(j, {"kind", "params", "per_k_scale", "table", "nonnegative"}, "nonlinearity");
    NonlinearityConfig nl;
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("nonlinearity.kind", "missing or not a string");
    nl.kind = j["kind"].get<std::string>();

    if (j.contains("params")) nl.params = number_list(j["params"], "nonlinearity.params");
    if (j.contains("per_k_scale")) {
        nl.per_k_scale = number_list(j["per_k_scale"], "nonlinearity.per_k_scale");
        if (static_cast<int>(nl.per_k_scale->size()) != T)
            throw ConfigError("nonlinearity.per_k_scale", "must have exactly T entries");
    }
    if (j.contains("nonnegative")) {
        if (!j["nonnegative"].is_boolean()) throw ConfigError("nonlinearity.nonnegative", "expected true or false");
        nl.nonnegative = j["nonnegative"].get<bool>();
    }

    auto expect_params = [&](std::size_t lo, std::size_t hi) {
        if (nl.params.size() < lo || nl.params.size() > hi)
            throw ConfigError("nonlinearity.params", "kind '" + nl.kind + "' takes " + std::to_string(lo) +
                                                         (lo == hi ? "" : " to " + std::to_string(hi)) + " values");
    };
    if (nl.kind == "zero") {
        expect_params(0, 0);
    } else if (nl.kind == "constant") {
        expect_params(1, 1);
    } else if (nl.kind == "linear" || nl.kind == "bounded_rational") {
        expect_params(0, 1);
    } else if (nl.kind == "power") {
        expect_params(2, 2);
        if (!(nl.params[1] > 0.0)) throw ConfigError("nonlinearity.params", "power exponent q must be positive");
    } else if (nl.kind == "custom_table") {
        expect_params(0, 0);
        if (!j.contains("table") || !j["table"].is_object())
            throw ConfigError("nonlinearity.table", "custom_table needs a table object {t, values}");
        const auto& table = j["table"];
        reject_unknown(table, {"t", "values"}, "nonlinearity.table");
        if (!table.contains("t")) throw ConfigError("nonlinearity.table.t", "missing");
        if (!table.contains("values")) throw ConfigError("nonlinearity.table.values", "missing");
        nl.table_t = number_list(table["t"], "nonlinearity.table.t");
        const auto& rows = table["values"];
        if (!rows.is_array() || rows.empty()) throw ConfigError("nonlinearity.table.values", "expected a list of rows");
        for (std::size_t i = 0; i < rows.size(); ++i)
            nl.table_values.push_back(number_list(rows[i], "nonlinearity.table.values[" + std::to_string(i) + "]"));
        if (nl.table_values.size() != 1 && static_cast<int>(nl.table_values.size()) != T)
            throw ConfigError("nonlinearity.table.values", "needs one shared row or exactly T rows");
        try {
            nonlinearities::table(nl.table_t, nl.table_values);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("nonlinearity.table", e.what());
        }
    } else {
        throw ConfigError("nonlinearity.kind", "unknown kind '" + nl.kind + "'");
    }
    if (j.contains("table") && nl.kind != "custom_table")
        throw ConfigError("nonlinearity.table", "only valid for kind custom_table");
    return nl;
}

AlphaSweep parse_sweep(const json& j) {
    reject_unknown(j, {"lo", "hi", "n", "spacing"}, "alpha");
    AlphaSweep s;
    if (!j.contains("lo")) throw ConfigError("alpha.lo", "missing");
    if (!j.contains("hi")) throw ConfigError("alpha.hi", "missing");
    if (!j.contains("n")) throw ConfigError("alpha.n", "missing");
    s.lo = number(j["lo"], "alpha.lo");
    s.hi = number(j["hi"], "alpha.hi");
    if (!j["n"].is_number_integer()) throw ConfigError("alpha.n", "expected an integer");
    s.n = j["n"].get<int>();
    if (!(s.lo > 0.0)) throw ConfigError("alpha.lo", "alpha must be positive");
    if (s.n < 1) throw ConfigError("alpha.n", "must be at least 1");
    if (s.n > 1 && !(s.hi > s.lo)) throw ConfigError("alpha.hi", "must exceed alpha.lo");
    if (j.contains("spacing")) {
        if (!j["spacing"].is_string()) throw ConfigError("alpha.spacing", "expected \"geometric\" or \"linear\"");
        const auto spacing = j["spacing"].get<std::string>();
        if (spacing == "linear") s.geometric = false;
        else if (spacing != "geometric") throw ConfigError("alpha.spacing", "expected \"geometric\" or \"linear\"");
    }
    return s;
}

}  // namespace

std::vector<double> AlphaSweep::values() const {
    if (n == 1) return {lo};
    if (geometric) return geometric_grid(lo, hi, n);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

ProblemConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    reject_unknown(j, {"T", "p", "nonlinearity", "gamma", "alpha", "truncate"}, "");

    ProblemConfig cfg;
    if (!j.contains("T")) throw ConfigError("T", "missing");
    if (!j["T"].is_number_integer()) throw ConfigError("T", "expected an integer");
    cfg.T = j["T"].get<int>();
    if (cfg.T < 2) throw ConfigError("T", "T must be at least 2");

    if (!j.contains("p")) throw ConfigError("p", "missing");
    cfg.p = number(j["p"], "p");
    if (!(cfg.p > 1.0)) throw ConfigError("p", "p must exceed 1");

    if (!j.contains("nonlinearity")) throw ConfigError("nonlinearity", "missing");
    cfg.nonlinearity = parse_nonlinearity(j["nonlinearity"], cfg.T);

    if (j.contains("gamma")) {
        cfg.gamma = number_list(j["gamma"], "gamma");
        if (static_cast<int>(cfg.gamma->size()) != cfg.T) throw ConfigError("gamma", "must have exactly T entries");
    }
    if (j.contains("alpha")) {
        const auto& a = j["alpha"];
        if (a.is_object()) {
            cfg.alpha = parse_sweep(a);
        } else {
            const double v = number(a, "alpha");
            if (!(v > 0.0)) throw ConfigError("alpha", "alpha must be positive");
            cfg.alpha = v;
        }
    }
    if (j.contains("truncate")) {
        if (!j["truncate"].is_boolean()) throw ConfigError("truncate", "expected true or false");
        cfg.truncate = j["truncate"].get<bool>();
    }
    return cfg;
}

ProblemConfig parse_config(std::istream& in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    return parse_config(in);
}

Nonlinearity build_nonlinearity(const ProblemConfig& config) {
    const auto& c = config.nonlinearity;
    auto param = [&](std::size_t i, double fallback) { return i < c.params.size() ? c.params[i] : fallback; };
    Nonlinearity nl = nonlinearities::zero();
    if (c.kind == "constant") nl = nonlinearities::constant(c.params.at(0));
    else if (c.kind == "linear") nl = nonlinearities::linear(param(0, 1.0));
    else if (c.kind == "power") nl = nonlinearities::power(c.params.at(0), c.params.at(1));
    else if (c.kind == "bounded_rational") nl = nonlinearities::bounded_rational(param(0, 1.0));
    else if (c.kind == "custom_table") nl = nonlinearities::table(c.table_t, c.table_values);

    if (c.per_k_scale) nl = nonlinearities::scaled_per_node(nl, *c.per_k_scale);
    if (c.nonnegative) nl = nl.with_nonnegative(*c.nonnegative);
    if (config.gamma) nl = nl.with_gamma(*config.gamma);
    return nl;
}

ProblemSpec build_problem(const ProblemConfig& config) {
    return ProblemSpec(config.T, config.p, build_nonlinearity(config));
}

bool truncation_enabled(const ProblemConfig& config) {
    return config.truncate.value_or(build_nonlinearity(config).is_nonnegative());
}

ProblemSpec build_solve_problem(const ProblemConfig& config) {
    ProblemSpec prob = build_problem(config);
    if (truncation_enabled(config)) return prob.with_nonlinearity(prob.nonlinearity().truncated());
    return prob;
}

}  // namespace dplap
