#include "dplap/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "dplap/config.hpp"
#include "dplap/energy.hpp"
#include "dplap/existence.hpp"
#include "dplap/nonlinearities.hpp"
#include "dplap/results.hpp"
#include "dplap/rng.hpp"
#include "dplap/solver.hpp"
#include "dplap/spectrum.hpp"

namespace dplap::cli {

namespace {

void line(std::ostream& out, const std::string& key, const std::string& value) {
    out << "# " << key << " = " << value << '\n';
}

/// Writes to the named file (or the fallback stream); returns false if the file cannot be opened.
bool emit(const std::optional<std::string>& path, std::ostream& fallback, std::ostream& err,
          const std::function<void(std::ostream&)>& writer) {
    if (!path) {
        writer(fallback);
        return true;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) {
        err << "error: cannot write '" << *path << "'\n";
        return false;
    }
    writer(file);
    return static_cast<bool>(file);
}

SolverOptions solver_options(std::optional<double> tol, std::uint64_t seed) {
    SolverOptions opts;
    if (tol) opts.tol = *tol;
    opts.seed = seed;
    opts.validate();
    return opts;
}

/// Runs body, mapping configuration and argument errors to exit code 1.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return no_result;
    }
}

}  // namespace

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ProblemConfig cfg = load_config(args.config_path);
        double alpha = 1.0;
        if (args.alpha) {
            alpha = *args.alpha;
        } else if (std::holds_alternative<double>(cfg.alpha)) {
            alpha = std::get<double>(cfg.alpha);
        } else if (std::holds_alternative<AlphaSweep>(cfg.alpha)) {
            throw ConfigError("alpha", "solve needs a single alpha; pass --alpha or use the sweep command");
        }
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
        if (args.starts < 1) throw std::invalid_argument("--starts must be at least 1");

        const SolverOptions opts = solver_options(args.tol, args.seed);
        const ProblemSpec prob = build_solve_problem(cfg);
        const auto sols = multistart_solve(prob, alpha, args.starts, opts);

        SolveHeader header{cfg.T, cfg.p, alpha, args.seed, opts.tol, truncation_enabled(cfg)};
        if (!emit(args.out_path, out, err, [&](std::ostream& o) { write_solve_result(o, header, sols); }))
            return static_cast<int>(usage_error);
        if (sols.empty()) {
            err << "no converged solution\n";
            return static_cast<int>(no_result);
        }
        return static_cast<int>(ok);
    });
}

int cmd_eigen(const EigenArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        validate_exponent(args.p);
        validate_size(args.T);
        SolverOptions opts = SolverOptions::eigen_defaults();
        opts.tol = args.tol;
        opts.validate();

        EigenPair pair = [&] {
            try {
                return first_eigenpair(args.p, args.T, opts);
            } catch (const EigenConvergenceError& e) {
                err << "warning: " << e.what() << '\n';
                return e.best();
            }
        }();
        line(out, "p", format_number(args.p));
        line(out, "T", std::to_string(args.T));
        line(out, "lambda1", format_number(pair.lambda));
        line(out, "residual", format_number(pair.residual));
        line(out, "iterations", std::to_string(pair.iterations));
        if (args.p == 2.0) {
            const auto closed = eigenvalues_p2(args.T);
            const auto numeric = symmetric_tridiagonal_eigenvalues(matrix_A(args.T));
            double deviation = std::abs(pair.lambda - closed.front()) / closed.front();
            for (std::size_t k = 0; k < closed.size(); ++k) {
                line(out, "lambda_" + std::to_string(k + 1), format_number(closed[k]));
                deviation = std::max(deviation, std::abs(numeric[k] - closed[k]) / closed[k]);
            }
            line(out, "max_closed_form_deviation", format_number(deviation));
        }
        const auto v = pair.phi.values();
        for (std::size_t k = 0; k < v.size(); ++k) out << k << ' ' << format_number(v[k]) << '\n';
        return static_cast<int>(pair.residual <= args.tol ? ok : no_result);
    });
}

int cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ProblemConfig cfg = load_config(args.config_path);
        if (args.cd && !(args.cd->first > 0.0 && args.cd->second > args.cd->first))
            throw std::invalid_argument("--cd needs 0 < c < d");
        const ProblemSpec prob = build_problem(cfg);
        const double alpha = std::holds_alternative<double>(cfg.alpha) ? std::get<double>(cfg.alpha) : 1.0;

        line(out, "T", std::to_string(cfg.T));
        line(out, "p", format_number(cfg.p));
        line(out, "kappa", format_number(kappa(cfg.p, cfg.T)));

        bool all_true = true;
        if (args.eps) {
            const auto cert = check_thm_esistenza(prob, *args.eps, alpha);
            write_certificate(out, cert);
            all_true = cert.verdict;
        } else if (auto cert = find_admissible_eps(prob, args.scan_lo, args.scan_hi, args.scan_n, alpha)) {
            write_certificate(out, *cert);
        } else {
            out << "no admissible eps in [" << format_number(args.scan_lo) << ", " << format_number(args.scan_hi)
                << "]\n";
            all_true = false;
        }

        const auto& nl = prob.nonlinearity();
        if (nl.is_nonnegative() && cfg.gamma) {
            const double threshold = alpha_threshold(prob, *cfg.gamma);
            line(out, "alpha_threshold", format_number(threshold));
            if (cfg.p == 2.0)
                line(out, "alpha_threshold_p2_display", format_number(alpha_threshold_p2_display(cfg.T, *cfg.gamma)));
            line(out, "positive_solution_for", "alpha in (" + format_number(threshold) + ", inf)");
        } else if (nl.is_nonnegative() && args.estimate_gamma) {
            const std::vector<double> samples{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
            std::vector<double> estimates;
            for (int k = 1; k <= cfg.T; ++k) estimates.push_back(estimate_gamma(prob, k, samples).value);
            const double min_est = *std::min_element(estimates.begin(), estimates.end());
            line(out, "gamma_min_estimate (heuristic)", format_number(min_est));
            if (min_est > 0.0)
                line(out, "alpha_threshold (heuristic)", format_number(alpha_threshold(prob, estimates)));
        }
        if (nl.is_nonnegative()) {
            const auto probes = geometric_grid(10.0, 1e6, 6);
            const auto decay = check_superlinearity_decay(prob, probes);
            line(out, "h_at_infinity_decays (heuristic)", decay.verdict ? "true" : "false");
            line(out, "h_last_probe", format_number(decay.h.back()));
        }

        if (args.cd) {
            const auto window = check_three_solutions_window(prob, args.cd->first, args.cd->second);
            write_window(out, window);
            all_true = all_true && window.verdict;
        }
        return static_cast<int>(all_true ? ok : no_result);
    });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ProblemConfig cfg = load_config(args.config_path);
        if (!std::holds_alternative<AlphaSweep>(cfg.alpha))
            throw ConfigError("alpha", "sweep needs an alpha block {lo, hi, n}");
        if (args.starts < 1) throw std::invalid_argument("--starts must be at least 1");
        const auto alphas = std::get<AlphaSweep>(cfg.alpha).values();
        const SolverOptions opts = solver_options(args.tol, args.seed);
        const auto rows = sweep_alpha(build_solve_problem(cfg), alphas, args.starts, opts);
        if (!emit(args.out_path, out, err, [&](std::ostream& o) { write_sweep_csv(o, rows); }))
            return static_cast<int>(usage_error);
        return static_cast<int>(ok);
    });
}

// ---------------------------------------------------------------------------
// self-test

namespace {

struct Check {
    std::string name;
    double deviation;
    double limit;
    bool passed;
};

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

int cmd_selftest(std::ostream& out, const SelftestFaults& faults) {
    const auto started = std::chrono::steady_clock::now();
    const std::function<double(double, int)> kappa_under_test = [&](double p, int T) {
        return faults.kappa ? kappa(p, T) * (1.0 + 1e-6) : kappa(p, T);
    };
    const std::vector<double> exponents{1.1, 1.5, 2.0, 3.0, 5.0, 10.0};
    std::vector<Check> checks;

    {
        double worst = 0.0;
        for (double p : exponents)
            for (int T = 2; T <= 100; ++T)
                worst = std::max(worst, relative_gap(c_const(p, T), std::pow(kappa_under_test(p, T), p) / p));
        checks.push_back({"c(p,T) = kappa^p/p", worst, 1e-14, worst <= 1e-14});
    }
    {
        double smallest_margin = std::numeric_limits<double>::infinity();
        double theta_gap = 0.0;
        for (double p : exponents)
            for (int T = 2; T <= 100; ++T) {
                const auto cmp = compare_embedding_constants(p, T);
                smallest_margin = std::min(smallest_margin, cmp.margin() / cmp.odd_side);
                const double expected_min = std::pow(2.0, p) / std::pow(T + 1.0, p - 1.0);
                theta_gap = std::max(theta_gap, relative_gap(theta((T + 1) / 2.0, p, T), expected_min));
            }
        checks.push_back({"embedding constant inequality (relative margin)", smallest_margin, 0.0, smallest_margin > 0.0});
        checks.push_back({"theta minimum 2^p/(T+1)^(p-1)", theta_gap, 1e-13, theta_gap <= 1e-13});
    }
    {
        double worst = 0.0;
        for (int T = 2; T <= 60; ++T) {
            const auto lambdas = eigenvalues_p2(T);
            const auto a = matrix_A(T);
            const auto numeric = symmetric_tridiagonal_eigenvalues(a);
            for (int k = 1; k <= T; ++k) {
                std::vector<double> v(static_cast<std::size_t>(T));
                for (int j = 1; j <= T; ++j) v[j - 1] = std::sin(j * k * std::numbers::pi / (T + 1));
                const auto av = a.multiply(v);
                double defect = 0.0;
                double scale = 0.0;
                for (int j = 0; j < T; ++j) {
                    defect = std::max(defect, std::abs(av[j] - lambdas[k - 1] * v[j]));
                    scale = std::max(scale, std::abs(v[j]));
                }
                worst = std::max({worst, defect / scale, relative_gap(numeric[k - 1], lambdas[k - 1])});
            }
        }
        checks.push_back({"lambda_k = 4 sin^2(k pi/(2(T+1)))", worst, 1e-10, worst <= 1e-10});
    }
    {
        double worst = 0.0;
        CounterRng rng(2024, 0);
        const auto nl = nonlinearities::bounded_rational();
        for (double p : {1.5, 2.0, 3.0, 4.0})
            for (int T : {2, 5, 10}) {
                const ProblemSpec prob(T, p, nl);
                for (int s = 0; s < 10; ++s) {
                    std::vector<double> w(static_cast<std::size_t>(T));
                    double prev = 0.0;
                    for (double& x : w) {
                        // steps bounded away from the φ_p kink at 0
                        const double step = rng.uniform(0.05, 0.8) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
                        x = prev + step;
                        prev = x;
                    }
                    if (std::abs(prev) < 0.05) w.back() += 0.1;
                    const auto u = GridFunction::from_interior(w);
                    const auto g = gradient(u, prob, 1.0);
                    const double h = 1e-6 * (1.0 + sup_norm(u));
                    double diff = 0.0;
                    double scale = 0.0;
                    for (int k = 1; k <= T; ++k) {
                        std::vector<double> e(static_cast<std::size_t>(T), 0.0);
                        e[k - 1] = 1.0;
                        const double fd =
                            (energy(u.stepped(h, e), prob, 1.0) - energy(u.stepped(-h, e), prob, 1.0)) / (2.0 * h);
                        diff = std::max(diff, std::abs(fd - g[k - 1]));
                        scale = std::max(scale, std::abs(g[k - 1]));
                    }
                    worst = std::max(worst, diff / scale);
                }
            }
        checks.push_back({"gradient vs central finite differences", worst, 1e-6, worst <= 1e-6});
    }
    {
        double worst = -std::numeric_limits<double>::infinity();
        CounterRng rng(7, 1);
        for (int s = 0; s < 2000; ++s) {
            const int T = 2 + static_cast<int>(rng.uniform() * 30);
            const double p = 1.05 + rng.uniform() * 8.0;
            std::vector<double> w(static_cast<std::size_t>(T));
            for (double& x : w) x = rng.uniform(-1.0, 1.0);
            const auto u = GridFunction::from_interior(w);
            worst = std::max(worst, sup_norm(u) * kappa_under_test(p, T) / p_norm(u, p) - 1.0);
        }
        // tents peaked at the middle attain equality
        for (double p : exponents)
            for (int T = 2; T <= 50; ++T) {
                const int m = (T + 1) / 2;
                GridFunction tent(T);
                for (int k = 1; k <= T; ++k)
                    tent.set(k, k <= m ? static_cast<double>(k) / m : static_cast<double>(T + 1 - k) / (T + 1 - m));
                worst = std::max(worst, kappa_under_test(p, T) / p_norm(tent, p) - 1.0);
            }
        checks.push_back({"sup norm * kappa <= p-norm (excess ratio)", worst, 1e-12, worst <= 1e-12});
    }
    {
        double worst = 0.0;
        for (int T = 2; T <= 20; ++T)
            worst = std::max(worst, std::abs(first_eigenpair(2.0, T).lambda - lambda1_closed_form_p2(T)));
        checks.push_back({"first eigenpair (p = 2) vs closed form", worst, 1e-9, worst <= 1e-9});
    }

    bool all = true;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << "  deviation=" << format_number(c.deviation)
            << "  limit=" << c.limit << '\n';
        all = all && c.passed;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out << "selftest " << (all ? "passed" : "FAILED") << " in " << format_number(seconds) << " s\n";
    return all ? ok : selftest_failed;
}

}  // namespace dplap::cli
