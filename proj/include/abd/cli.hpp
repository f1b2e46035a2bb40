#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "abd.hpp"

namespace abd::cli {

/// Exit statuses of the command-line tool.
enum exit_code : int {
    ok = 0,
    failure = 1,  ///< I/O and other errors
    usage = 2,
    domain = 3,
    nonconvergence = 4,
};

namespace detail {

using nlohmann::json;

struct CommonFlags {
    std::string fn = "sqrt";
    int n = 20;
    double alpha = 1.0;
    double rho = 1.0;
    double x = 1.0;
    EvalOptions opts;
};

inline void add_params(CLI::App& cmd, CommonFlags& f, bool with_fn, bool with_x) {
    if (with_fn)
        cmd.add_option("--fn", f.fn, "target: sqrt, expneg, ratio, e<i> or poly:c0,c1,...")->capture_default_str();
    cmd.add_option("--n", f.n, "operator index n >= 1")->capture_default_str();
    cmd.add_option("--alpha", f.alpha, "shape parameter in [0,1]")->capture_default_str();
    cmd.add_option("--rho", f.rho, "kernel parameter > 0")->capture_default_str();
    if (with_x)
        cmd.add_option("--x", f.x, "evaluation point >= 0")->capture_default_str();
}

inline void add_eval_options(CLI::App& cmd, EvalOptions& o) {
    cmd.add_option("--series-eps", o.series_eps, "series truncation tolerance")->capture_default_str();
    cmd.add_option("--quad-tol", o.quad_rel_tol, "relative quadrature tolerance")->capture_default_str();
    cmd.add_option("--k-max", o.k_max, "hard cap on series terms")->capture_default_str();
}

inline json params_json(const OperatorParams& p) {
    return json{{"n", p.n()}, {"alpha", p.alpha()}, {"rho", p.rho()}};
}

inline json report_json(const BoundReport& r) {
    return json{{"x", r.x}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"satisfied", r.satisfied}};
}

inline std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw CLI::ValidationError("--n-list", "bad integer '" + item + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw CLI::ValidationError("--n-list", "empty list");
    return out;
}

inline void print_error(std::ostream& err, int code, const std::string& kind, const std::string& reason) {
    err << "abd: error code=" << code << " kind=" << kind << ": " << reason << '\n';
}

} // namespace detail

/// Parses argv (argv[0] is the program name), runs the subcommand and returns
/// the exit status. Results go to `out`, diagnostics to `err`.
inline int dispatch(const std::vector<std::string>& argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    using detail::json;
    CLI::App app{"alpha-Baskakov Durrmeyer operators: evaluation, moments, bounds and experiments", "abd"};
    app.require_subcommand(1);

    detail::CommonFlags f;

    auto* eval = app.add_subcommand("eval", "evaluate A(f;x) at one point");
    detail::add_params(*eval, f, true, true);
    detail::add_eval_options(*eval, f.opts);

    double lo = 0.0, hi = 3.0;
    std::size_t points = 61;
    std::string out_path;
    auto* curve = app.add_subcommand("curve", "CSV table of f, A(f;.) and |f - A(f;.)| on a grid");
    detail::add_params(*curve, f, true, false);
    detail::add_eval_options(*curve, f.opts);
    curve->add_option("--lo", lo, "grid start")->capture_default_str();
    curve->add_option("--hi", hi, "grid end")->capture_default_str();
    curve->add_option("--points", points, "number of grid points")->capture_default_str();
    curve->add_option("--out", out_path, "write to this file instead of stdout");

    int order = 2;
    bool raw = false;
    auto* moments = app.add_subcommand("moments", "closed-form moment against the series oracle (JSON)");
    detail::add_params(*moments, f, false, true);
    detail::add_eval_options(*moments, f.opts);
    moments->add_option("--order", order, "moment order")->capture_default_str();
    moments->add_flag("--raw", raw, "raw moment A(e_i;x) instead of the central moment");

    std::string n_list_text = "50,100,200,400,800";
    auto* vor = app.add_subcommand("voronovskaja", "sequence (n rho - 1)(A(f;x) - f(x)) and its limit (JSON)");
    detail::add_params(*vor, f, true, true);
    detail::add_eval_options(*vor, f.opts);
    vor->add_option("--n-list", n_list_text, "comma-separated operator indices")->capture_default_str();

    std::string kind = "all";
    double lip_m = 1.0, lip_gamma = 0.5, c2_norm = 1.0;
    std::size_t resolution = 4001;
    auto* bounds = app.add_subcommand("bounds", "check the error bounds at one point (JSON)");
    detail::add_params(*bounds, f, true, true);
    detail::add_eval_options(*bounds, f.opts);
    bounds->add_option("--kind", kind, "modulus, lipschitz, c2, kfunctional or all")
        ->check(CLI::IsMember({"modulus", "lipschitz", "c2", "kfunctional", "all"}))
        ->capture_default_str();
    bounds->add_option("--M", lip_m, "Lipschitz constant")->capture_default_str();
    bounds->add_option("--gamma", lip_gamma, "Lipschitz order")->capture_default_str();
    bounds->add_option("--norm", c2_norm, "C_B^2 norm of f for the c2 bound")->capture_default_str();
    bounds->add_option("--resolution", resolution, "grid points for modulus estimates")->capture_default_str();

    std::string preset;
    std::string out_dir = ".";
    bool custom_grid = false;
    auto* figures = app.add_subcommand("figures", "run a built-in error comparison preset (fig12, fig34, fig56)");
    figures->add_option("preset", preset, "fig12, fig34 or fig56")
        ->required()
        ->check(CLI::IsMember({"fig12", "fig34", "fig56"}));
    figures->add_option("--out", out_dir, "output directory")->capture_default_str();
    auto* flo = figures->add_option("--lo", lo, "grid start")->capture_default_str();
    auto* fhi = figures->add_option("--hi", hi, "grid end")->capture_default_str();
    auto* fpts = figures->add_option("--points", points, "number of grid points")->capture_default_str();
    detail::add_eval_options(*figures, f.opts);

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    if (!args.empty())
        args.pop_back();  // program name
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        detail::print_error(err, usage, "usage", e.what());
        return usage;
    }
    custom_grid = flo->count() + fhi->count() + fpts->count() > 0;

    // Malformed --fn and --n-list values are usage errors, not domain errors.
    std::optional<FunctionSpec> target;
    std::vector<int> n_list;
    try {
        if (*eval || *curve || *vor || *bounds)
            target = FunctionSpec::parse(f.fn);
        if (*vor)
            n_list = detail::parse_int_list(n_list_text);
    } catch (const std::exception& e) {
        detail::print_error(err, usage, "usage", e.what());
        return usage;
    }

    try {
        if (*eval) {
            const OperatorParams p(f.n, f.alpha, f.rho);
            const auto& fn = *target;
            const auto r = apply_operator_detailed(p, fn, f.x, f.opts);
            const double fx = fn(f.x);
            out << json{{"params", detail::params_json(p)},
                        {"function", fn.name()},
                        {"x", f.x},
                        {"f", fx},
                        {"approx", r.value},
                        {"abs_err", std::fabs(fx - r.value)},
                        {"last_index", r.last_index},
                        {"tail_estimate", r.tail_estimate}}
                       .dump(2)
                << '\n';
        } else if (*curve) {
            const OperatorParams p(f.n, f.alpha, f.rho);
            const auto table = error_curve(p, *target, linear_grid(lo, hi, points), f.opts);
            if (out_path.empty()) {
                write_curve_csv(out, table);
            } else {
                std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
                if (!file)
                    throw io_error("cannot open '" + out_path + "' for writing");
                write_curve_csv(file, table);
                if (!file.flush())
                    throw io_error("write failed for '" + out_path + "'");
            }
        } else if (*moments) {
            const OperatorParams p(f.n, f.alpha, f.rho);
            json j{{"params", detail::params_json(p)}, {"x", f.x}, {"kind", raw ? "raw" : "central"}, {"order", order}};
            if (order < 0)
                throw domain_error("moment order must be non-negative");
            if (raw) {
                if (order > 2)
                    throw domain_error("closed-form raw moments exist for orders 0, 1, 2 only");
                const auto r = raw_moment_report(p, f.x, order, f.opts);
                j.update({{"closed_form", r.closed_form}, {"oracle", r.oracle}, {"rel_gap", r.rel_gap},
                          {"formula_mismatch", r.formula_mismatch()}});
            } else if (order == 1 || order == 2) {
                const auto r = central_moment_report(p, f.x, order, f.opts);
                j.update({{"closed_form", r.closed_form}, {"oracle", r.oracle}, {"rel_gap", r.rel_gap},
                          {"formula_mismatch", r.formula_mismatch()}});
            } else if (order == 4) {
                const double lead = central_moment4_leading(p, f.x);
                const double oracle = central_moment_oracle(p, f.x, 4, f.opts);
                j.update({{"closed_form", lead}, {"leading_term_only", true}, {"oracle", oracle},
                          {"oracle_to_leading", oracle / lead}});
            } else {
                const double oracle = central_moment_oracle(p, f.x, order, f.opts);
                j.update({{"closed_form", nullptr}, {"oracle", oracle}});
            }
            out << j.dump(2) << '\n';
        } else if (*vor) {
            const auto& fn = *target;
            const double limit = voronovskaja_limit(f.alpha, f.rho, fn, f.x);
            const auto seq = voronovskaja_sequence(f.alpha, f.rho, fn, f.x, n_list, f.opts);
            json rows = json::array();
            for (std::size_t i = 0; i < seq.size(); ++i)
                rows.push_back({{"n", n_list[i]}, {"r_n", seq[i]}, {"gap", std::fabs(seq[i] - limit)}});
            out << json{{"function", fn.name()}, {"alpha", f.alpha}, {"rho", f.rho}, {"x", f.x},
                        {"limit", limit}, {"sequence", rows}}
                       .dump(2)
                << '\n';
        } else if (*bounds) {
            const OperatorParams p(f.n, f.alpha, f.rho);
            const auto& fn = *target;
            json j{{"params", detail::params_json(p)}, {"function", fn.name()}, {"x", f.x}};
            const bool all = kind == "all";
            if (all || kind == "modulus")
                j["modulus"] = detail::report_json(
                    bound_modulus(p, fn, f.x, default_bound_interval(p, f.x, resolution), f.opts));
            if (all || kind == "lipschitz") {
                auto r = detail::report_json(bound_lipschitz(p, lip_m, lip_gamma, fn, f.x, f.opts));
                r["M"] = lip_m;
                r["gamma"] = lip_gamma;
                j["lipschitz"] = r;
            }
            if (all || kind == "c2")
                j["c2"] = {{"norm", c2_norm}, {"bound", bound_c2(p, c2_norm, f.x)}};
            if (all || kind == "kfunctional") {
                const auto q = k_functional_quantities(p, fn, f.x, default_bound_interval(p, f.x, resolution));
                j["kfunctional"] = {{"gamma_n", q.gamma_n}, {"delta_n", q.delta_n}, {"argument", q.argument},
                                    {"omega2", q.omega2}};
            }
            out << j.dump(2) << '\n';
        } else if (*figures) {
            auto spec = *figure_preset(preset);
            if (custom_grid) {
                spec.x_lo = lo;
                spec.x_hi = hi;
                spec.points = points;
            }
            spec.output_dir = out_dir;
            spec.options = f.opts;
            out << summary_to_json(run_experiment(spec)).dump(2) << '\n';
        }
    } catch (const numerical_error& e) {
        detail::print_error(err, nonconvergence, "nonconvergence", e.what());
        return nonconvergence;
    } catch (const domain_error& e) {
        detail::print_error(err, domain, "domain", e.what());
        return domain;
    } catch (const io_error& e) {
        detail::print_error(err, failure, "io", e.what());
        return failure;
    } catch (const std::exception& e) {
        detail::print_error(err, failure, "internal", e.what());
        return failure;
    }
    return ok;
}

} // namespace abd::cli
