#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "function_spec.hpp"
#include "operator.hpp"
#include "params.hpp"

namespace abd {

/// Failure to read or write experiment output.
class io_error : public error {
public:
    using error::error;
};

/// One error-comparison experiment: a target function, fixed (n, alpha) and
/// several rho values evaluated on a shared grid.
struct ExperimentSpec {
    std::string name = "experiment";
    FunctionSpec function = NamedFunction::sqrt;
    int n = 20;
    double alpha = 0.1;
    std::vector<double> rho_list;
    double x_lo = 0.0;
    double x_hi = 3.0;
    std::size_t points = 61;
    std::filesystem::path output_dir;  ///< empty: nothing is written
    EvalOptions options;

    void validate() const {
        if (rho_list.empty())
            throw domain_error("rho_list must not be empty");
        for (double rho : rho_list) {
            const OperatorParams p(n, alpha, rho);
            if (!p.has_moment(2))
                throw moment_existence_error(p.n_rho(), 2);
        }
        if (points < 2)
            throw domain_error("an experiment grid needs at least 2 points");
        if (!(x_lo >= 0.0 && x_lo < x_hi))
            throw domain_error("x range must satisfy 0 <= lo < hi");
        options.validate();
    }
};

struct RhoSummary {
    double rho = 0.0;
    double max_err = 0.0;
    double argmax_x = 0.0;
    std::string csv_file;  ///< file name inside the output directory, if written
};

struct ExperimentSummary {
    ExperimentSpec spec;
    std::vector<RhoSummary> per_rho;
    double argmin_rho = 0.0;  ///< first rho (in list order) with the smallest max error
    std::vector<CurveTable> tables;
};

/// Shortest decimal form of rho used in file names ("0.5", "5").
inline std::string rho_label(double rho) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", rho);
    return buf;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline constexpr const char* curve_csv_header = "rho,x,f,approx,abs_err";

/// Rows of one table in the CSV schema (no header).
inline void write_curve_rows(std::ostream& out, const CurveTable& table) {
    const std::string rho = format_double(table.params.rho());
    for (const auto& r : table.rows)
        out << rho << ',' << format_double(r.x) << ',' << format_double(r.f_val) << ','
            << format_double(r.approx) << ',' << format_double(r.abs_err) << '\n';
}

inline void write_curve_csv(std::ostream& out, const CurveTable& table) {
    out << curve_csv_header << '\n';
    write_curve_rows(out, table);
}

inline nlohmann::json summary_to_json(const ExperimentSummary& s) {
    using nlohmann::json;
    json per_rho = json::array();
    for (const auto& r : s.per_rho) {
        json item{{"rho", r.rho}, {"max_err", r.max_err}, {"argmax_x", r.argmax_x}};
        if (!r.csv_file.empty())
            item["csv"] = r.csv_file;
        per_rho.push_back(std::move(item));
    }
    const auto& sp = s.spec;
    json settings{{"name", sp.name},
                  {"function", sp.function.name()},
                  {"n", sp.n},
                  {"alpha", sp.alpha},
                  {"rho_list", sp.rho_list},
                  {"x_range", {{"lo", sp.x_lo}, {"hi", sp.x_hi}, {"points", sp.points}}},
                  {"series_eps", sp.options.series_eps},
                  {"quad_rel_tol", sp.options.quad_rel_tol},
                  {"k_max", sp.options.k_max}};
    return json{{"settings", std::move(settings)}, {"per_rho", std::move(per_rho)}, {"argmin_rho", s.argmin_rho}};
}

/// Evaluates the error curve for every rho, then writes
/// `<name>_rho_<rho>.csv` per rho and `<name>_summary.json` (last) when an
/// output directory is set.
inline ExperimentSummary run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentSummary summary;
    summary.spec = spec;
    const auto grid = linear_grid(spec.x_lo, spec.x_hi, spec.points);

    for (double rho : spec.rho_list) {
        const OperatorParams params(spec.n, spec.alpha, rho);
        try {
            summary.tables.push_back(error_curve(params, spec.function, grid, spec.options));
        } catch (const error&) {
            rethrow_tagged("rho=" + format_double(rho));
        }
        const auto& t = summary.tables.back();
        summary.per_rho.push_back({rho, t.max_abs_err(), t.argmax_x(), {}});
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < summary.per_rho.size(); ++i)
        if (summary.per_rho[i].max_err < summary.per_rho[best].max_err)
            best = i;
    summary.argmin_rho = summary.per_rho[best].rho;

    if (!spec.output_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(spec.output_dir, ec);
        if (ec)
            throw io_error("cannot create output directory '" + spec.output_dir.string() + "': " + ec.message());
        auto open = [](const std::filesystem::path& path) {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw io_error("cannot open '" + path.string() + "' for writing");
            return out;
        };
        for (std::size_t i = 0; i < summary.tables.size(); ++i) {
            auto& entry = summary.per_rho[i];
            entry.csv_file = spec.name + "_rho_" + rho_label(entry.rho) + ".csv";
            auto out = open(spec.output_dir / entry.csv_file);
            write_curve_csv(out, summary.tables[i]);
            if (!out.flush())
                throw io_error("write failed for '" + entry.csv_file + "'");
        }
        auto out = open(spec.output_dir / (spec.name + "_summary.json"));
        out << summary_to_json(summary).dump(2) << '\n';
        if (!out.flush())
            throw io_error("write failed for summary of '" + spec.name + "'");
    }
    return summary;
}

/// The three built-in error-comparison presets by name: fig12, fig34,
/// fig56. Grid defaults to [0,3] with 61 points.
inline std::optional<ExperimentSpec> figure_preset(const std::string& name) {
    ExperimentSpec s;
    s.name = name;
    s.n = 20;
    if (name == "fig12") {
        s.function = NamedFunction::sqrt;
        s.alpha = 0.1;
        s.rho_list = {1.0, 5.0, 0.5};
    } else if (name == "fig34") {
        s.function = NamedFunction::sqrt;
        s.alpha = 1.0;
        s.rho_list = {1.0, 5.0, 0.5};
    } else if (name == "fig56") {
        s.function = FunctionSpec::polynomial({2.0, 5.0, 1.0});
        s.alpha = 0.7;
        s.rho_list = {1.0, 5.0, 0.3};
    } else {
        return std::nullopt;
    }
    return s;
}

} // namespace abd
