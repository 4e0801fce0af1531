#include "radarcomm/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "radarcomm/analytic.hpp"
#include "radarcomm/rng.hpp"
#include "radarcomm/simulator.hpp"
#include "radarcomm/tradeoff.hpp"

namespace radarcomm::cli {

namespace fs = std::filesystem;

namespace {

constexpr long long kDefaultCalibrationTrials = 10000;
constexpr long long kDefaultThroughputTrials = 100000;

[[noreturn]] void config_error(const std::string& key, const std::string& why) {
    throw Error(Errc::ConfigError, "key '" + key + "': " + why);
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) config_error(key, "not a number: '" + text + "'");
    return v;
}

long long parse_int(const std::string& key, const std::string& text) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        config_error(key, "not an integer: '" + text + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        config_error(key, "not an unsigned integer: '" + text + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) config_error(key, "empty list");
    return out;
}

std::string join_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

double checked_finite(double v, const std::string& what, const std::string& ctx) {
    if (!std::isfinite(v))
        throw Error(Errc::NumericalFailure, what + " is non-finite at " + ctx);
    return v;
}

// ---------------------------------------------------------------------------
// CSV plumbing

class CsvFile {
public:
    CsvFile(const fs::path& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw Error(Errc::ConfigError, "cannot open " + path.string());
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

std::string opt_cell(std::optional<double> v) {
    return v ? format_double(*v) : std::string{};
}

// ---------------------------------------------------------------------------
// Analytic row block shared by every subcommand

struct AnalyticCells {
    std::string status;  // ok | no_interference | infeasible_pf
    double c_activity = 0.0;
    std::optional<double> theta_w;
    std::optional<double> d_rm_m;
    std::optional<double> levy_scale_w;
    std::optional<double> p_s;
    std::optional<double> t;
    double t_small_lambda_limit = 0.0;
};

AnalyticCells analytic_cells(const SystemParams& p, double lambda,
                             const std::string& ctx) {
    AnalyticCells cells;
    cells.status = "ok";
    cells.c_activity = analytic::activity_factor(p);
    cells.t_small_lambda_limit = (1.0 - p.eps()) * p.q_c() * lambda;
    try {
        if (const auto theta = analytic::detection_threshold(p, lambda)) {
            cells.theta_w = checked_finite(*theta, "theta", ctx);
            cells.d_rm_m =
                checked_finite(analytic::range_from_threshold(p, *theta), "d_rm", ctx);
        } else {
            cells.status = "no_interference";
        }
    } catch (const Error& e) {
        if (e.code() != Errc::InfeasibleFalseAlarm) throw;
        cells.status = "infeasible_pf";
    }
    if (p.alpha() == 4.0) {
        cells.levy_scale_w = analytic::levy_scale(p, lambda);
        cells.p_s = checked_finite(analytic::success_probability(p, lambda), "P_s", ctx);
        cells.t = checked_finite(analytic::throughput_density(p, lambda), "T", ctx);
    }
    return cells;
}

// ---------------------------------------------------------------------------
// Scenario input columns common to the sweep CSVs

const std::vector<std::string> kInputColumns = {
    "lambda",  "pt_dbm", "freq_ghz", "phi_deg", "alpha",  "sigma", "m_r", "m",
    "eps_requested", "eps_eff", "q_c", "gamma", "d_c", "pf_target"};

std::vector<std::string> input_cells(const ExperimentConfig& cfg,
                                     const SystemParams& p, double lambda,
                                     double eps_requested) {
    return {format_double(lambda),
            format_double(cfg.pt_dbm),
            format_double(cfg.freq_ghz),
            format_double(cfg.phi_deg),
            format_double(p.alpha()),
            format_double(p.sigma()),
            std::to_string(p.m_r()),
            std::to_string(p.m()),
            format_double(eps_requested),
            format_double(p.eps()),
            format_double(p.q_c()),
            format_double(p.gamma()),
            format_double(p.d_c()),
            format_double(p.pf_target())};
}

void append(std::vector<std::string>& row, std::vector<std::string> cells) {
    for (auto& c : cells) row.push_back(std::move(c));
}

std::uint64_t point_seed(std::uint64_t master, std::uint64_t file_index,
                         std::uint64_t point_index) {
    return rng::hash_combine(rng::hash_combine(master, file_index), point_index);
}

double window_for(const ExperimentConfig& cfg, const SystemParams& p, double lambda) {
    return cfg.window_radius > 0.0 ? cfg.window_radius
                                   : sim::default_window_radius(p, lambda);
}

void require_single(const ExperimentConfig& cfg, const std::vector<double>& list,
                    const char* key) {
    if (list.size() != 1)
        config_error(key, cfg.subcommand + " takes a single value");
}

void require_alpha4_config(const ExperimentConfig& cfg) {
    if (cfg.alpha != 4.0)
        config_error("alpha", cfg.subcommand + " requires alpha = 4");
}

// ---------------------------------------------------------------------------
// Plot script emission (convenience only; CSVs are the normative artifact)

void write_plot_script(const fs::path& dir, const std::string& name,
                       const std::vector<std::string>& csvs,
                       const std::string& x_col, bool log_x,
                       const std::vector<std::string>& line_cols,
                       const std::vector<std::string>& marker_cols,
                       const std::string& y_label, bool log_y,
                       std::vector<std::string>& files) {
    const std::string script_name = "plot_" + name + ".py";
    std::ofstream out(dir / script_name);
    out << "#!/usr/bin/env python3\n"
        << "# Plots the CSVs emitted next to this script.\n"
        << "import csv\n"
        << "import matplotlib\n"
        << "matplotlib.use(\"Agg\")\n"
        << "import matplotlib.pyplot as plt\n\n"
        << "def load(path):\n"
        << "    with open(path, newline=\"\") as f:\n"
        << "        return list(csv.DictReader(f))\n\n"
        << "def col(rows, name):\n"
        << "    out = []\n"
        << "    for r in rows:\n"
        << "        v = r.get(name, \"\")\n"
        << "        out.append(float(v) if v not in (\"\", None) else None)\n"
        << "    return out\n\n"
        << "fig, ax = plt.subplots(figsize=(6, 4.5))\n";
    for (const auto& csv : csvs) {
        out << "rows = load(\"" << csv << "\")\n"
            << "x = col(rows, \"" << x_col << "\")\n";
        for (const auto& c : line_cols)
            out << "ax.plot(x, col(rows, \"" << c << "\"), label=\"" << csv << ": " << c
                << "\")\n";
        for (const auto& c : marker_cols)
            out << "ax.plot(x, col(rows, \"" << c << "\"), \"o\", mfc=\"none\", label=\""
                << csv << ": " << c << "\")\n";
    }
    if (log_x) out << "ax.set_xscale(\"log\")\n";
    if (log_y) out << "ax.set_yscale(\"log\")\n";
    out << "ax.set_xlabel(\"" << x_col << "\")\n"
        << "ax.set_ylabel(\"" << y_label << "\")\n"
        << "ax.grid(True, which=\"both\", alpha=0.3)\n"
        << "ax.legend(fontsize=7)\n"
        << "fig.tight_layout()\n"
        << "fig.savefig(\"" << name << ".png\", dpi=150)\n"
        << "print(\"wrote " << name << ".png\")\n";
    files.push_back(script_name);
}

// ---------------------------------------------------------------------------
// Subcommand runners

RunResult run_fig2(const ExperimentConfig& cfg, const fs::path& dir) {
    RunResult result;
    require_single(cfg, cfg.eps, "eps");
    require_single(cfg, cfg.qc, "qc");
    const SystemParams p = scenario_params(cfg, cfg.eps[0], cfg.qc[0]);
    const auto lambdas =
        axis_values(*cfg.lambda_min, *cfg.lambda_max, *cfg.points, cfg.spacing == "log");

    std::vector<std::string> header = kInputColumns;
    append(header, {"status", "c_activity", "theta_analytic_w", "d_rm_analytic_m",
                    "trials", "window_radius_m", "theta_sim_w", "d_rm_sim_m"});
    CsvFile csv(dir / "fig2.csv", header);
    result.files.push_back("fig2.csv");

    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double lambda = lambdas[i];
        const std::string ctx = "fig2 lambda=" + format_double(lambda);
        const auto cells = analytic_cells(p, lambda, ctx);
        auto row = input_cells(cfg, p, lambda, cfg.eps[0]);
        append(row, {cells.status, format_double(cells.c_activity),
                     opt_cell(cells.theta_w), opt_cell(cells.d_rm_m)});
        if (cells.status == "ok") {
            const double window = window_for(cfg, p, lambda);
            const double theta_sim = sim::calibrate_threshold(
                p, lambda, static_cast<int>(cfg.trials), window,
                sim::SeedSpec{point_seed(cfg.seed, 0, i), 0}, cfg.threads);
            append(row, {std::to_string(cfg.trials), format_double(window),
                         format_double(theta_sim),
                         theta_sim > 0.0
                             ? format_double(sim::simulated_radar_range(p, theta_sim))
                             : std::string{}});
        } else {
            append(row, {"", "", "", ""});
        }
        csv.write_row(row);
    }
    write_plot_script(dir, "fig2", {"fig2.csv"}, "lambda", true,
                      {"d_rm_analytic_m"}, {"d_rm_sim_m"}, "radar range [m]", false,
                      result.files);
    return result;
}

RunResult run_fig3(const ExperimentConfig& cfg, const fs::path& dir) {
    RunResult result;
    require_alpha4_config(cfg);
    require_single(cfg, cfg.qc, "qc");
    const auto lambdas =
        axis_values(*cfg.lambda_min, *cfg.lambda_max, *cfg.points, cfg.spacing == "log");

    std::vector<std::string> header = kInputColumns;
    append(header, {"status", "p_s_analytic", "t_analytic", "trials",
                    "window_radius_m", "p_s_sim", "p_s_sim_halfwidth", "t_sim",
                    "t_sim_halfwidth"});

    std::vector<std::string> csv_names;
    for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
        const double eps_req = cfg.eps[e];
        const SystemParams p = scenario_params(cfg, eps_req, cfg.qc[0]);
        const std::string name = "fig3_eps" + format_double(eps_req) + ".csv";
        CsvFile csv(dir / name, header);
        result.files.push_back(name);
        csv_names.push_back(name);
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            const double lambda = lambdas[i];
            const std::string ctx =
                "fig3 eps=" + format_double(eps_req) + " lambda=" + format_double(lambda);
            const auto cells = analytic_cells(p, lambda, ctx);
            auto row = input_cells(cfg, p, lambda, eps_req);
            append(row, {cells.status, opt_cell(cells.p_s), opt_cell(cells.t)});
            const double window = window_for(cfg, p, lambda);
            const auto est = sim::estimate_throughput(
                p, lambda, static_cast<int>(cfg.trials), window,
                sim::SeedSpec{point_seed(cfg.seed, e, i), 0}, cfg.threads);
            append(row, {std::to_string(cfg.trials), format_double(window),
                         format_double(est.success_probability.value),
                         format_double(est.success_probability.half_width),
                         format_double(est.throughput.value),
                         format_double(est.throughput.half_width)});
            csv.write_row(row);
        }
    }
    write_plot_script(dir, "fig3", csv_names, "lambda", true, {"t_analytic"},
                      {"t_sim"}, "throughput density [pkts/slot/m^2]", true,
                      result.files);
    return result;
}

RunResult run_fig4(const ExperimentConfig& cfg, const fs::path& dir) {
    RunResult result;

    std::vector<std::string> header = kInputColumns;
    append(header, {"status", "c_activity", "theta_analytic_w", "d_rm_analytic_m",
                    "trials", "window_radius_m", "theta_sim_w", "d_rm_sim_m"});

    std::vector<std::string> csv_names;
    for (std::size_t q = 0; q < cfg.qc.size(); ++q) {
        const double q_c = cfg.qc[q];
        const std::string name = "fig4_qc" + format_double(q_c) + ".csv";
        CsvFile csv(dir / name, header);
        result.files.push_back(name);
        csv_names.push_back(name);
        for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
            const double eps_req = cfg.eps[e];
            const SystemParams p = scenario_params(cfg, eps_req, q_c);
            const double lambda = cfg.lambda;
            const std::string ctx =
                "fig4 qc=" + format_double(q_c) + " eps=" + format_double(eps_req);
            const auto cells = analytic_cells(p, lambda, ctx);
            auto row = input_cells(cfg, p, lambda, eps_req);
            append(row, {cells.status, format_double(cells.c_activity),
                         opt_cell(cells.theta_w), opt_cell(cells.d_rm_m)});
            if (cells.status == "ok" && cfg.trials > 0) {
                const double window = window_for(cfg, p, lambda);
                const double theta_sim = sim::calibrate_threshold(
                    p, lambda, static_cast<int>(cfg.trials), window,
                    sim::SeedSpec{point_seed(cfg.seed, q, e), 0}, cfg.threads);
                append(row, {std::to_string(cfg.trials), format_double(window),
                             format_double(theta_sim),
                             theta_sim > 0.0
                                 ? format_double(sim::simulated_radar_range(p, theta_sim))
                                 : std::string{}});
            } else {
                append(row, {"", "", "", ""});
            }
            csv.write_row(row);
        }
    }
    write_plot_script(dir, "fig4", csv_names, "eps_eff", false,
                      {"d_rm_analytic_m"}, {"d_rm_sim_m"}, "radar range [m]", false,
                      result.files);
    return result;
}

RunResult run_fig5(const ExperimentConfig& cfg, const fs::path& dir) {
    RunResult result;
    require_alpha4_config(cfg);
    require_single(cfg, cfg.eps, "eps");
    const auto lambdas =
        axis_values(*cfg.lambda_min, *cfg.lambda_max, *cfg.points, cfg.spacing == "log");

    std::vector<std::string> header = {
        "lambda", "pt_dbm", "freq_ghz", "phi_deg", "alpha", "sigma",
        "m_r", "m", "eps_requested", "eps_eff", "gamma", "d_c", "pf_target",
        "d_min", "lambda_crit", "feasible", "q_c_star", "t_star", "binding"};

    bool any_constrained_feasible = false;
    std::vector<std::string> csv_names;
    auto run_curve = [&](const std::string& name, std::optional<double> d_min) {
        const SystemParams base = scenario_params(cfg, cfg.eps[0], 0.5);
        CsvFile csv(dir / name, header);
        result.files.push_back(name);
        csv_names.push_back(name);
        std::optional<double> lambda_crit;
        if (d_min) lambda_crit = tradeoff::critical_density(base, *d_min);
        for (double lambda : lambdas) {
            const std::string ctx = name + " lambda=" + format_double(lambda);
            const auto res = tradeoff::optimize_throughput(base, lambda, d_min);
            if (res.feasible) {
                if (d_min) any_constrained_feasible = true;
                checked_finite(res.t_star, "T*", ctx);
            }
            std::vector<std::string> row = {
                format_double(lambda),
                format_double(cfg.pt_dbm),
                format_double(cfg.freq_ghz),
                format_double(cfg.phi_deg),
                format_double(base.alpha()),
                format_double(base.sigma()),
                std::to_string(base.m_r()),
                std::to_string(base.m()),
                format_double(cfg.eps[0]),
                format_double(base.eps()),
                format_double(base.gamma()),
                format_double(base.d_c()),
                format_double(base.pf_target()),
                opt_cell(d_min),
                opt_cell(lambda_crit),
                res.feasible ? "1" : "0",
                opt_cell(res.q_c_star),
                format_double(res.t_star),
                tradeoff::binding_name(res.binding)};
            csv.write_row(row);
        }
    };

    run_curve("fig5_unconstrained.csv", std::nullopt);
    for (double d_min : cfg.dmin)
        run_curve("fig5_dmin" + format_double(d_min) + ".csv", d_min);

    write_plot_script(dir, "fig5", csv_names, "lambda", true, {"t_star"}, {},
                      "max throughput density T* [pkts/slot/m^2]", true,
                      result.files);
    // Flagged rows are normal output; only a constraint that no sweep point
    // can meet makes the run fail.
    result.exit_code = (cfg.dmin.empty() || any_constrained_feasible) ? 0 : 3;
    return result;
}

void append_analytic_block(std::vector<std::string>& row, const AnalyticCells& cells,
                           const std::string& quantity) {
    row.push_back(cells.status);
    if (quantity != "throughput") {
        append(row, {format_double(cells.c_activity), opt_cell(cells.theta_w),
                     opt_cell(cells.d_rm_m)});
    }
    if (quantity != "radar") {
        append(row, {opt_cell(cells.levy_scale_w), opt_cell(cells.p_s),
                     opt_cell(cells.t), format_double(cells.t_small_lambda_limit)});
    }
}

std::vector<std::string> analytic_block_header(const std::string& quantity) {
    std::vector<std::string> cols = {"status"};
    if (quantity != "throughput")
        append(cols, {"c_activity", "theta_analytic_w", "d_rm_analytic_m"});
    if (quantity != "radar")
        append(cols, {"levy_scale_w", "p_s_analytic", "t_analytic",
                      "t_small_lambda_limit"});
    return cols;
}

RunResult run_analytic(const ExperimentConfig& cfg, const fs::path& dir) {
    RunResult result;
    const bool sweep_axis = cfg.lambda_min.has_value();
    const auto lambdas = sweep_axis
                             ? axis_values(*cfg.lambda_min, *cfg.lambda_max,
                                           *cfg.points, cfg.spacing == "log")
                             : std::vector<double>{cfg.lambda};

    std::vector<std::string> header = kInputColumns;
    append(header, analytic_block_header(cfg.quantity));
    CsvFile csv(dir / "analytic.csv", header);
    result.files.push_back("analytic.csv");

    for (double eps_req : cfg.eps) {
        for (double q_c : cfg.qc) {
            const SystemParams p = scenario_params(cfg, eps_req, q_c);
            for (double lambda : lambdas) {
                const std::string ctx = "analytic lambda=" + format_double(lambda);
                const auto cells = analytic_cells(p, lambda, ctx);
                auto row = input_cells(cfg, p, lambda, eps_req);
                append_analytic_block(row, cells, cfg.quantity);
                csv.write_row(row);
            }
        }
    }
    write_plot_script(dir, "analytic", {"analytic.csv"}, "lambda", sweep_axis,
                      cfg.quantity == "radar"
                          ? std::vector<std::string>{"d_rm_analytic_m"}
                          : std::vector<std::string>{"t_analytic"},
                      {}, "analytic output", false, result.files);
    return result;
}

RunResult run_simulate(const ExperimentConfig& cfg, const fs::path& dir) {
    RunResult result;
    require_single(cfg, cfg.eps, "eps");
    require_single(cfg, cfg.qc, "qc");
    const SystemParams p = scenario_params(cfg, cfg.eps[0], cfg.qc[0]);
    const bool sweep_axis = cfg.lambda_min.has_value();
    const auto lambdas = sweep_axis
                             ? axis_values(*cfg.lambda_min, *cfg.lambda_max,
                                           *cfg.points, cfg.spacing == "log")
                             : std::vector<double>{cfg.lambda};

    // A single --trials overrides both phases; defaults differ.
    const long long trials_cal =
        cfg.trials > 0 ? cfg.trials : kDefaultCalibrationTrials;
    const long long trials_tput =
        cfg.trials > 0 ? cfg.trials : kDefaultThroughputTrials;

    std::vector<std::string> header = kInputColumns;
    append(header, {"status", "c_activity", "theta_analytic_w", "d_rm_analytic_m",
                    "p_s_analytic", "t_analytic", "trials_calibration",
                    "trials_throughput", "window_radius_m", "theta_sim_w",
                    "d_rm_sim_m", "p_s_sim", "p_s_sim_halfwidth", "t_sim",
                    "t_sim_halfwidth"});
    CsvFile csv(dir / "simulate.csv", header);
    result.files.push_back("simulate.csv");

    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double lambda = lambdas[i];
        const std::string ctx = "simulate lambda=" + format_double(lambda);
        const auto cells = analytic_cells(p, lambda, ctx);
        auto row = input_cells(cfg, p, lambda, cfg.eps[0]);
        append(row, {cells.status, format_double(cells.c_activity),
                     opt_cell(cells.theta_w), opt_cell(cells.d_rm_m),
                     opt_cell(cells.p_s), opt_cell(cells.t)});
        const double window = window_for(cfg, p, lambda);
        append(row, {std::to_string(trials_cal), std::to_string(trials_tput),
                     format_double(window)});
        if (cells.status == "ok") {
            const double theta_sim = sim::calibrate_threshold(
                p, lambda, static_cast<int>(trials_cal), window,
                sim::SeedSpec{point_seed(cfg.seed, 0, i), 0}, cfg.threads);
            append(row, {format_double(theta_sim),
                         theta_sim > 0.0
                             ? format_double(sim::simulated_radar_range(p, theta_sim))
                             : std::string{}});
        } else {
            append(row, {"", ""});
        }
        const auto est = sim::estimate_throughput(
            p, lambda, static_cast<int>(trials_tput), window,
            sim::SeedSpec{point_seed(cfg.seed, 1, i), 0}, cfg.threads);
        append(row, {format_double(est.success_probability.value),
                     format_double(est.success_probability.half_width),
                     format_double(est.throughput.value),
                     format_double(est.throughput.half_width)});
        csv.write_row(row);
    }
    write_plot_script(dir, "simulate", {"simulate.csv"}, "lambda", sweep_axis,
                      {"d_rm_analytic_m", "t_analytic"}, {"d_rm_sim_m", "t_sim"},
                      "outputs", false, result.files);
    return result;
}

RunResult run_sweep(const ExperimentConfig& cfg, const fs::path& dir) {
    RunResult result;
    static const std::vector<std::string> kAxes = {
        "lambda", "qc", "eps", "phi_deg", "sigma", "gamma", "dc", "pf",
        "pt_dbm", "freq_ghz"};
    if (std::find(kAxes.begin(), kAxes.end(), cfg.axis) == kAxes.end())
        config_error("axis", "unknown sweep axis '" + cfg.axis + "'");
    if (!cfg.axis_min || !cfg.axis_max)
        config_error("axis_min", "sweep requires axis_min and axis_max");
    require_single(cfg, cfg.eps, "eps");
    require_single(cfg, cfg.qc, "qc");
    const auto values = axis_values(*cfg.axis_min, *cfg.axis_max,
                                    cfg.points.value_or(13), cfg.spacing == "log");

    std::vector<std::string> header = {"axis", "axis_value"};
    append(header, kInputColumns);
    append(header, analytic_block_header("all"));
    CsvFile csv(dir / "sweep.csv", header);
    result.files.push_back("sweep.csv");

    for (double v : values) {
        ExperimentConfig local = cfg;
        double lambda = cfg.lambda;
        double eps_req = cfg.eps[0];
        double q_c = cfg.qc[0];
        if (cfg.axis == "lambda") lambda = v;
        else if (cfg.axis == "qc") q_c = v;
        else if (cfg.axis == "eps") eps_req = v;
        else if (cfg.axis == "phi_deg") local.phi_deg = v;
        else if (cfg.axis == "sigma") local.sigma = v;
        else if (cfg.axis == "gamma") local.gamma = v;
        else if (cfg.axis == "dc") local.dc = v;
        else if (cfg.axis == "pf") local.pf = v;
        else if (cfg.axis == "pt_dbm") local.pt_dbm = v;
        else if (cfg.axis == "freq_ghz") local.freq_ghz = v;
        const SystemParams p = scenario_params(local, eps_req, q_c);
        const std::string ctx = "sweep " + cfg.axis + "=" + format_double(v);
        const auto cells = analytic_cells(p, lambda, ctx);
        std::vector<std::string> row = {cfg.axis, format_double(v)};
        append(row, input_cells(local, p, lambda, eps_req));
        append_analytic_block(row, cells, "all");
        csv.write_row(row);
    }
    write_plot_script(dir, "sweep", {"sweep.csv"}, "axis_value",
                      cfg.spacing == "log", {"d_rm_analytic_m", "t_analytic"}, {},
                      "analytic output", false, result.files);
    return result;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<double> axis_values(double min, double max, int points,
                                bool log_spacing) {
    if (points < 1) throw Error(Errc::ConfigError, "key 'points': must be >= 1");
    if (max < min) throw Error(Errc::ConfigError, "key 'axis': max below min");
    if (log_spacing && !(min > 0.0))
        throw Error(Errc::ConfigError, "key 'spacing': log spacing needs min > 0");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        out.push_back(min);
        return out;
    }
    for (int i = 0; i < points; ++i) {
        if (i == 0) {
            out.push_back(min);
        } else if (i == points - 1) {
            out.push_back(max);
        } else {
            const double f = static_cast<double>(i) / (points - 1);
            out.push_back(
                log_spacing
                    ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                    : min + f * (max - min));
        }
    }
    return out;
}

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
    if (key == "subcommand") c.subcommand = value;
    else if (key == "pt_dbm") c.pt_dbm = parse_double(key, value);
    else if (key == "freq_ghz") c.freq_ghz = parse_double(key, value);
    else if (key == "phi_deg") c.phi_deg = parse_double(key, value);
    else if (key == "alpha") c.alpha = parse_double(key, value);
    else if (key == "sigma") c.sigma = parse_double(key, value);
    else if (key == "mr") c.mr = static_cast<int>(parse_int(key, value));
    else if (key == "m") c.m = static_cast<int>(parse_int(key, value));
    else if (key == "eps") c.eps = parse_list(key, value);
    else if (key == "qc") c.qc = parse_list(key, value);
    else if (key == "gamma") c.gamma = parse_double(key, value);
    else if (key == "dc") c.dc = parse_double(key, value);
    else if (key == "pf") c.pf = parse_double(key, value);
    else if (key == "lambda") c.lambda = parse_double(key, value);
    else if (key == "lambda_min") c.lambda_min = parse_double(key, value);
    else if (key == "lambda_max") c.lambda_max = parse_double(key, value);
    else if (key == "points") c.points = static_cast<int>(parse_int(key, value));
    else if (key == "axis") c.axis = value;
    else if (key == "axis_min") c.axis_min = parse_double(key, value);
    else if (key == "axis_max") c.axis_max = parse_double(key, value);
    else if (key == "spacing") c.spacing = value;
    else if (key == "dmin") c.dmin = parse_list(key, value);
    else if (key == "quantity") c.quantity = value;
    else if (key == "trials") c.trials = parse_int(key, value);
    else if (key == "window_radius") c.window_radius = parse_double(key, value);
    else if (key == "seed") c.seed = parse_u64(key, value);
    else if (key == "threads") c.threads = static_cast<int>(parse_int(key, value));
    else if (key == "out") c.out = value;
    else if (key == "version") { /* informational manifest entry */ }
    else config_error(key, "unknown key");
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, "key 'config': cannot open " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::ConfigError, "key '" + line + "': missing '=' on line " +
                                               std::to_string(line_no));
        apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

ExperimentConfig resolve_defaults(const ExperimentConfig& config) {
    ExperimentConfig c = config;
    const std::string& sub = c.subcommand;
    auto default_axis = [&](double lo, double hi, int pts) {
        if (!c.lambda_min) c.lambda_min = lo;
        if (!c.lambda_max) c.lambda_max = hi;
        if (!c.points) c.points = pts;
    };
    if (sub == "fig2") {
        default_axis(1e-5, 1e-2, 13);
        if (c.eps.empty()) c.eps = {0.5};
        if (c.qc.empty()) c.qc = {0.5};
        if (c.trials <= 0) c.trials = kDefaultCalibrationTrials;
    } else if (sub == "fig3") {
        default_axis(1e-4, 1.0, 13);
        if (c.eps.empty()) c.eps = {0.2, 0.5, 0.8};
        if (c.qc.empty()) c.qc = {0.5};
        if (c.trials <= 0) c.trials = kDefaultThroughputTrials;
    } else if (sub == "fig4") {
        if (c.eps.empty()) c.eps = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        if (c.qc.empty()) c.qc = {0.005, 0.2, 1.0};
        if (c.trials <= 0) c.trials = kDefaultCalibrationTrials;
    } else if (sub == "fig5") {
        default_axis(1e-5, 1e-1, 25);
        if (c.eps.empty()) c.eps = {0.5};
    } else if (sub == "analytic" || sub == "simulate" || sub == "sweep") {
        if (c.eps.empty()) c.eps = {0.5};
        if (c.qc.empty()) c.qc = {0.5};
        if (c.lambda_min && !c.points) c.points = 13;
        if (!c.points && sub == "sweep") c.points = 13;
    } else {
        throw Error(Errc::ConfigError, "key 'subcommand': unknown subcommand '" + sub + "'");
    }
    if (c.trials < 0 || c.trials > 100'000'000)
        throw Error(Errc::ConfigError, "key 'trials': must lie in [0, 1e8]");
    if (c.lambda_min.has_value() != c.lambda_max.has_value())
        throw Error(Errc::ConfigError,
                    "key 'lambda_min': lambda_min and lambda_max must be given together");
    if (c.spacing != "log" && c.spacing != "linear")
        throw Error(Errc::ConfigError, "key 'spacing': must be log or linear");
    if (c.quantity != "all" && c.quantity != "radar" && c.quantity != "throughput")
        throw Error(Errc::ConfigError,
                    "key 'quantity': must be all, radar or throughput");
    return c;
}

std::string manifest_text(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "# run manifest; feed back through --config to reproduce\n";
    os << "version = " << kToolVersion << '\n';
    os << "subcommand = " << c.subcommand << '\n';
    os << "pt_dbm = " << format_double(c.pt_dbm) << '\n';
    os << "freq_ghz = " << format_double(c.freq_ghz) << '\n';
    os << "phi_deg = " << format_double(c.phi_deg) << '\n';
    os << "alpha = " << format_double(c.alpha) << '\n';
    os << "sigma = " << format_double(c.sigma) << '\n';
    os << "mr = " << c.mr << '\n';
    if (c.m) os << "m = " << *c.m << '\n';
    if (!c.eps.empty()) os << "eps = " << join_list(c.eps) << '\n';
    if (!c.qc.empty()) os << "qc = " << join_list(c.qc) << '\n';
    os << "gamma = " << format_double(c.gamma) << '\n';
    os << "dc = " << format_double(c.dc) << '\n';
    os << "pf = " << format_double(c.pf) << '\n';
    os << "lambda = " << format_double(c.lambda) << '\n';
    if (c.lambda_min) os << "lambda_min = " << format_double(*c.lambda_min) << '\n';
    if (c.lambda_max) os << "lambda_max = " << format_double(*c.lambda_max) << '\n';
    if (c.points) os << "points = " << *c.points << '\n';
    os << "axis = " << c.axis << '\n';
    if (c.axis_min) os << "axis_min = " << format_double(*c.axis_min) << '\n';
    if (c.axis_max) os << "axis_max = " << format_double(*c.axis_max) << '\n';
    os << "spacing = " << c.spacing << '\n';
    if (!c.dmin.empty()) os << "dmin = " << join_list(c.dmin) << '\n';
    os << "quantity = " << c.quantity << '\n';
    os << "trials = " << c.trials << '\n';
    os << "window_radius = " << format_double(c.window_radius) << '\n';
    os << "seed = " << c.seed << '\n';
    os << "threads = " << c.threads << '\n';
    return os.str();
}

SystemParams scenario_params(const ExperimentConfig& config, double eps_requested,
                             double q_c) {
    RawParams raw;
    raw.pt_w = dbm_to_watts(config.pt_dbm);
    raw.freq_hz = config.freq_ghz * 1e9;
    raw.phi = config.phi_deg * std::numbers::pi / 180.0;
    raw.alpha = config.alpha;
    raw.sigma = config.sigma;
    raw.m_r = config.mr;
    raw.m = config.m ? *config.m : cycle_length_for_eps(config.mr, eps_requested);
    raw.q_c = q_c;
    raw.gamma = config.gamma;
    raw.d_c = config.dc;
    raw.pf_target = config.pf;
    return SystemParams::validate(raw);
}

RunResult run(const ExperimentConfig& raw_config) {
    const ExperimentConfig cfg = resolve_defaults(raw_config);
    const fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw Error(Errc::ConfigError, "key 'out': cannot create " + dir.string());

    {
        std::ofstream manifest(dir / "manifest.txt");
        manifest << manifest_text(cfg);
    }

    RunResult result;
    if (cfg.subcommand == "fig2") result = run_fig2(cfg, dir);
    else if (cfg.subcommand == "fig3") result = run_fig3(cfg, dir);
    else if (cfg.subcommand == "fig4") result = run_fig4(cfg, dir);
    else if (cfg.subcommand == "fig5") result = run_fig5(cfg, dir);
    else if (cfg.subcommand == "analytic") result = run_analytic(cfg, dir);
    else if (cfg.subcommand == "simulate") result = run_simulate(cfg, dir);
    else if (cfg.subcommand == "sweep") result = run_sweep(cfg, dir);
    else throw Error(Errc::ConfigError,
                     "key 'subcommand': unknown subcommand '" + cfg.subcommand + "'");

    result.files.insert(result.files.begin(), "manifest.txt");
    return result;
}

int run_checked(const ExperimentConfig& config) {
    try {
        return run(config).exit_code;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        switch (e.code()) {
            case Errc::ConfigError:
            case Errc::AlphaOutOfRange:
            case Errc::CycleInvalid:
            case Errc::ProbabilityOutOfRange:
            case Errc::NonPositive:
            case Errc::NonPositiveDistance:
            case Errc::NegativeDensity:
            case Errc::WindowTooSmall:
            case Errc::InsufficientTrials:
            case Errc::NonPositiveThreshold:
                std::cerr << "config error: " << e.what() << '\n';
                return 2;
            case Errc::InfeasibleFalseAlarm:
                std::cerr << "infeasible: " << e.what() << '\n';
                return 3;
            default:
                std::cerr << "numerical failure: " << e.what() << '\n';
                return 4;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace radarcomm::cli
