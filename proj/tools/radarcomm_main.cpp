// Command-line front end: reproduces the analytic curves and simulation
// markers of the standard experiments, plus generic sweeps. All heavy
// lifting lives in the library; this file only maps flags onto a config.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "radarcomm/experiment.hpp"

namespace {

using radarcomm::cli::ExperimentConfig;

void add_common_options(CLI::App* app, ExperimentConfig& cfg, std::string& config_path) {
    app->add_option("--config", config_path, "flat key=value config file (flags override)");
    app->add_option("--out", cfg.out, "output directory");
    app->add_option("--seed", cfg.seed, "master seed");
    app->add_option("--trials", cfg.trials, "Monte Carlo trials per simulated point");
    app->add_option("--window-radius", cfg.window_radius,
                    "simulation window radius [m] (0 = auto)");
    app->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    app->add_option("--lambda", cfg.lambda, "node density [nodes/m^2]");
    app->add_option("--lambda-min", cfg.lambda_min, "sweep start density");
    app->add_option("--lambda-max", cfg.lambda_max, "sweep end density");
    app->add_option("--points", cfg.points, "sweep point count");
    app->add_option("--spacing", cfg.spacing, "sweep spacing: log | linear");
    app->add_option("--eps", cfg.eps,
                    "radar duty fraction(s); mapped to integer cycle length")
        ->delimiter(',');
    app->add_option("--qc", cfg.qc, "ALOHA persistency value(s)")->delimiter(',');
    app->add_option("--mr", cfg.mr, "radar slots per cycle");
    app->add_option("--m", cfg.m, "total cycle length (overrides eps mapping)");
    app->add_option("--phi-deg", cfg.phi_deg, "beamwidth [deg]");
    app->add_option("--alpha", cfg.alpha, "path-loss exponent");
    app->add_option("--sigma", cfg.sigma, "radar cross section [m^2]");
    app->add_option("--gamma", cfg.gamma, "SIR decoding threshold (linear)");
    app->add_option("--dc", cfg.dc, "comm link distance [m]");
    app->add_option("--pf", cfg.pf, "target false alarm probability");
    app->add_option("--pt-dbm", cfg.pt_dbm, "transmit power [dBm]");
    app->add_option("--freq-ghz", cfg.freq_ghz, "carrier frequency [GHz]");
    app->add_option("--dmin", cfg.dmin, "minimum detectable range constraint(s) [m]")
        ->delimiter(',');
    app->add_option("--axis", cfg.axis, "sweep axis name (sweep subcommand)");
    app->add_option("--axis-min", cfg.axis_min, "sweep axis start");
    app->add_option("--axis-max", cfg.axis_max, "sweep axis end");
    app->add_option("--quantity", cfg.quantity, "analytic outputs: all | radar | throughput");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shared-channel radar/comm network performance toolkit"};
    app.require_subcommand(1);

    static const std::vector<std::pair<std::string, std::string>> kSubs = {
        {"fig2", "radar range vs density: analytic + simulated calibration"},
        {"fig3", "throughput density vs density for several duty fractions"},
        {"fig4", "radar range vs duty fraction for several persistencies"},
        {"fig5", "max throughput vs density, optionally range-constrained"},
        {"analytic", "closed-form outputs over a density axis"},
        {"simulate", "analytic + simulated outputs over a density axis"},
        {"sweep", "closed-form outputs over an arbitrary parameter axis"},
    };

    ExperimentConfig cfg;
    std::string config_path;
    for (const auto& [name, help] : kSubs)
        add_common_options(app.add_subcommand(name, help), cfg, config_path);

    CLI11_PARSE(app, argc, argv);

    CLI::App* sub = app.get_subcommands().front();

    // Flags override the file: load the file into a fresh config, then
    // reparse so explicitly given flags land on top of it.
    if (!config_path.empty()) {
        ExperimentConfig from_file;
        try {
            radarcomm::cli::load_config_file(from_file, config_path);
        } catch (const radarcomm::Error& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return 2;
        }
        cfg = from_file;
        try {
            app.clear();
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            return app.exit(e);
        }
    }

    cfg.subcommand = sub->get_name();
    return radarcomm::cli::run_checked(cfg);
}
