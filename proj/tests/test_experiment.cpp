#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "radarcomm/analytic.hpp"
#include "radarcomm/experiment.hpp"
#include "radarcomm/rng.hpp"

using namespace radarcomm;
using radarcomm::cli::ExperimentConfig;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("radarcomm_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// header-keyed rows
std::vector<std::map<std::string, std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto header = split_csv(line);
    std::vector<std::map<std::string, std::string>> rows;
    while (std::getline(in, line)) {
        const auto cells = split_csv(line);
        REQUIRE(cells.size() == header.size());
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

double parse(const std::string& text) {
    double v = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), v);
    return v;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
    rng::Engine eng(808);
    for (int i = 0; i < 500; ++i) {
        double v = (eng.next_double() - 0.5) *
                   std::pow(10.0, -30.0 + 60.0 * eng.next_double());
        const std::string text = cli::format_double(v);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        CHECK(back == v);
    }
    CHECK(cli::format_double(0.5) == "0.5");
    CHECK(cli::format_double(1.0) == "1");
}

TEST_CASE("axis values") {
    const auto lin = cli::axis_values(0.0, 1.0, 5, false);
    REQUIRE(lin.size() == 5);
    CHECK(lin.front() == 0.0);
    CHECK(lin.back() == 1.0);
    CHECK(lin[2] == 0.5);

    const auto lg = cli::axis_values(1e-5, 1e-2, 4, true);
    REQUIRE(lg.size() == 4);
    CHECK(lg.front() == 1e-5);
    CHECK(lg.back() == 1e-2);
    CHECK(lg[1] == doctest::Approx(1e-4).epsilon(1e-12));

    CHECK(cli::axis_values(3.0, 9.0, 1, false) == std::vector<double>{3.0});
    CHECK_THROWS_AS(cli::axis_values(1.0, 0.5, 3, false), Error);
    CHECK_THROWS_AS(cli::axis_values(0.0, 1.0, 3, true), Error);
    CHECK_THROWS_AS(cli::axis_values(1.0, 2.0, 0, false), Error);
}

TEST_CASE("config file parsing") {
    const auto dir = fresh_dir("config");
    {
        std::ofstream out(dir / "run.conf");
        out << "# scenario\n"
            << "qc = 0.25, 0.75\n"
            << "pf = 0.05   # trailing comment\n"
            << "\n"
            << "seed = 99\n"
            << "out = results\n";
    }
    ExperimentConfig cfg;
    cli::load_config_file(cfg, (dir / "run.conf").string());
    CHECK(cfg.qc == std::vector<double>{0.25, 0.75});
    CHECK(cfg.pf == 0.05);
    CHECK(cfg.seed == 99);
    CHECK(cfg.out == "results");

    // unknown keys and malformed values are named in the error
    try {
        cli::apply_key(cfg, "bogus_key", "1");
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConfigError);
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
    try {
        cli::apply_key(cfg, "sigma", "ten");
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("sigma") != std::string::npos);
    }
}

TEST_CASE("scenario parameter conversion") {
    ExperimentConfig cfg;
    cfg.pt_dbm = 10.0;
    cfg.freq_ghz = 60.0;
    cfg.phi_deg = 30.0;
    const auto p = cli::scenario_params(cfg, 0.8, 0.3);
    CHECK(p.pt_w() == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(p.freq_hz() == 60e9);
    CHECK(p.phi() == doctest::Approx(std::numbers::pi / 6).epsilon(1e-14));
    CHECK(p.m() == 125);  // round(100 / 0.8)
    CHECK(p.q_c() == 0.3);

    cfg.m = 300;  // explicit cycle length wins
    CHECK(cli::scenario_params(cfg, 0.8, 0.3).m() == 300);
}

TEST_CASE("analytic run: CSV columns equal direct library calls") {
    const auto dir = fresh_dir("analytic");
    ExperimentConfig cfg;
    cfg.subcommand = "analytic";
    cfg.out = dir.string();
    cfg.lambda_min = 1e-5;
    cfg.lambda_max = 1e-2;
    cfg.points = 4;
    cfg.eps = {0.3, 0.6};
    cfg.qc = {0.25};
    const auto result = cli::run(cfg);
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(dir / "manifest.txt"));
    CHECK(fs::exists(dir / "plot_analytic.py"));

    const auto rows = read_csv(dir / "analytic.csv");
    REQUIRE(rows.size() == 8);
    for (const auto& row : rows) {
        const double lambda = parse(row.at("lambda"));
        const double eps_req = parse(row.at("eps_requested"));
        const auto p = cli::scenario_params(cfg, eps_req, 0.25);
        CHECK(row.at("m") == std::to_string(p.m()));
        CHECK(row.at("status") == "ok");
        CHECK(row.at("c_activity") ==
              cli::format_double(analytic::activity_factor(p)));
        CHECK(row.at("theta_analytic_w") ==
              cli::format_double(*analytic::detection_threshold(p, lambda)));
        CHECK(row.at("d_rm_analytic_m") ==
              cli::format_double(*analytic::radar_range(p, lambda)));
        CHECK(row.at("p_s_analytic") ==
              cli::format_double(analytic::success_probability(p, lambda)));
        CHECK(row.at("t_analytic") ==
              cli::format_double(analytic::throughput_density(p, lambda)));
    }
}

TEST_CASE("analytic run at zero density") {
    const auto dir = fresh_dir("analytic0");
    ExperimentConfig cfg;
    cfg.subcommand = "analytic";
    cfg.out = dir.string();
    cfg.lambda = 0.0;
    cfg.qc = {0.0, 0.5};
    cfg.quantity = "throughput";
    CHECK(cli::run(cfg).exit_code == 0);
    const auto rows = read_csv(dir / "analytic.csv");
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.at("status") == "no_interference");
        CHECK(row.at("t_analytic") == "0");
        CHECK(row.at("t_small_lambda_limit") == "0");
        CHECK(row.find("theta_analytic_w") == row.end());  // radar block filtered
    }
    CHECK(rows[0].at("p_s_analytic") == "1");
}

TEST_CASE("manifest reruns reproduce byte-identical CSVs") {
    const auto dir_a = fresh_dir("manifest_a");
    ExperimentConfig cfg;
    cfg.subcommand = "sweep";
    cfg.axis = "qc";
    cfg.axis_min = 0.0;
    cfg.axis_max = 1.0;
    cfg.points = 9;
    cfg.spacing = "linear";
    cfg.out = dir_a.string();
    CHECK(cli::run(cfg).exit_code == 0);

    ExperimentConfig replay;
    cli::load_config_file(replay, (dir_a / "manifest.txt").string());
    CHECK(replay.subcommand == "sweep");
    const auto dir_b = fresh_dir("manifest_b");
    replay.out = dir_b.string();
    CHECK(cli::run(replay).exit_code == 0);
    CHECK(read_file(dir_a / "sweep.csv") == read_file(dir_b / "sweep.csv"));
}

TEST_CASE("simulate runs are reproducible across runs and thread counts") {
    ExperimentConfig cfg;
    cfg.subcommand = "simulate";
    cfg.lambda_min = 1e-3;
    cfg.lambda_max = 2e-3;
    cfg.points = 2;
    cfg.trials = 1000;
    cfg.window_radius = 1300.0;
    cfg.seed = 31337;

    std::vector<std::string> outputs;
    for (int threads : {1, 2, 1}) {
        const auto dir = fresh_dir("simrep" + std::to_string(outputs.size()));
        ExperimentConfig local = cfg;
        local.threads = threads;
        local.out = dir.string();
        REQUIRE(cli::run(local).exit_code == 0);
        outputs.push_back(read_file(dir / "simulate.csv"));
    }
    CHECK(outputs[0] == outputs[1]);
    CHECK(outputs[0] == outputs[2]);
}

TEST_CASE("fig5 flags the infeasible region") {
    const auto dir = fresh_dir("fig5");
    ExperimentConfig cfg;
    cfg.subcommand = "fig5";
    cfg.out = dir.string();
    cfg.lambda_min = 1e-4;
    cfg.lambda_max = 1e-2;
    cfg.points = 7;
    cfg.dmin = {10.0};
    CHECK(cli::run(cfg).exit_code == 0);

    const auto rows = read_csv(dir / "fig5_dmin10.csv");
    REQUIRE(rows.size() == 7);
    int feasible_rows = 0;
    for (const auto& row : rows) {
        const double lambda = parse(row.at("lambda"));
        const double crit = parse(row.at("lambda_crit"));
        CHECK(crit == doctest::Approx(9.22e-4).epsilon(0.01));
        if (row.at("feasible") == "1") {
            ++feasible_rows;
            CHECK(lambda <= crit * (1.0 + 1e-9));
            // range constraint binds once it pins q_c* below 1
            if (parse(row.at("q_c_star")) < 1.0 - 1e-4) {
                CHECK(row.at("binding") == "range_constraint");
            } else {
                CHECK(row.at("binding") == "boundary");
            }
        } else {
            CHECK(lambda >= crit * (1.0 - 1e-9));
            CHECK(row.at("t_star") == "0");
            CHECK(row.at("q_c_star").empty());
        }
    }
    CHECK(feasible_rows > 0);
    CHECK(feasible_rows < 7);

    // unconstrained curve dominates the constrained one pointwise
    const auto open_rows = read_csv(dir / "fig5_unconstrained.csv");
    REQUIRE(open_rows.size() == 7);
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(parse(rows[i].at("t_star")) <=
              parse(open_rows[i].at("t_star")) * (1.0 + 1e-12));

    // entirely beyond the frontier: exit code 3
    const auto dir2 = fresh_dir("fig5_infeasible");
    cfg.out = dir2.string();
    cfg.lambda_min = 1e-2;
    cfg.lambda_max = 1e-1;
    cfg.points = 3;
    CHECK(cli::run(cfg).exit_code == 3);
}

TEST_CASE("exit code conventions") {
    ExperimentConfig cfg;
    cfg.subcommand = "nonsense";
    CHECK(cli::run_checked(cfg) == 2);

    cfg = ExperimentConfig{};
    cfg.subcommand = "analytic";
    cfg.out = fresh_dir("exit2").string();
    cfg.alpha = 1.5;  // invalid scenario
    CHECK(cli::run_checked(cfg) == 2);

    cfg = ExperimentConfig{};
    cfg.subcommand = "simulate";
    cfg.trials = 200'000'000;  // beyond the trials cap
    CHECK(cli::run_checked(cfg) == 2);

    cfg = ExperimentConfig{};
    cfg.subcommand = "analytic";
    cfg.out = fresh_dir("exit4").string();
    cfg.pf = 1e-300;  // threshold overflows to infinity
    CHECK(cli::run_checked(cfg) == 4);
}

TEST_CASE("fig2 rejects multi-valued scenario lists") {
    ExperimentConfig cfg;
    cfg.subcommand = "fig2";
    cfg.out = fresh_dir("fig2lists").string();
    cfg.eps = {0.2, 0.5};
    CHECK(cli::run_checked(cfg) == 2);
}
