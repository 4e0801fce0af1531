// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Tolerances are fixed here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "radarcomm/analytic.hpp"
#include "radarcomm/experiment.hpp"
#include "radarcomm/rng.hpp"
#include "radarcomm/simulator.hpp"
#include "radarcomm/tradeoff.hpp"

using namespace radarcomm;
namespace an = radarcomm::analytic;
namespace si = radarcomm::sim;
namespace tr = radarcomm::tradeoff;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

SystemParams defaults() { return SystemParams::validate({}); }

SystemParams scenario(double eps, double q_c) {
    return defaults().with_cycle(100, cycle_length_for_eps(100, eps)).with_qc(q_c);
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Simulated radar range within 5% of the closed form across the
//    (eps, q_c) grid at lambda = 1e-4, 1e4-trial aggregate calibration.
Outcome criterion1() {
    Outcome out;
    const double lambda = 1e-4;
    const int trials = 10000;
    double worst = 0.0;
    std::string worst_at;
    std::uint64_t point = 0;
    for (double eps : {0.2, 0.5, 0.8}) {
        for (double q_c : {0.01, 0.2, 0.5, 1.0}) {
            const auto p = scenario(eps, q_c);
            const double window = si::default_window_radius(p, lambda);
            const double theta_sim = si::calibrate_threshold(
                p, lambda, trials, window, si::SeedSpec{1001 + point, 0});
            const double d_sim = si::simulated_radar_range(p, theta_sim);
            const double d_analytic = *an::radar_range(p, lambda);
            const double err = rel_err(d_sim, d_analytic);
            if (err > worst) {
                worst = err;
                std::ostringstream os;
                os << "eps=" << eps << " qc=" << q_c;
                worst_at = os.str();
            }
            ++point;
        }
    }
    out.pass = worst <= 0.05;
    std::ostringstream os;
    os << "max |d_rm_sim - d_rm|/d_rm = " << worst * 100.0 << "% (at " << worst_at
       << "), tolerance 5%";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------------------
// 2. Plugging the analytic threshold into the aggregate-interference
//    simulation reproduces the false-alarm target.
Outcome criterion2() {
    Outcome out;
    const auto p = defaults();
    const int trials = 10000;
    double worst = 0.0;
    double worst_tol = 0.02;
    std::uint64_t point = 0;
    for (double lambda : {1e-5, 1e-4, 1e-3}) {
        const double theta = *an::detection_threshold(p, lambda);
        const double window = si::default_window_radius(p, lambda);
        const auto est = si::estimate_false_alarm(p, lambda, theta, trials, window,
                                                  si::SeedSpec{2001 + point++, 0});
        const double err = std::fabs(est.value - p.pf_target());
        const double tol = std::max(0.02, est.half_width);
        if (err / tol > worst / worst_tol) {
            worst = err;
            worst_tol = tol;
        }
        if (err > tol) out.pass = false;
    }
    std::ostringstream os;
    os << "max |Pf_hat - 0.1| = " << worst << ", tolerance max(0.02, CI) = "
       << worst_tol;
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------------------
// 3. Single-slot aggregate interference follows the Levy law: Kolmogorov
//    distance <= 0.02 and Laplace transform within 1% at s in {0.1,1,10}/K.
Outcome criterion3() {
    Outcome out;
    const auto p = defaults();
    const double lambda = 1e-2;
    const int trials = 100000;
    const double window = si::default_window_radius(p, lambda);
    auto ens = si::collect_slot_samples(p, lambda, trials, window,
                                        si::SeedSpec{3003, 0});
    auto& samples = ens.slot_samples;
    std::sort(samples.begin(), samples.end());

    double ks = 0.0;
    const auto n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = samples[i] > 0.0
                             ? an::interference_cdf(p, lambda, samples[i])
                             : 0.0;
        ks = std::max(ks, std::fabs(f - static_cast<double>(i) / n));
        ks = std::max(ks, std::fabs(static_cast<double>(i + 1) / n - f));
    }

    const double k = derived_constants(p).path_constant_k;
    double worst_laplace = 0.0;
    for (double scale : {0.1, 1.0, 10.0}) {
        const double s = scale / k;
        double acc = 0.0;
        for (double x : samples) acc += std::exp(-s * x);
        const double empirical = acc / n;
        const double expected = an::interference_laplace(p, lambda, s);
        worst_laplace = std::max(worst_laplace, rel_err(empirical, expected));
    }

    out.pass = ks <= 0.02 && worst_laplace <= 0.01;
    std::ostringstream os;
    os << "KS distance = " << ks << " (<= 0.02), max Laplace rel err = "
       << worst_laplace * 100.0 << "% (<= 1%)";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------------------
// 4. Analytic throughput matches Monte Carlo within 3 binomial standard
//    errors over the 3x3 (lambda, eps) grid at q_c = 0.5.
Outcome criterion4() {
    Outcome out;
    const int trials = 100000;
    double worst_sigmas = 0.0;
    std::string worst_at;
    std::uint64_t point = 0;
    for (double lambda : {1e-3, 1e-2, 1e-1}) {
        for (double eps : {0.2, 0.5, 0.8}) {
            const auto p = scenario(eps, 0.5);
            const double window = si::default_window_radius(p, lambda);
            const auto est = si::estimate_throughput(p, lambda, trials, window,
                                                     si::SeedSpec{4000 + point, 0});
            const double ps = an::success_probability(p, lambda);
            const double se = std::sqrt(ps * (1.0 - ps) / trials);
            const double sigmas = std::fabs(est.success_probability.value - ps) / se;
            if (sigmas > worst_sigmas) {
                worst_sigmas = sigmas;
                std::ostringstream os;
                os << "lambda=" << lambda << " eps=" << eps;
                worst_at = os.str();
            }
            // T_hat is the scaled success estimate by construction
            const double coef = (1.0 - p.eps()) * 0.5 * lambda;
            if (rel_err(est.throughput.value + 1e-300,
                        coef * est.success_probability.value + 1e-300) > 1e-12)
                out.pass = false;
            ++point;
        }
    }
    if (worst_sigmas > 3.0) out.pass = false;
    std::ostringstream os;
    os << "max |Ps_hat - Ps| = " << worst_sigmas << " standard errors (at "
       << worst_at << "), tolerance 3";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------------------
// 5. Exact identities at <= 1e-12 relative error.
Outcome criterion5() {
    Outcome out;
    double worst = 0.0;
    auto track = [&](double err) {
        worst = std::max(worst, err);
        if (err > 1e-12) out.pass = false;
    };

    for (auto [m_r, m] : {std::pair{100, 200}, {100, 125}, {7, 50}, {2, 2}}) {
        const auto p = defaults().with_cycle(m_r, m);
        track(rel_err(an::activity_factor(p.with_qc(0.0)),
                      static_cast<double>(m_r - 1) / m));
        track(rel_err(an::activity_factor(p.with_qc(1.0)), 1.0 - 1.0 / m));
    }

    const auto p = defaults();
    for (double lambda : {1e-6, 1e-4, 1e-2}) {
        const double theta = *an::detection_threshold(p, lambda);
        const double d_rm = *an::radar_range(p, lambda);
        track(rel_err(radar_return_power(p, d_rm), theta));
    }

    const double base = *an::radar_range(p, 1e-4);
    track(rel_err(*an::radar_range(p, 16e-4), base / 2.0));  // lambda^(-1/4)
    RawParams r;
    r.phi = 4.0 * kPi / 6.0;
    track(rel_err(*an::radar_range(SystemParams::validate(r), 1e-4),
                  base / 2.0));  // phi^(-1/2)
    r = RawParams{};
    r.sigma = 2560.0;
    track(rel_err(*an::radar_range(SystemParams::validate(r), 1e-4),
                  2.0 * base));  // sigma^(1/8)

    for (double scale = 1e-3; scale <= 1e3 + 1.0; scale *= 10.0) {
        r = RawParams{};
        r.pt_w = 0.01 * scale;
        track(rel_err(*an::radar_range(SystemParams::validate(r), 1e-4), base));
        r = RawParams{};
        r.freq_hz = 60e9 * scale;
        track(rel_err(*an::radar_range(SystemParams::validate(r), 1e-4), base));
    }

    std::ostringstream os;
    os << "max relative error = " << worst << " (<= 1e-12)";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------------------
// 6. Directional trends: d_rm vs eps flips sign at q_c = 1/m_r; d_rm
//    strictly decreasing in q_c at fixed eps.
Outcome criterion6() {
    Outcome out;
    const double lambda = 1e-4;
    const std::vector<int> cycle_grid = {1000, 500, 333, 250, 200, 167, 143, 125, 111};
    for (double q_c : {0.001, 0.005}) {  // below 1/m_r: decreasing in eps
        double prev = 1e300;
        for (int m : cycle_grid) {
            const double d = *an::radar_range(defaults().with_cycle(100, m).with_qc(q_c),
                                              lambda);
            if (!(d < prev)) out.pass = false;
            prev = d;
        }
    }
    for (double q_c : {0.2, 0.5, 1.0}) {  // above 1/m_r: increasing in eps
        double prev = 0.0;
        for (int m : cycle_grid) {
            const double d = *an::radar_range(defaults().with_cycle(100, m).with_qc(q_c),
                                              lambda);
            if (!(d > prev)) out.pass = false;
            prev = d;
        }
    }
    for (int m : {125, 200, 500}) {  // strictly decreasing in q_c at fixed eps
        double prev = 1e300;
        for (double q_c = 0.0; q_c <= 1.0 + 1e-12; q_c += 0.1) {
            const double d = *an::radar_range(
                defaults().with_cycle(100, m).with_qc(std::min(q_c, 1.0)), lambda);
            if (!(d < prev)) out.pass = false;
            prev = d;
        }
    }
    out.detail = "eps trend flips at q_c = 1/m_r; q_c trend strictly decreasing";
    return out;
}

// ---------------------------------------------------------------------------
// 7. Optimizer against a 1e-3-step grid oracle, constraint dominance,
//    sparse-regime optimum, and feasibility-frontier detection.
Outcome criterion7() {
    Outcome out;
    rng::Engine eng(0xACCE55);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        RawParams r;
        r.m_r = 2 + static_cast<int>(eng.next_below(150));
        r.m = r.m_r + 1 + static_cast<int>(eng.next_below(400));
        r.gamma = 0.5 + 10.0 * eng.next_double();
        r.d_c = 1.0 + 9.0 * eng.next_double();
        r.phi = kPi / 12.0 + kPi * eng.next_double() / 2.0;
        const auto p = SystemParams::validate(r);
        const double lambda = std::pow(10.0, -6.0 + 6.0 * eng.next_double());
        const auto res = tr::optimize_throughput(p, lambda);
        if (!res.feasible) {
            out.pass = false;
            continue;
        }
        double grid_best = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            const double t =
                an::throughput_density(p.with_qc(static_cast<double>(k) / 1000.0), lambda);
            grid_best = std::max(grid_best, t);
        }
        if (grid_best == 0.0) continue;  // degenerate objective (T == 0)
        worst = std::max(worst, rel_err(res.t_star, grid_best));
        if (res.t_star < grid_best * (1.0 - 1e-12)) out.pass = false;
    }
    if (worst > 1e-4) out.pass = false;

    // constrained never beats unconstrained
    const auto p = defaults();
    for (double lambda = 1e-6; lambda <= 1e-2; lambda *= 10.0) {
        const auto open = tr::optimize_throughput(p, lambda);
        const auto tied = tr::optimize_throughput(p, lambda, 10.0);
        if (tied.t_star > open.t_star * (1.0 + 1e-12)) out.pass = false;
    }

    // sparse regime: q_c* = 1 and T* slope (1 - eps)
    for (double eps : {0.2, 0.5, 0.8}) {
        const auto res = tr::optimize_throughput(scenario(eps, 0.5), 1e-8);
        const double eps_eff = scenario(eps, 0.5).eps();
        if (!res.feasible || !res.q_c_star || *res.q_c_star < 1.0 - 1e-5)
            out.pass = false;
        else if (rel_err(res.t_star, (1.0 - eps_eff) * 1e-8) > 1e-4)
            out.pass = false;
    }

    // feasibility frontier is detected and flagged on both sides
    const double crit = tr::critical_density(p, 10.0);
    const auto below = tr::optimize_throughput(p, 0.7 * crit, 10.0);
    const auto above = tr::optimize_throughput(p, 1.5 * crit, 10.0);
    if (!below.feasible || above.feasible || above.t_star != 0.0) out.pass = false;

    std::ostringstream os;
    os << "max T* rel err vs grid oracle = " << worst
       << " (<= 1e-4); frontier at lambda_crit = " << crit;
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------------------
// 8. Identical seeds give byte-identical CSVs across reruns and across
//    1-thread vs multi-thread execution.
Outcome criterion8() {
    Outcome out;
    cli::ExperimentConfig cfg;
    cfg.subcommand = "simulate";
    cfg.lambda_min = 1e-3;
    cfg.lambda_max = 3e-3;
    cfg.points = 2;
    cfg.trials = 2000;
    cfg.window_radius = 1300.0;
    cfg.seed = 0xD5EED;

    auto read_file = [](const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };

    std::vector<std::string> csvs;
    int run_idx = 0;
    for (int threads : {1, 2, 1, 2}) {
        const fs::path dir =
            fs::temp_directory_path() / ("radarcomm_acceptance_c8_" + std::to_string(run_idx++));
        fs::remove_all(dir);
        cli::ExperimentConfig local = cfg;
        local.threads = threads;
        local.out = dir.string();
        if (cli::run(local).exit_code != 0) {
            out.pass = false;
            out.detail = "simulate run failed";
            return out;
        }
        csvs.push_back(read_file(dir / "simulate.csv"));
    }
    for (std::size_t i = 1; i < csvs.size(); ++i)
        if (csvs[i] != csvs[0]) out.pass = false;
    out.detail = out.pass ? "4 runs (threads 1,2,1,2) produced identical bytes"
                          : "CSV bytes differ between runs";
    return out;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {1, "radar range: simulation within 5% of closed form", &criterion1},
        {2, "false-alarm fidelity of the analytic threshold", &criterion2},
        {3, "interference law: Levy CDF and Laplace transform", &criterion3},
        {4, "throughput: analytic vs Monte Carlo within 3 SE", &criterion4},
        {5, "exact identities at 1e-12 relative", &criterion5},
        {6, "directional trends in eps and q_c", &criterion6},
        {7, "optimizer vs grid oracle and feasibility frontier", &criterion7},
        {8, "byte-identical reproducibility across runs and threads", &criterion8},
    };

    int failures = 0;
    for (const auto& e : entries) {
        const auto start = std::chrono::steady_clock::now();
        const Outcome res = e.fn();
        const auto secs =
            std::chrono::duration_cast<std::chrono::duration<double>>(
                std::chrono::steady_clock::now() - start)
                .count();
        std::printf("CRITERION %d %s - %s: %s [%.1fs]\n", e.id,
                    res.pass ? "PASS" : "FAIL", e.name, res.detail.c_str(), secs);
        std::fflush(stdout);
        if (!res.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
