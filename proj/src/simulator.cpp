#include "radarcomm/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <thread>

#include "radarcomm/analytic.hpp"
#include "radarcomm/rng.hpp"

namespace radarcomm::sim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// Realizations cap: keeps a runaway (lambda, window) request from exhausting
// memory before the Poisson draw materializes it.
constexpr double kMaxMeanNodes = 5e7;

std::uint64_t trial_key(SeedSpec seed, std::uint64_t attempt) {
    return rng::hash_combine(rng::hash_combine(seed.master_seed, seed.trial_index),
                             attempt);
}

// Maps d in (-3pi, 3pi) onto (-pi, pi]. Node angles and boresights are
// normalized to [0, 2pi) at generation, so one correction suffices.
double wrap_pm_pi(double d) {
    if (d > kPi) return d - kTwoPi;
    if (d < -kPi) return d + kTwoPi;
    return d;
}

double power_law(double dist2, double alpha) {
    if (alpha == 4.0) return 1.0 / (dist2 * dist2);
    return std::pow(dist2, -0.5 * alpha);
}

// Alignment test for an observer sitting exactly at the origin; pure
// angular arithmetic, no trig. Caller has verified node.radius > 0 and
// observer boresight is normalized.
bool aligned_at_origin(const Node& n, double obs_boresight, double half_phi) {
    return std::fabs(wrap_pm_pi(n.angle - obs_boresight)) < half_phi &&
           std::fabs(wrap_pm_pi(n.angle + kPi - n.boresight)) < half_phi;
}

int resolve_threads(int threads, int trials) {
    int t = threads > 0 ? threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    if (t > trials) t = trials;
    return t < 1 ? 1 : t;
}

// Runs body(thread_slot, trial) for every trial in [0, trials). Every trial
// is a pure function of its index, so the partition among threads cannot
// change any result.
void parallel_trials(int trials, int thread_count,
                     const std::function<void(int, int)>& body) {
    if (thread_count <= 1) {
        for (int i = 0; i < trials; ++i) body(0, i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    std::mutex err_mutex;
    std::exception_ptr err;
    const int base = trials / thread_count;
    const int rem = trials % thread_count;
    int begin = 0;
    for (int k = 0; k < thread_count; ++k) {
        const int len = base + (k < rem ? 1 : 0);
        const int lo = begin;
        begin += len;
        pool.emplace_back([&, k, lo, len] {
            try {
                for (int i = lo; i < lo + len; ++i) body(k, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

void realize_into(NetworkRealization& net, const SystemParams& p, double lambda,
                  double window_radius, rng::Engine& eng) {
    if (!(window_radius > 0.0))
        throw Error(Errc::NonPositive, "window_radius must be > 0");
    const auto thin = thinned_intensities(p, lambda);  // validates lambda
    if (thin.lambda_a > 0.0 &&
        window_radius < 2.5 / std::sqrt(thin.lambda_a))
        throw Error(Errc::WindowTooSmall,
                    "window_radius below 5x the mean nearest-aligned-interferer "
                    "distance; truncation bias would not be negligible");
    const double mean = lambda * kPi * window_radius * window_radius;
    if (mean > kMaxMeanNodes)
        throw Error(Errc::NumericalFailure,
                    "requested realization exceeds the node-count cap");

    net.window_radius = window_radius;
    net.lambda = lambda;
    net.activity_seed = eng.next_u64();
    net.typical = Node{0.0, 0.0, kTwoPi * eng.next_double(), 0, 0xFFFFFFFFu};

    const auto count = static_cast<std::size_t>(eng.poisson(mean));
    const auto m = static_cast<std::uint64_t>(p.m());
    net.nodes.clear();
    net.nodes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double radius = window_radius * std::sqrt(eng.next_double());
        const double angle = kTwoPi * eng.next_double();
        const auto mark = static_cast<int>(eng.next_below(m));
        const double boresight = kTwoPi * eng.next_double();
        net.nodes.push_back(
            Node{radius, angle, boresight, mark, static_cast<std::uint32_t>(i)});
    }
}

// Interference at an off-origin observer. Cheap angular bounds (slack
// covers the worst-case parallax asin(d_obs/r) <= pi/2 * d_obs/r) reject
// most nodes before any trig runs; survivors get the exact beam test.
double interference_off_origin(const NetworkRealization& net,
                               const SystemParams& p, long long slot,
                               const Observer& obs) {
    const double k = derived_constants(p).path_constant_k;
    const double half = 0.5 * p.phi();
    const double obs_b = std::remainder(obs.boresight, kTwoPi);
    const double ox = obs.position.x;
    const double oy = obs.position.y;
    const double d_obs = std::sqrt(ox * ox + oy * oy);
    const double cos_b = std::cos(obs_b);
    const double sin_b = std::sin(obs_b);
    const double cos_half = std::cos(half);
    double sum = 0.0;
    for (const Node& n : net.nodes) {
        double slack = kPi;
        if (n.radius > d_obs) slack = 0.5 * kPi * d_obs / n.radius;
        if (std::fabs(wrap_pm_pi(n.angle - obs_b)) >= half + slack) continue;
        if (std::fabs(wrap_pm_pi(n.angle + kPi - n.boresight)) >= half + slack)
            continue;
        const Vec2 pos = n.position();
        const double vx = pos.x - ox;
        const double vy = pos.y - oy;
        const double dist2 = vx * vx + vy * vy;
        if (dist2 == 0.0)
            throw Error(Errc::CoincidentNode, "node coincides with the observer");
        const double dist = std::sqrt(dist2);
        if (!(vx * cos_b + vy * sin_b > dist * cos_half)) continue;
        if (!(-(vx * std::cos(n.boresight) + vy * std::sin(n.boresight)) >
              dist * cos_half))
            continue;
        if (!node_activity(p, net.activity_seed, n.id, n.mark, slot)) continue;
        sum += k * power_law(dist2, p.alpha());
    }
    return sum;
}

double interference_at_origin(const NetworkRealization& net,
                              const SystemParams& p, long long slot,
                              double obs_boresight) {
    const double k = derived_constants(p).path_constant_k;
    const double half = 0.5 * p.phi();
    const double obs_b = std::remainder(obs_boresight, kTwoPi);
    double sum = 0.0;
    for (const Node& n : net.nodes) {
        if (n.radius == 0.0)
            throw Error(Errc::CoincidentNode, "node coincides with the observer");
        if (!aligned_at_origin(n, obs_b, half)) continue;
        if (!node_activity(p, net.activity_seed, n.id, n.mark, slot)) continue;
        sum += k * power_law(n.radius * n.radius, p.alpha());
    }
    return sum;
}

// Collector plumbing: realizes trial `seed` and evaluates fn on it,
// redrawing the realization if it contains a node coincident with the
// evaluation's observer (probability-zero event, counted).
template <typename Fn>
auto with_resampling(NetworkRealization& buf, const SystemParams& p,
                     double lambda, double window_radius, SeedSpec seed,
                     std::atomic<long long>& rejected, Fn&& fn) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt > 1000)
            throw Error(Errc::CoincidentNode, "resampling limit exceeded");
        rng::Engine eng(trial_key(seed, attempt));
        realize_into(buf, p, lambda, window_radius, eng);
        try {
            return fn(buf, eng);
        } catch (const Error& e) {
            if (e.code() != Errc::CoincidentNode) throw;
            rejected.fetch_add(1, std::memory_order_relaxed);
        }
    }
}

double binomial_half_width(double p_hat, int n) {
    return 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / n);
}

void require_trials(int trials, int minimum) {
    if (trials < minimum)
        throw Error(Errc::InsufficientTrials,
                    "need at least " + std::to_string(minimum) + " trials");
}

}  // namespace

Vec2 Node::position() const {
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

Vec2 Node::receiver_position(double d_c) const {
    const Vec2 p = position();
    return {p.x + d_c * std::cos(boresight), p.y + d_c * std::sin(boresight)};
}

Observer Observer::typical(const NetworkRealization& net) {
    return Observer{{0.0, 0.0}, net.typical.boresight};
}

double default_window_radius(const SystemParams& p, double lambda) {
    const auto thin = thinned_intensities(p, lambda);
    if (thin.lambda_a == 0.0) return 1000.0;  // empty network, any window works
    return 20.0 / std::sqrt(kPi * thin.lambda_a);
}

NetworkRealization sample_network(const SystemParams& p, double lambda,
                                  double window_radius, SeedSpec seed) {
    NetworkRealization net;
    rng::Engine eng(trial_key(seed, 0));
    realize_into(net, p, lambda, window_radius, eng);
    return net;
}

void sample_network_into(NetworkRealization& net, const SystemParams& p,
                         double lambda, double window_radius, SeedSpec seed) {
    rng::Engine eng(trial_key(seed, 0));
    realize_into(net, p, lambda, window_radius, eng);
}

std::optional<Activity> node_activity(const SystemParams& p,
                                      std::uint64_t activity_seed,
                                      std::uint32_t node_id, int mark,
                                      long long slot) {
    const int m = p.m();
    long long phase = (slot - mark) % m;
    if (phase < 0) phase += m;
    if (phase == 0) return Activity::RadarPulse;
    if (phase < p.m_r()) return std::nullopt;
    const double q = p.q_c();
    if (q <= 0.0) return std::nullopt;
    const std::uint64_t h = rng::hash_combine(
        rng::hash_combine(activity_seed, node_id), static_cast<std::uint64_t>(slot));
    return rng::to_unit_double(h) < q ? std::optional(Activity::CommPacket)
                                      : std::nullopt;
}

bool mutually_aligned(const Node& node, const Observer& obs, double phi) {
    const Vec2 pos = node.position();
    const double vx = pos.x - obs.position.x;
    const double vy = pos.y - obs.position.y;
    const double dist2 = vx * vx + vy * vy;
    if (dist2 == 0.0)
        throw Error(Errc::CoincidentNode, "node coincides with the observer");
    const double dist = std::sqrt(dist2);
    const double cos_half = std::cos(0.5 * phi);
    const bool node_in_obs_beam =
        vx * std::cos(obs.boresight) + vy * std::sin(obs.boresight) >
        dist * cos_half;
    const bool obs_in_node_beam =
        -(vx * std::cos(node.boresight) + vy * std::sin(node.boresight)) >
        dist * cos_half;
    return node_in_obs_beam && obs_in_node_beam;
}

std::vector<ActiveInterferer> active_aligned_interferers(
    const NetworkRealization& net, const SystemParams& p, long long slot) {
    if (slot < 0) throw Error(Errc::NonPositive, "slot index must be >= 0");
    const double half = 0.5 * p.phi();
    const double obs_b = std::remainder(net.typical.boresight, kTwoPi);
    std::vector<ActiveInterferer> out;
    for (std::uint32_t i = 0; i < net.nodes.size(); ++i) {
        const Node& n = net.nodes[i];
        if (n.radius == 0.0)
            throw Error(Errc::CoincidentNode, "node coincides with the observer");
        if (!aligned_at_origin(n, obs_b, half)) continue;
        const auto act = node_activity(p, net.activity_seed, n.id, n.mark, slot);
        if (act) out.push_back({i, *act});
    }
    return out;
}

double slot_interference(const NetworkRealization& net, const SystemParams& p,
                         long long slot, const Observer& obs) {
    if (slot < 0) throw Error(Errc::NonPositive, "slot index must be >= 0");
    if (obs.position.x == 0.0 && obs.position.y == 0.0)
        return interference_at_origin(net, p, slot, obs.boresight);
    return interference_off_origin(net, p, slot, obs);
}

double echo_window_max(const NetworkRealization& net, const SystemParams& p) {
    const int window = p.m_r() - 1;
    const int m = p.m();
    const int m_r = p.m_r();
    const double q = p.q_c();
    const double k = derived_constants(p).path_constant_k;
    const double half = 0.5 * p.phi();
    const double obs_b = std::remainder(net.typical.boresight, kTwoPi);

    std::vector<double> acc(static_cast<std::size_t>(window), 0.0);
    for (const Node& n : net.nodes) {
        if (n.radius == 0.0)
            throw Error(Errc::CoincidentNode, "node coincides with the observer");
        if (!aligned_at_origin(n, obs_b, half)) continue;
        const double contrib = k * power_law(n.radius * n.radius, p.alpha());
        // Pulse slots are mark + j*m; only slot == mark can land in the window.
        if (n.mark >= 1 && n.mark <= window) acc[n.mark - 1] += contrib;
        if (q <= 0.0) continue;
        long long phase = (1 - n.mark) % m;
        if (phase < 0) phase += m;
        for (int s = 1; s <= window; ++s) {
            if (phase >= m_r) {
                const std::uint64_t h = rng::hash_combine(
                    rng::hash_combine(net.activity_seed, n.id),
                    static_cast<std::uint64_t>(s));
                if (rng::to_unit_double(h) < q) acc[s - 1] += contrib;
            }
            if (++phase == m) phase = 0;
        }
    }
    double peak = 0.0;
    for (double v : acc) peak = std::max(peak, v);
    return peak;
}

TrialEnsemble collect_echo_maxima(const SystemParams& p, double lambda,
                                  int trials, double window_radius,
                                  SeedSpec seed, int threads) {
    require_trials(trials, 1);
    TrialEnsemble ens;
    ens.trials = trials;
    ens.echo_window_maxima.assign(static_cast<std::size_t>(trials), 0.0);
    std::atomic<long long> rejected{0};
    const int t = resolve_threads(threads, trials);
    std::vector<NetworkRealization> buf(static_cast<std::size_t>(t));
    parallel_trials(trials, t, [&](int slot_idx, int trial) {
        ens.echo_window_maxima[static_cast<std::size_t>(trial)] = with_resampling(
            buf[static_cast<std::size_t>(slot_idx)], p, lambda, window_radius,
            SeedSpec{seed.master_seed, seed.trial_index + static_cast<std::uint64_t>(trial)},
            rejected,
            [&](const NetworkRealization& net, rng::Engine&) {
                return echo_window_max(net, p);
            });
    });
    ens.coincident_rejections = rejected.load();
    return ens;
}

TrialEnsemble collect_slot_samples(const SystemParams& p, double lambda,
                                   int trials, double window_radius,
                                   SeedSpec seed, int threads) {
    require_trials(trials, 1);
    if (p.m() <= p.m_r())
        throw Error(Errc::CycleInvalid,
                    "cycle has no comm slots to sample (m == m_r)");
    TrialEnsemble ens;
    ens.trials = trials;
    ens.slot_samples.assign(static_cast<std::size_t>(trials), 0.0);
    std::atomic<long long> rejected{0};
    const int t = resolve_threads(threads, trials);
    std::vector<NetworkRealization> buf(static_cast<std::size_t>(t));
    const auto comm_slots = static_cast<std::uint64_t>(p.m() - p.m_r());
    parallel_trials(trials, t, [&](int slot_idx, int trial) {
        ens.slot_samples[static_cast<std::size_t>(trial)] = with_resampling(
            buf[static_cast<std::size_t>(slot_idx)], p, lambda, window_radius,
            SeedSpec{seed.master_seed, seed.trial_index + static_cast<std::uint64_t>(trial)},
            rejected,
            [&](const NetworkRealization& net, rng::Engine& eng) {
                const long long s =
                    p.m_r() + static_cast<long long>(eng.next_below(comm_slots));
                return interference_at_origin(net, p, s, net.typical.boresight);
            });
    });
    ens.coincident_rejections = rejected.load();
    return ens;
}

double threshold_from_maxima(std::vector<double> maxima, double pf_target) {
    if (maxima.empty())
        throw Error(Errc::InsufficientTrials, "no samples");
    if (!(pf_target > 0.0 && pf_target < 1.0))
        throw Error(Errc::ProbabilityOutOfRange, "pf_target must lie in (0, 1)");
    const auto n = maxima.size();
    auto rank = static_cast<std::size_t>(
        std::ceil((1.0 - pf_target) * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    std::nth_element(maxima.begin(), maxima.begin() + (rank - 1), maxima.end());
    return maxima[rank - 1];
}

double calibrate_threshold(const SystemParams& p, double lambda, int trials,
                           double window_radius, SeedSpec seed, int threads) {
    require_trials(trials, 1000);
    auto ens = collect_echo_maxima(p, lambda, trials, window_radius, seed, threads);
    return threshold_from_maxima(std::move(ens.echo_window_maxima), p.pf_target());
}

Estimate estimate_false_alarm(const SystemParams& p, double lambda, double theta,
                              int trials, double window_radius, SeedSpec seed,
                              int threads) {
    require_trials(trials, 1);
    const auto ens =
        collect_echo_maxima(p, lambda, trials, window_radius, seed, threads);
    long long exceed = 0;
    for (double v : ens.echo_window_maxima)
        if (v > theta) ++exceed;
    const double p_hat = static_cast<double>(exceed) / trials;
    return Estimate{p_hat, binomial_half_width(p_hat, trials)};
}

double simulated_radar_range(const SystemParams& p, double theta_sim) {
    return analytic::range_from_threshold(p, theta_sim);
}

ThroughputEstimate estimate_throughput(const SystemParams& p, double lambda,
                                       int trials, double window_radius,
                                       SeedSpec seed, int threads) {
    require_trials(trials, 1);
    const double coef = (1.0 - p.eps()) * p.q_c() * lambda;
    if (p.m() == p.m_r()) {
        // No comm slots: conditional success is vacuous, throughput is zero.
        return ThroughputEstimate{{1.0, 0.0}, {0.0, 0.0}};
    }
    const double k = derived_constants(p).path_constant_k;
    const double desired = k * std::pow(p.d_c(), -p.alpha());
    const double gamma = p.gamma();
    const auto comm_slots = static_cast<std::uint64_t>(p.m() - p.m_r());

    std::atomic<long long> rejected{0};
    std::atomic<long long> successes{0};
    const int t = resolve_threads(threads, trials);
    std::vector<NetworkRealization> buf(static_cast<std::size_t>(t));
    parallel_trials(trials, t, [&](int slot_idx, int trial) {
        const bool ok = with_resampling(
            buf[static_cast<std::size_t>(slot_idx)], p, lambda, window_radius,
            SeedSpec{seed.master_seed, seed.trial_index + static_cast<std::uint64_t>(trial)},
            rejected,
            [&](const NetworkRealization& net, rng::Engine& eng) {
                const long long s =
                    p.m_r() + static_cast<long long>(eng.next_below(comm_slots));
                const Observer rx{net.typical.receiver_position(p.d_c()),
                                  net.typical.boresight + kPi};
                const double interference = slot_interference(net, p, s, rx);
                return interference == 0.0 || desired > gamma * interference;
            });
        if (ok) successes.fetch_add(1, std::memory_order_relaxed);
    });

    const double ps_hat = static_cast<double>(successes.load()) / trials;
    const double hw = binomial_half_width(ps_hat, trials);
    return ThroughputEstimate{{ps_hat, hw}, {coef * ps_hat, coef * hw}};
}

}  // namespace radarcomm::sim
