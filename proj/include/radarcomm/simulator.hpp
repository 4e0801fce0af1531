#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "radarcomm/params.hpp"

namespace radarcomm::sim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Identifies one Monte Carlo trial. The per-trial generator state is a pure
/// function of (master_seed, trial_index): identical inputs reproduce
/// identical realizations regardless of execution order or parallelism.
struct SeedSpec {
    std::uint64_t master_seed = 1;
    std::uint64_t trial_index = 0;
};

/// One network node. Positions are kept in polar form about the origin;
/// `id` is the node's stable identity within its realization and drives its
/// ALOHA decisions, so filtered copies of a realization keep the same draws.
struct Node {
    double radius = 0.0;     // distance from origin [m]
    double angle = 0.0;      // angular position [rad]
    double boresight = 0.0;  // beam direction, toward the node's receiver [rad]
    int mark = 0;            // cycle offset nu, uniform over {0,...,m-1}
    std::uint32_t id = 0;

    Vec2 position() const;
    Vec2 receiver_position(double d_c) const;
};

/// One sampled network: nodes within a disc window, plus the typical
/// observer at the origin (mark 0, its own uniform boresight). The typical
/// node never appears in an interference sum.
struct NetworkRealization {
    std::vector<Node> nodes;
    double window_radius = 0.0;
    double lambda = 0.0;
    Node typical;
    std::uint64_t activity_seed = 0;  // keys the per (node, slot) ALOHA draws
};

/// An interference observation point: a position plus the beam the receiver
/// listens on (one fixed bore-sight per node per cycle).
struct Observer {
    Vec2 position;
    double boresight = 0.0;

    static Observer typical(const NetworkRealization& net);
};

enum class Activity { RadarPulse, CommPacket };

struct ActiveInterferer {
    std::uint32_t node_index;  // index into NetworkRealization::nodes
    Activity kind;
};

/// Per-trial statistics collected over independent realizations.
struct TrialEnsemble {
    std::vector<double> echo_window_maxima;  // one per trial [W]
    std::vector<double> slot_samples;        // one per trial [W]
    int trials = 0;
    long long coincident_rejections = 0;
};

struct Estimate {
    double value = 0.0;
    double half_width = 0.0;  // 95% binomial confidence half-width
};

struct ThroughputEstimate {
    Estimate success_probability;
    Estimate throughput;  // packets/slot/m^2
};

/// Disc radius used when none is requested: 20/sqrt(pi lambda_a), about 20x
/// the mean nearest-aligned-interferer distance. Bounded truncation bias is
/// verified by the window-doubling test.
double default_window_radius(const SystemParams& p, double lambda);

NetworkRealization sample_network(const SystemParams& p, double lambda,
                                  double window_radius, SeedSpec seed);

/// Buffer-reusing variant for tight trial loops.
void sample_network_into(NetworkRealization& net, const SystemParams& p,
                         double lambda, double window_radius, SeedSpec seed);

/// Activity of one node in one absolute slot: a radar pulse once per cycle at
/// (slot - mark) mod m == 0, a comm packet in comm-phase slots when the
/// node's Bernoulli(q_c) draw succeeds. The draw is a pure function of
/// (activity_seed, node id, slot).
std::optional<Activity> node_activity(const SystemParams& p,
                                      std::uint64_t activity_seed,
                                      std::uint32_t node_id, int mark,
                                      long long slot);

/// Mutual beam overlap: the observer lies inside the node's beam and the
/// node lies inside the observer's beam (strict half-beamwidth offsets).
/// Throws CoincidentNode when the node sits exactly on the observer.
bool mutually_aligned(const Node& node, const Observer& obs, double phi);

/// Nodes that interfere with the typical observer in a slot: mutually
/// aligned and transmitting (radar pulse or comm packet).
std::vector<ActiveInterferer> active_aligned_interferers(
    const NetworkRealization& net, const SystemParams& p, long long slot);

/// Aggregate interference K sum d^-alpha over active aligned interferers at
/// an arbitrary observer. 0 when none.
double slot_interference(const NetworkRealization& net, const SystemParams& p,
                         long long slot, const Observer& obs);

/// Max interference over the typical radar's echo window (slots 1..m_r-1).
double echo_window_max(const NetworkRealization& net, const SystemParams& p);

/// Independent realizations; one echo-window maximum per trial.
TrialEnsemble collect_echo_maxima(const SystemParams& p, double lambda,
                                  int trials, double window_radius,
                                  SeedSpec seed, int threads = 0);

/// Independent realizations; one single-slot interference sample per trial,
/// observed at the typical node over a uniformly chosen comm slot of its
/// cycle. Requires m > m_r.
TrialEnsemble collect_slot_samples(const SystemParams& p, double lambda,
                                   int trials, double window_radius,
                                   SeedSpec seed, int threads = 0);

/// Empirical (1 - pf)-quantile of a set of echo-window maxima.
double threshold_from_maxima(std::vector<double> maxima, double pf_target);

/// Threshold meeting the false-alarm target against aggregate interference:
/// the empirical (1 - pf_target)-quantile of echo_window_max over trials.
/// Requires trials >= 1000 (quantile noise).
double calibrate_threshold(const SystemParams& p, double lambda, int trials,
                           double window_radius, SeedSpec seed,
                           int threads = 0);

/// Fraction of realizations whose echo-window maximum exceeds theta.
Estimate estimate_false_alarm(const SystemParams& p, double lambda,
                              double theta, int trials, double window_radius,
                              SeedSpec seed, int threads = 0);

/// Range at which the target return equals a calibrated threshold.
double simulated_radar_range(const SystemParams& p, double theta_sim);

/// Per trial: the typical node transmits over one uniformly chosen comm
/// slot; interference is evaluated at its receiver (beam pointed back);
/// success iff K d_c^-alpha / I > gamma. T = (1-eps) q_c lambda P_s.
/// Valid for any alpha > 2.
ThroughputEstimate estimate_throughput(const SystemParams& p, double lambda,
                                       int trials, double window_radius,
                                       SeedSpec seed, int threads = 0);

}  // namespace radarcomm::sim
