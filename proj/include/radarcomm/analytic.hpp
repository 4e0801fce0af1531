#pragma once

#include <optional>

#include "radarcomm/params.hpp"

namespace radarcomm::analytic {

/// Probability that the nearest aligned neighbour of a radar receiver
/// transmits at least once during the receiver's echo window of m_r - 1
/// slots, averaged over the neighbour's cycle offset:
///   C = 1 - 1/m - sum_{i=m_r}^{m-1} (1/m) (1-q_c)^{min(m_r-1, m-i)}
/// Endpoints are exact: q_c=0 -> (m_r-1)/m, q_c=1 -> 1 - 1/m.
double activity_factor(const SystemParams& p);

/// Detection threshold meeting the false-alarm target against the nearest
/// aligned interferer:
///   theta = K (lambda_a pi / -ln(1 - pf/C))^{alpha/2}
/// Valid for any alpha > 2. Returns nullopt for lambda == 0 (no
/// interference; the threshold is not defined by this model).
/// Throws InfeasibleFalseAlarm when pf_target >= C.
std::optional<double> detection_threshold(const SystemParams& p, double lambda);

/// Maximum reliably detectable range, the solution of S(d_rm) = theta:
///   d_rm = (K sigma / (4 pi theta))^{1/(2 alpha)}
/// Same domain and errors as detection_threshold.
std::optional<double> radar_range(const SystemParams& p, double lambda);

/// Range implied by an externally supplied threshold (e.g. a simulated
/// calibration): (K sigma / (4 pi theta))^{1/(2 alpha)}.
double range_from_threshold(const SystemParams& p, double theta);

/// Laplace transform of the per-slot aggregate interference,
///   L_I(s) = exp(-(lambda_r+lambda_c) K^{2/alpha} pi Gamma(1-2/alpha) s^{2/alpha})
double interference_laplace(const SystemParams& p, double lambda, double s);

/// CDF of the per-slot aggregate interference at alpha = 4 (Levy law):
///   F_I(x) = erfc(pi^{3/2} (lambda_r+lambda_c) sqrt(K/x) / 2)
/// Throws UnsupportedAlpha for alpha != 4.
double interference_cdf(const SystemParams& p, double lambda, double x);

/// Levy scale parameter pi^3 (lambda_r+lambda_c)^2 K / 2 of that law.
double levy_scale(const SystemParams& p, double lambda);

/// Packet success probability P_s = F_I(K d_c^{-alpha} / gamma); alpha = 4 only.
double success_probability(const SystemParams& p, double lambda);

/// Throughput density T = (1-eps) q_c lambda P_s; alpha = 4 only.
double throughput_density(const SystemParams& p, double lambda);

/// Single-slot detection probability for a target at distance d_r given a
/// threshold: 1 if S(d_r) >= theta, else 1 - F_I(theta - S(d_r)). alpha = 4 only.
double detection_probability(const SystemParams& p, double lambda, double theta, double d_r);

/// Radar-side closed forms for one parameter point. nullopt iff lambda == 0.
struct RadarAnalytics {
    double activity_factor;  // C, in [0, 1]
    double threshold_w;      // theta
    double range_m;          // d_rm
};
std::optional<RadarAnalytics> radar_analytics(const SystemParams& p, double lambda);

/// Comm-side closed forms for one parameter point; alpha = 4 only.
struct CommAnalytics {
    double success_probability;
    double throughput_density;
    double levy_scale_w;
};
CommAnalytics comm_analytics(const SystemParams& p, double lambda);

}  // namespace radarcomm::analytic
