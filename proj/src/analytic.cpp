#include "radarcomm/analytic.hpp"

#include <cmath>
#include <numbers>

namespace radarcomm::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

void require_alpha4(const SystemParams& p) {
    if (p.alpha() != 4.0)
        throw Error(Errc::UnsupportedAlpha,
                    "closed form exists only for alpha = 4");
}

// -ln(1 - pf/C), the log factor shared by threshold and range.
double log_factor(const SystemParams& p, double c_activity) {
    const double ratio = p.pf_target() / c_activity;
    if (!(ratio < 1.0))
        throw Error(Errc::InfeasibleFalseAlarm,
                    "pf_target >= C: nearest-interferer model cannot meet the target");
    return -std::log1p(-ratio);
}

}  // namespace

double activity_factor(const SystemParams& p) {
    const int m_r = p.m_r();
    const int m = p.m();
    const double q = p.q_c();
    // sum_{i=m_r}^{m-1} x^{min(m_r-1, m-i)} with x = 1-q_c, grouped by the
    // exponent: m-i runs over {1, ..., m-m_r}, capped at the window length.
    const int comm_slots = m - m_r;   // J
    const int window = m_r - 1;       // W
    const double x = 1.0 - q;
    double sum;
    if (q == 0.0) {
        sum = static_cast<double>(comm_slots);
    } else if (q == 1.0) {
        sum = 0.0;
    } else {
        const int n_geo = comm_slots < window ? comm_slots : window;
        sum = x * (1.0 - std::pow(x, n_geo)) / (1.0 - x);
        if (comm_slots > window)
            sum += static_cast<double>(comm_slots - window) * std::pow(x, window);
    }
    return 1.0 - (1.0 + sum) / m;
}

std::optional<double> detection_threshold(const SystemParams& p, double lambda) {
    const auto thin = thinned_intensities(p, lambda);  // validates lambda >= 0
    const double log_f = log_factor(p, activity_factor(p));
    if (lambda == 0.0) return std::nullopt;
    const double k = derived_constants(p).path_constant_k;
    return k * std::pow(thin.lambda_a * kPi / log_f, p.alpha() / 2.0);
}

double range_from_threshold(const SystemParams& p, double theta) {
    if (!(theta > 0.0))
        throw Error(Errc::NonPositiveThreshold, "threshold must be > 0");
    const double k = derived_constants(p).path_constant_k;
    return std::pow(k * p.sigma() / (4.0 * kPi * theta), 1.0 / (2.0 * p.alpha()));
}

std::optional<double> radar_range(const SystemParams& p, double lambda) {
    const auto theta = detection_threshold(p, lambda);
    if (!theta) return std::nullopt;
    return range_from_threshold(p, *theta);
}

double interference_laplace(const SystemParams& p, double lambda, double s) {
    if (!(s >= 0.0)) throw Error(Errc::NonPositive, "transform argument must be >= 0");
    const auto thin = thinned_intensities(p, lambda);
    const double active = thin.lambda_r + thin.lambda_c;
    if (active == 0.0 || s == 0.0) return 1.0;
    const double k = derived_constants(p).path_constant_k;
    const double two_over_alpha = 2.0 / p.alpha();
    const double exponent = active * std::pow(k, two_over_alpha) * kPi *
                            std::tgamma(1.0 - two_over_alpha) *
                            std::pow(s, two_over_alpha);
    return std::exp(-exponent);
}

double interference_cdf(const SystemParams& p, double lambda, double x) {
    require_alpha4(p);
    if (!(x > 0.0)) throw Error(Errc::NonPositive, "interference level must be > 0");
    const auto thin = thinned_intensities(p, lambda);
    const double active = thin.lambda_r + thin.lambda_c;
    const double k = derived_constants(p).path_constant_k;
    return std::erfc(std::pow(kPi, 1.5) * active * std::sqrt(k / x) / 2.0);
}

double levy_scale(const SystemParams& p, double lambda) {
    const auto thin = thinned_intensities(p, lambda);
    const double active = thin.lambda_r + thin.lambda_c;
    const double k = derived_constants(p).path_constant_k;
    return kPi * kPi * kPi * active * active * k / 2.0;
}

double success_probability(const SystemParams& p, double lambda) {
    require_alpha4(p);
    const auto thin = thinned_intensities(p, lambda);
    const double active = thin.lambda_r + thin.lambda_c;
    // F_I(K d_c^-4 / gamma); K cancels inside the erfc argument.
    return std::erfc(std::pow(kPi, 1.5) * active * std::sqrt(p.gamma()) *
                     p.d_c() * p.d_c() / 2.0);
}

double throughput_density(const SystemParams& p, double lambda) {
    return (1.0 - p.eps()) * p.q_c() * lambda * success_probability(p, lambda);
}

double detection_probability(const SystemParams& p, double lambda, double theta,
                             double d_r) {
    require_alpha4(p);
    if (!(theta > 0.0))
        throw Error(Errc::NonPositiveThreshold, "threshold must be > 0");
    const double s = radar_return_power(p, d_r);  // validates d_r > 0
    if (s >= theta) return 1.0;
    return 1.0 - interference_cdf(p, lambda, theta - s);
}

std::optional<RadarAnalytics> radar_analytics(const SystemParams& p, double lambda) {
    const double c = activity_factor(p);
    const auto theta = detection_threshold(p, lambda);
    if (!theta) return std::nullopt;
    return RadarAnalytics{c, *theta, range_from_threshold(p, *theta)};
}

CommAnalytics comm_analytics(const SystemParams& p, double lambda) {
    return CommAnalytics{success_probability(p, lambda),
                         throughput_density(p, lambda),
                         levy_scale(p, lambda)};
}

}  // namespace radarcomm::analytic
