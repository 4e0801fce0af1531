#include "radarcomm/params.hpp"

#include <cmath>
#include <numbers>

namespace radarcomm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

int cycle_length_for_eps(int m_r, double eps) {
    if (eps <= 0.0 || eps > 1.0)
        throw Error(Errc::ProbabilityOutOfRange, "eps must lie in (0, 1]");
    int m = static_cast<int>(std::lround(static_cast<double>(m_r) / eps));
    return m < m_r ? m_r : m;
}

SystemParams SystemParams::validate(const RawParams& raw) {
    std::vector<Violation> bad;
    auto positive = [&](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v))
            bad.push_back({Errc::NonPositive, field, "must be finite and > 0"});
    };
    positive(raw.pt_w, "pt_w");
    positive(raw.freq_hz, "freq_hz");
    positive(raw.sigma, "sigma");
    positive(raw.gamma, "gamma");
    positive(raw.d_c, "d_c");
    if (!(raw.phi > 0.0) || !(raw.phi <= kTwoPi))
        bad.push_back({Errc::NonPositive, "phi", "beamwidth must lie in (0, 2*pi]"});
    if (!(raw.alpha > 2.0))
        bad.push_back({Errc::AlphaOutOfRange, "alpha", "path-loss exponent must be > 2"});
    if (raw.m_r < 2 || raw.m < raw.m_r)
        bad.push_back({Errc::CycleInvalid, "m_r/m",
                       "need 2 <= m_r <= m (echo window of m_r - 1 slots must exist)"});
    if (!(raw.q_c >= 0.0 && raw.q_c <= 1.0))
        bad.push_back({Errc::ProbabilityOutOfRange, "q_c", "persistency must lie in [0, 1]"});
    if (!(raw.pf_target > 0.0 && raw.pf_target < 1.0))
        bad.push_back({Errc::ProbabilityOutOfRange, "pf_target",
                       "false alarm target must lie in (0, 1)"});
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return SystemParams(raw);
}

SystemParams SystemParams::with_qc(double q_c) const {
    RawParams r = raw_;
    r.q_c = q_c;
    return validate(r);
}

SystemParams SystemParams::with_cycle(int m_r, int m) const {
    RawParams r = raw_;
    r.m_r = m_r;
    r.m = m;
    return validate(r);
}

SystemParams SystemParams::with_pf(double pf) const {
    RawParams r = raw_;
    r.pf_target = pf;
    return validate(r);
}

DerivedConstants derived_constants(const SystemParams& p) {
    const double gain = 4.0 * std::numbers::pi / (p.phi() * p.phi());
    const double ratio = gain * kSpeedOfLight / (4.0 * std::numbers::pi * p.freq_hz());
    return DerivedConstants{p.pt_w() * ratio * ratio, gain, p.eps()};
}

double radar_return_power(const SystemParams& p, double d_r) {
    if (!(d_r > 0.0))
        throw Error(Errc::NonPositiveDistance, "target distance must be > 0");
    const auto d = derived_constants(p);
    return d.path_constant_k * p.sigma() / (4.0 * std::numbers::pi) *
           std::pow(d_r, -2.0 * p.alpha());
}

ThinnedIntensities thinned_intensities(const SystemParams& p, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw Error(Errc::NegativeDensity, "node density must be finite and >= 0");
    const double align = p.phi() / kTwoPi;
    const double lambda_a = align * align * lambda;
    const double eps = p.eps();
    return ThinnedIntensities{
        eps / p.m_r() * lambda_a,          // = lambda_a / m
        (1.0 - eps) * p.q_c() * lambda_a,
        lambda_a,
    };
}

}  // namespace radarcomm
