#pragma once

#include <cstdint>

#include "radarcomm/errors.hpp"

namespace radarcomm {

/// Exact SI value, not 3e8. Affects the path constant at the 0.1% level.
inline constexpr double kSpeedOfLight = 299'792'458.0;

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Map a requested radar duty fraction onto an integer cycle length.
/// The effective duty fraction is m_r / result and is what all outputs report.
int cycle_length_for_eps(int m_r, double eps);

/// Unvalidated scenario parameters in internal units (power in watts,
/// frequency in Hz, angles in radians). Defaults are the common scenario
/// used throughout: 10 dBm @ 60 GHz, 30-degree beams, alpha = 4.
struct RawParams {
    double pt_w = 0.01;       // transmit power [W]
    double freq_hz = 60e9;    // carrier frequency [Hz]
    double phi = 0.5235987755982988;  // beamwidth [rad], pi/6
    double alpha = 4.0;       // path-loss exponent, > 2
    double sigma = 10.0;      // radar cross section [m^2]
    int m_r = 100;            // radar slots per cycle
    int m = 200;              // total cycle length in slots
    double q_c = 0.5;         // ALOHA persistency, in [0, 1]
    double gamma = 5.0;       // SIR decoding threshold, linear
    double d_c = 5.0;         // comm link distance [m]
    double pf_target = 0.1;   // target false alarm probability, in (0, 1)
};

/// Constants derived from a validated parameter set.
///   path_constant_k = P_t (G c / (4 pi f))^2   [W m^alpha]
///   gain            = 4 pi / phi^2
///   eps             = m_r / m
struct DerivedConstants {
    double path_constant_k;
    double gain;
    double eps;
};

/// Per-slot effective interferer densities after alignment and activity
/// thinning of a parent process of intensity lambda [nodes/m^2]:
///   lambda_a = (phi/2pi)^2 lambda          (mutually aligned)
///   lambda_r = (eps/m_r) lambda_a          (radar pulse in a given slot)
///   lambda_c = (1-eps) q_c lambda_a        (comm packet in a given slot)
struct ThinnedIntensities {
    double lambda_r;
    double lambda_c;
    double lambda_a;
};

/// Validated, immutable scenario parameters. Construct via validate();
/// `with_*` helpers return modified, re-validated copies.
class SystemParams {
public:
    static SystemParams validate(const RawParams& raw);

    double pt_w() const { return raw_.pt_w; }
    double freq_hz() const { return raw_.freq_hz; }
    double phi() const { return raw_.phi; }
    double alpha() const { return raw_.alpha; }
    double sigma() const { return raw_.sigma; }
    int m_r() const { return raw_.m_r; }
    int m() const { return raw_.m; }
    double q_c() const { return raw_.q_c; }
    double gamma() const { return raw_.gamma; }
    double d_c() const { return raw_.d_c; }
    double pf_target() const { return raw_.pf_target; }

    double eps() const { return static_cast<double>(raw_.m_r) / raw_.m; }
    const RawParams& raw() const { return raw_; }

    SystemParams with_qc(double q_c) const;
    SystemParams with_cycle(int m_r, int m) const;
    SystemParams with_pf(double pf) const;

private:
    explicit SystemParams(const RawParams& raw) : raw_(raw) {}
    RawParams raw_;
};

DerivedConstants derived_constants(const SystemParams& p);

/// Target return power S = K sigma/(4 pi) d_r^(-2 alpha) of the radar
/// equation. Strictly decreasing in d_r.
double radar_return_power(const SystemParams& p, double d_r);

ThinnedIntensities thinned_intensities(const SystemParams& p, double lambda);

}  // namespace radarcomm
