#include "radarcomm/tradeoff.hpp"

#include <cmath>
#include <functional>

#include "radarcomm/analytic.hpp"

namespace radarcomm::tradeoff {

namespace {

constexpr double kQcTolerance = 1e-6;
constexpr double kGridStep = 1e-3;

void require_alpha4(const SystemParams& p) {
    if (p.alpha() != 4.0)
        throw Error(Errc::UnsupportedAlpha, "tradeoff engine requires alpha = 4");
}

double range_at_qc(const SystemParams& p, double lambda, double q_c) {
    // lambda > 0 is checked by the callers; the optional is always engaged.
    return *analytic::radar_range(p.with_qc(q_c), lambda);
}

// Golden-section maximum of a unimodal objective on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

const char* binding_name(Binding b) {
    switch (b) {
        case Binding::None: return "none";
        case Binding::RangeConstraint: return "range_constraint";
        case Binding::Boundary: return "boundary";
    }
    return "unknown";
}

std::optional<double> max_qc_for_range(const SystemParams& p, double lambda,
                                       double d_min) {
    require_alpha4(p);
    if (!(d_min > 0.0))
        throw Error(Errc::NonPositiveDistance, "d_min must be > 0");
    if (lambda == 0.0) return 1.0;  // no interference, any persistency works
    if (range_at_qc(p, lambda, 0.0) < d_min) return std::nullopt;
    if (range_at_qc(p, lambda, 1.0) >= d_min) return 1.0;
    double lo = 0.0;  // feasible
    double hi = 1.0;  // infeasible
    while (hi - lo > kQcTolerance) {
        const double mid = 0.5 * (lo + hi);
        (range_at_qc(p, lambda, mid) >= d_min ? lo : hi) = mid;
    }
    return lo;
}

TradeoffResult optimize_throughput(const SystemParams& p, double lambda,
                                   std::optional<double> d_min) {
    require_alpha4(p);
    double q_max = 1.0;
    if (d_min) {
        const auto bound = max_qc_for_range(p, lambda, *d_min);
        if (!bound)
            return TradeoffResult{false, std::nullopt, 0.0, Binding::RangeConstraint};
        q_max = *bound;
    }

    const auto objective = [&](double q) {
        return analytic::throughput_density(p.with_qc(q), lambda);
    };

    double q_star = q_max > 0.0
                        ? golden_max(objective, 0.0, q_max, kQcTolerance)
                        : 0.0;
    double t_star = objective(q_star);

    // Grid cross-check; the objective q * erfc(a + b q) is unimodal, so this
    // only matters if the search stopped on the wrong shoulder.
    const int points = static_cast<int>(std::floor(q_max / kGridStep)) + 1;
    double q_grid = q_max;
    double t_grid = objective(q_max);
    for (int i = 0; i < points; ++i) {
        const double q = i * kGridStep;
        const double t = objective(q);
        if (t > t_grid) {
            t_grid = t;
            q_grid = q;
        }
    }
    if (t_grid > t_star) {
        const double lo = std::max(0.0, q_grid - kGridStep);
        const double hi = std::min(q_max, q_grid + kGridStep);
        const double refined = golden_max(objective, lo, hi, kQcTolerance);
        const double t_refined = objective(refined);
        if (t_refined > t_grid) {
            q_star = refined;
            t_star = t_refined;
        } else {
            q_star = q_grid;
            t_star = t_grid;
        }
    }

    Binding binding = Binding::None;
    if (q_max - q_star <= kQcTolerance)
        binding = (d_min && q_max < 1.0) ? Binding::RangeConstraint : Binding::Boundary;
    return TradeoffResult{true, q_star, t_star, binding};
}

double critical_density(const SystemParams& p, double d_min) {
    require_alpha4(p);
    if (!(d_min > 0.0))
        throw Error(Errc::NonPositiveDistance, "d_min must be > 0");
    const SystemParams silent = p.with_qc(0.0);
    const auto feasible = [&](double lambda) {
        return *analytic::radar_range(silent, lambda) >= d_min;
    };
    double lo = 1e-16;
    if (!feasible(lo))
        throw Error(Errc::NumericalFailure,
                    "d_min unreachable even at negligible density");
    double hi = lo;
    while (feasible(hi)) {
        hi *= 10.0;
        if (hi > 1e12)
            throw Error(Errc::NumericalFailure,
                        "feasibility frontier beyond any physical density");
    }
    lo = hi / 10.0;
    // Log-space bisection; the frontier brackets the sign change of
    // radar_range(q_c = 0) - d_min.
    while (hi - lo > 1e-9 * lo) {
        const double mid = std::sqrt(lo * hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace radarcomm::tradeoff
