#pragma once

#include <optional>

#include "radarcomm/params.hpp"

namespace radarcomm::tradeoff {

enum class Binding {
    None,             // interior optimum
    RangeConstraint,  // optimum pinned at max_qc_for_range < 1
    Boundary,         // optimum at the natural boundary q_c = 1
};

const char* binding_name(Binding b);

struct TradeoffResult {
    bool feasible = false;
    std::optional<double> q_c_star;  // absent when infeasible
    double t_star = 0.0;             // packets/slot/m^2; 0 when infeasible
    Binding binding = Binding::None;
};

/// Largest persistency that still guarantees a detectable range of at least
/// d_min, found by bisection (radar_range is strictly decreasing in q_c).
/// nullopt when even q_c = 0 violates the constraint. alpha = 4 only.
std::optional<double> max_qc_for_range(const SystemParams& p, double lambda,
                                       double d_min);

/// Maximize throughput density over q_c in [0, q_max], where q_max is 1
/// (unconstrained) or max_qc_for_range(d_min). Golden-section search with
/// tolerance 1e-6 in q_c, cross-validated against a 1e-3 grid. alpha = 4 only.
TradeoffResult optimize_throughput(const SystemParams& p, double lambda,
                                   std::optional<double> d_min = std::nullopt);

/// Density above which d_min cannot be met even with q_c = 0, located by
/// bisection on radar_range(q_c=0, lambda) - d_min. alpha = 4 only.
double critical_density(const SystemParams& p, double d_min);

}  // namespace radarcomm::tradeoff
