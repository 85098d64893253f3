#pragma once

#include <optional>
#include <vector>

#include "lr/features.hpp"

namespace lr {

/// Per-outer-iteration diagnostics. Record 0 is the initial point.
struct TrajectoryRecord {
    int t = 0;
    Vector theta;
    Vector w;
    double h_loss = 0.0;
    double g_loss = 0.0;
    double bellman_residual = 0.0; // || v_w - T v_theta ||_D
    double value_gap = 0.0;        // || v_theta - v_w ||_D
    std::optional<double> dist_fvalue;
};

/// Inner-step snapshots kept only under instrumentation. For outer step t,
/// w_inner[t] holds w^{t,0} .. w^{t,K_L} and theta_inner[t] holds
/// theta^{t,0} .. theta^{t,K_R}.
struct InnerTraces {
    std::vector<std::vector<Vector>> w_inner;
    std::vector<std::vector<Vector>> theta_inner;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    std::optional<InnerTraces> inner;

    // Step sizes after token resolution, recorded so downstream checks can
    // verify their preconditions (e.g. alpha == 1/L).
    double resolved_alpha = 0.0;
    std::vector<double> resolved_beta;

    const TrajectoryRecord& initial() const { return records.front(); }
    const TrajectoryRecord& final() const { return records.back(); }
};

} // namespace lr
