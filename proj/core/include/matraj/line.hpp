#pragma once

#include "matraj/assign.hpp"
#include "matraj/core.hpp"

namespace matraj {

/// Delay floor for a given association, with the matching slot length and
/// the slot index at which each antenna reaches its destination.
struct LowerBoundResult {
  double delay_lb = 0.0;      // bottleneck / v_max (ms)
  double slot_len = 0.0;      // delay_lb / N (ms)
  std::vector<int> cutover;   // per antenna, arrival slot in 0..N
};

LowerBoundResult lower_bound_delay(const Scenario& s, const Assignment& a);

/// Relaxed optimum when separation is ignored: every antenna moves along
/// the straight segment to its assigned destination at full speed, then
/// parks. Endpoints are copied verbatim from the scenario.
Trajectory straight_line_trajectory(const Scenario& s, const Assignment& a);

/// Scans all pairs and slots for separations below d_min (strict by
/// kDistanceCheckTol, so exactly-at-d_min passes). Violations are listed
/// in (n, m, j) order.
FeasibilityReport check_inter_ma_distance(const Trajectory& t, double d_min);

}  // namespace matraj
