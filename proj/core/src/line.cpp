#include "matraj/line.hpp"

#include <algorithm>
#include <cmath>

namespace matraj {

LowerBoundResult lower_bound_delay(const Scenario& s, const Assignment& a) {
  LowerBoundResult r;
  r.cutover.assign(s.m_count, 0);
  if (a.bottleneck <= kEndpointTol) return r;  // nothing moves

  r.delay_lb = a.bottleneck / s.v_max;
  r.slot_len = r.delay_lb / s.n_slots;
  for (int m = 0; m < s.m_count; ++m) {
    double len = distance(s.dest[a.dest_of[m]], s.initial[m]);
    int cut = static_cast<int>(std::floor(s.n_slots * len / a.bottleneck));
    r.cutover[m] = std::clamp(cut, 0, s.n_slots);
  }
  return r;
}

Trajectory straight_line_trajectory(const Scenario& s, const Assignment& a) {
  const LowerBoundResult lb = lower_bound_delay(s, a);
  const int n_slots = s.n_slots;

  Trajectory t;
  t.tau = lb.slot_len;
  t.positions.assign(s.m_count, std::vector<Point2>(n_slots + 1));
  // Per-slot travel budget; v_max cancels against slot_len.
  const double step = a.bottleneck / n_slots;

  for (int m = 0; m < s.m_count; ++m) {
    const Point2 start = s.initial[m];
    const Point2 goal = s.dest[a.dest_of[m]];
    const double len = distance(goal, start);
    auto& path = t.positions[m];
    path[0] = start;
    path[n_slots] = goal;
    if (len <= kEndpointTol) {
      for (int n = 1; n < n_slots; ++n) path[n] = start;
      continue;
    }
    const Point2 unit_dir = (goal - start) * (1.0 / len);
    for (int n = 1; n < n_slots; ++n) {
      double travelled = std::min(step * n, len);
      path[n] = s.region.clamp(start + unit_dir * travelled);
    }
  }
  return t;
}

FeasibilityReport check_inter_ma_distance(const Trajectory& t, double d_min) {
  FeasibilityReport report;
  const int m_count = t.m_count();
  const int n_slots = t.n_slots();
  for (int n = 0; n <= n_slots; ++n) {
    for (int m = 0; m < m_count; ++m) {
      for (int j = m + 1; j < m_count; ++j) {
        double d = distance(t.positions[m][n], t.positions[j][n]);
        if (d < d_min - kDistanceCheckTol) report.violations.push_back({m, j, n, d});
      }
    }
  }
  report.feasible = report.violations.empty();
  return report;
}

}  // namespace matraj
