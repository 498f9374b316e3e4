#pragma once

#include <string>
#include <vector>

#include "matraj/bench.hpp"

namespace matraj {

/// Region boundary, one polyline per antenna, lettered initial (a..) and
/// destination (A..) markers.
std::string trajectory_svg(const Scenario& s, const Trajectory& t, const Assignment& a);

/// Per-antenna speed over time with a dashed v_max reference line.
std::string speeds_svg(const std::vector<std::vector<double>>& speeds, double v_max);

/// Mean delay versus speed, one marked series per scheme.
std::string sweep_svg(const std::vector<SweepRow>& rows);

}  // namespace matraj
