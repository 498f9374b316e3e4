#include "matraj/core.hpp"

#include <cstdarg>
#include <cstdio>

namespace matraj {

namespace {

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

}  // namespace

ValidationResult validate_scenario(const Scenario& s) {
  ValidationResult r;
  auto fail = [&r](std::string msg) {
    r.ok = false;
    r.issues.push_back(std::move(msg));
  };

  if (s.m_count < 1) fail(fmt("m_count %d < 1", s.m_count));
  if (s.n_slots < 1) fail(fmt("n_slots %d < 1", s.n_slots));
  if (!(s.v_max > 0.0)) fail(fmt("nonpositive v_max %g", s.v_max));
  if (!(s.d_min >= 0.0)) fail(fmt("negative d_min %g", s.d_min));
  if (!(s.region.lo.x < s.region.hi.x) || !(s.region.lo.y < s.region.hi.y))
    fail("degenerate region (lo must be strictly below hi in both axes)");
  if (static_cast<int>(s.initial.size()) != s.m_count)
    fail(fmt("initial has %zu points, expected %d", s.initial.size(), s.m_count));
  if (static_cast<int>(s.dest.size()) != s.m_count)
    fail(fmt("dest has %zu points, expected %d", s.dest.size(), s.m_count));

  auto check_points = [&](const std::vector<Point2>& pts, const char* tag) {
    for (size_t i = 0; i < pts.size(); ++i) {
      if (!finite(pts[i])) fail(fmt("%s point %zu is not finite", tag, i));
      else if (!s.region.contains(pts[i]))
        fail(fmt("%s point %zu (%g, %g) outside region", tag, i, pts[i].x, pts[i].y));
    }
    for (size_t i = 0; i < pts.size(); ++i) {
      for (size_t j = i + 1; j < pts.size(); ++j) {
        double d = distance(pts[i], pts[j]);
        if (d < s.d_min - kDistanceCheckTol)
          fail(fmt("%s pair (%zu,%zu) distance %g < %g", tag, i, j, d, s.d_min));
      }
    }
  };
  check_points(s.initial, "initial");
  check_points(s.dest, "dest");
  return r;
}

std::vector<std::vector<double>> trajectory_speeds(const Trajectory& t) {
  if (t.tau <= 0.0) throw std::invalid_argument("zero slot length");
  const int m_count = t.m_count();
  const int n_slots = t.n_slots();
  std::vector<std::vector<double>> speeds(m_count, std::vector<double>(n_slots, 0.0));
  for (int m = 0; m < m_count; ++m)
    for (int n = 0; n < n_slots; ++n)
      speeds[m][n] = distance(t.positions[m][n + 1], t.positions[m][n]) / t.tau;
  return speeds;
}

MinDistanceResult min_pairwise_distance(const Trajectory& t) {
  const int m_count = t.m_count();
  if (m_count < 2) throw std::invalid_argument("no pairs");
  const int n_slots = t.n_slots();
  MinDistanceResult best;
  bool first = true;
  for (int n = 0; n <= n_slots; ++n) {
    for (int m = 0; m < m_count; ++m) {
      for (int j = m + 1; j < m_count; ++j) {
        double d = distance(t.positions[m][n], t.positions[j][n]);
        if (first || d < best.value) {
          best = {d, m, j, n};
          first = false;
        }
      }
    }
  }
  return best;
}

std::string ma_label(int m) {
  if (m < 0) return "?";
  if (m < 26) return std::string(1, static_cast<char>('a' + m));
  return "m" + std::to_string(m);
}

std::string dest_label(int j) {
  if (j < 0) return "?";
  if (j < 26) return std::string(1, static_cast<char>('A' + j));
  return "Q" + std::to_string(j);
}

}  // namespace matraj
