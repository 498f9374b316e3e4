#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Unit conventions: lengths in wavelengths (lambda = 1), times in
// milliseconds, speeds in wavelengths per millisecond.

namespace matraj {

// Shared numeric tolerances (all in lambda unless noted).
inline constexpr double kEndpointTol = 1e-9;       // exact-endpoint checks
inline constexpr double kRegionSlack = 1e-6;       // region containment slack
inline constexpr double kSpeedSlack = 1e-6;        // relative slack on speed checks
inline constexpr double kDistanceCheckTol = 1e-9;  // strict-inside margin for pair checks
inline constexpr double kAuditSlack = 1e-4;        // separation slack granted to solver output

/// Solver-level failure (infeasible subproblem, stalled generation, ...).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Point2&) const = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm_sq(Point2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Point2 a) { return std::sqrt(norm_sq(a)); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool finite(Point2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Axis-aligned rectangle: the region every antenna may move in.
struct Region {
  Point2 lo;
  Point2 hi;

  bool contains(Point2 p, double slack = kRegionSlack) const {
    return p.x >= lo.x - slack && p.x <= hi.x + slack &&
           p.y >= lo.y - slack && p.y <= hi.y + slack;
  }
  Point2 clamp(Point2 p) const {
    return {std::min(std::max(p.x, lo.x), hi.x), std::min(std::max(p.y, lo.y), hi.y)};
  }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

/// One problem instance: where the antennas start, where they must end up,
/// and the movement limits.
struct Scenario {
  int m_count = 0;              // number of movable antennas
  std::vector<Point2> initial;  // size m_count
  std::vector<Point2> dest;     // size m_count
  Region region;
  double d_min = 0.0;  // minimum inter-antenna distance (lambda)
  double v_max = 1.0;  // maximum speed (lambda/ms)
  int n_slots = 1;     // number of time slots N
};

/// Per-antenna position sequence over slots 0..N plus the slot length.
struct Trajectory {
  std::vector<std::vector<Point2>> positions;  // [m][n], n in 0..n_slots
  double tau = 0.0;                            // slot length (ms)

  int m_count() const { return static_cast<int>(positions.size()); }
  int n_slots() const {
    return positions.empty() ? 0 : static_cast<int>(positions[0].size()) - 1;
  }
};

struct Violation {
  int m = 0;
  int j = 0;
  int n = 0;
  double distance = 0.0;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;  // sorted by (n, m, j)
};

struct ValidationResult {
  bool ok = true;
  std::vector<std::string> issues;
};

/// Checks every Scenario invariant; collects all failures instead of
/// stopping at the first one.
ValidationResult validate_scenario(const Scenario& s);

/// Per-slot speeds [m][n] = |p_m[n+1] - p_m[n]| / tau, n in 0..N-1.
/// Throws std::invalid_argument on tau == 0.
std::vector<std::vector<double>> trajectory_speeds(const Trajectory& t);

struct MinDistanceResult {
  double value = 0.0;
  int m = 0;
  int j = 0;
  int n = 0;
};

/// Minimum over all pairs m<j and slots n of the inter-antenna distance,
/// with the lexicographically smallest (n, m, j) arg-min.
/// Throws std::invalid_argument when fewer than two antennas.
MinDistanceResult min_pairwise_distance(const Trajectory& t);

/// Render antenna index m as "a".."z" and destination index j as "A".."Z".
std::string ma_label(int m);
std::string dest_label(int j);

}  // namespace matraj
