#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matraj/line.hpp"

namespace matraj {

/// Affine global under-estimator of the squared separation of one antenna
/// pair at one slot, expanded at an anchor pair:
///   |p_m - p_j|^2 >= offset + grad_m . p_m + grad_j . p_j
/// with equality at the anchor.
struct AffineMinorant {
  Point2 grad_m;       // coefficient of p_m[n]
  Point2 grad_j;       // coefficient of p_j[n]
  double offset = 0.0; // lambda^2
  int slot = 0;        // n
  int m = 0;
  int j = 1;

  double value(Point2 pm, Point2 pj) const {
    return offset + dot(grad_m, pm) + dot(grad_j, pj);
  }
};

struct ScaConfig {
  double epsilon_star = 0.001;  // outer stop threshold on the delay change (ms)
  int max_outer_iters = 50;
  double tol_feas = 1e-6;       // residual accepted by the inner solver
  double bisect_tol = 1e-4;     // relative bracket width on tau
  int inner_max_iters = 20000;
  double anchor_jitter = 1e-3;  // separation given to coincident anchors (lambda)
  double tau_cap_factor = 20.0; // infeasibility cap = factor x lower-bound tau
};

enum class Scheme { proposed, slm, rma, lower_bound };
std::string to_string(Scheme s);
std::optional<Scheme> scheme_from_string(const std::string& tag);

/// Per outer-iteration diagnostics.
struct IterRecord {
  int iter = 0;
  double tau2_ms = 0.0;
  double max_true_violation = 0.0;  // worst separation/speed residual (lambda)
  int bisect_steps = 0;
};

struct Solution {
  Scheme scheme = Scheme::proposed;
  Trajectory trajectory;
  double delay = 0.0;  // N * tau (ms)
  Assignment assignment;
  std::vector<double> objective_trace;  // tau_2 per outer iteration
  bool stage1_feasible = false;  // straight-line check passed, no refinement run
  std::vector<IterRecord> iters;
  std::optional<uint64_t> seed;  // rma only
};

/// First-order expansion of the squared pair distance at the given anchors.
/// Anchors closer than anchor_jitter are first pushed apart to that
/// separation along a deterministic axis (the coordinate of largest anchor
/// difference, +x for exact coincidence), since a coincident expansion
/// degenerates to an unsatisfiable constant.
AffineMinorant linearize_distance_sq(Point2 anchor_m, Point2 anchor_j,
                                     double anchor_jitter = 1e-3);

/// Minorants for all pairs at all interior slots, expanded at the anchor
/// trajectory. Anchor pairs closer than d_min are re-expanded at exactly
/// d_min separation along their difference direction, the least
/// restrictive valid under-estimator for a violated pair.
std::vector<AffineMinorant> build_minorants(const Trajectory& anchor, double d_min,
                                            double anchor_jitter);

/// Searches for a trajectory with the scenario endpoints, positions in the
/// region, per-slot displacement at most v_max*tau, and every minorant at
/// least d_min^2. Squared-hinge penalty minimized by accelerated projected
/// gradient; box handled by clamping. Returns the trajectory once the
/// largest raw violation is at most cfg.tol_feas, or nullopt if the solver
/// cannot certify feasibility at this tau.
std::optional<Trajectory> subproblem_feasible(const Scenario& s, const Assignment& a,
                                              const std::vector<AffineMinorant>& minorants,
                                              double tau, const ScaConfig& cfg,
                                              const Trajectory& warm);

/// One convex step: minorants at the anchor, then bisection over tau for
/// the smallest certified-feasible slot length. Returns the refined
/// trajectory and its tau. Throws SolverError when no tau up to
/// tau_cap_factor times the geometric floor is feasible.
std::pair<Trajectory, double> solve_subproblem(const Scenario& s, const Assignment& a,
                                               const Trajectory& anchor,
                                               const ScaConfig& cfg);

/// Full refinement loop: re-anchor at each subproblem solution until the
/// delay change drops below epsilon_star. The returned trajectory is
/// audited against the true separation and speed constraints.
Solution sca_refine(const Scenario& s, const Assignment& a, const Trajectory& init,
                    const ScaConfig& cfg);

/// The complete two-stage pipeline: optimal association, straight-line
/// construction, separation check, refinement only if the check fails.
Solution two_stage_solve(const Scenario& s, const ScaConfig& cfg);

/// Straight-line-movement baseline: antennas keep the optimal association
/// but stay on their segments; only the progress profile along each
/// segment is optimized (same bisection + refinement machinery in
/// progress space).
Solution slm_solve(const Scenario& s, const ScaConfig& cfg);

/// Line-constrained pipeline with a caller-fixed association.
Solution slm_refine(const Scenario& s, const Assignment& a, const ScaConfig& cfg);

/// Random-association baseline: a seeded uniformly random permutation,
/// then the same check + refinement as the proposed scheme.
Solution rma_solve(const Scenario& s, const ScaConfig& cfg, uint64_t seed);

/// The straight-line relaxation packaged as a Solution; its delay is the
/// unbeatable floor for the optimal association. The trajectory may
/// violate separation (stage1_feasible records whether it does not).
Solution lower_bound_solution(const Scenario& s);

}  // namespace matraj
