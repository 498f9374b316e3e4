#include "matraj/sca.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>

#include "matraj/rng.hpp"

namespace matraj {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::slm: return "slm";
    case Scheme::rma: return "rma";
    case Scheme::lower_bound: return "lower_bound";
  }
  return "?";
}

std::optional<Scheme> scheme_from_string(const std::string& tag) {
  if (tag == "proposed") return Scheme::proposed;
  if (tag == "slm") return Scheme::slm;
  if (tag == "rma") return Scheme::rma;
  if (tag == "lower_bound") return Scheme::lower_bound;
  return std::nullopt;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Deterministic direction for separating a (near-)coincident anchor pair:
// the coordinate axis of largest anchor difference, +x on exact ties.
Point2 separation_axis(Point2 pm, Point2 pj) {
  const double dx = pm.x - pj.x;
  const double dy = pm.y - pj.y;
  if (std::abs(dx) >= std::abs(dy)) return {dx >= 0.0 ? 1.0 : -1.0, 0.0};
  return {0.0, dy >= 0.0 ? 1.0 : -1.0};
}

}  // namespace

AffineMinorant linearize_distance_sq(Point2 anchor_m, Point2 anchor_j,
                                     double anchor_jitter) {
  Point2 delta = anchor_m - anchor_j;
  if (norm(delta) < anchor_jitter)
    delta = separation_axis(anchor_m, anchor_j) * anchor_jitter;
  AffineMinorant q;
  q.offset = -norm_sq(delta);
  q.grad_m = delta * 2.0;
  q.grad_j = delta * (-2.0);
  return q;
}

std::vector<AffineMinorant> build_minorants(const Trajectory& anchor, double d_min,
                                            double anchor_jitter) {
  std::vector<AffineMinorant> out;
  const int m_count = anchor.m_count();
  const int n_slots = anchor.n_slots();
  if (d_min <= 0.0 || m_count < 2 || n_slots < 2) return out;
  out.reserve(static_cast<size_t>(n_slots - 1) * m_count * (m_count - 1) / 2);
  for (int n = 1; n < n_slots; ++n) {
    for (int m = 0; m < m_count; ++m) {
      for (int j = m + 1; j < m_count; ++j) {
        Point2 pm = anchor.positions[m][n];
        Point2 pj = anchor.positions[j][n];
        const Point2 delta = pm - pj;
        const double len = norm(delta);
        if (len < d_min) {
          // A pair anchored closer than d_min would demand far more than
          // d_min of separation from the expansion. Re-expanding the pair
          // at exactly d_min separation about its midpoint keeps a valid
          // under-estimator and asks for d_min along the same direction.
          const Point2 dir =
              len >= anchor_jitter ? delta * (1.0 / len) : separation_axis(pm, pj);
          const Point2 mid = (pm + pj) * 0.5;
          pm = mid + dir * (0.5 * d_min);
          pj = mid - dir * (0.5 * d_min);
        }
        AffineMinorant q = linearize_distance_sq(pm, pj, anchor_jitter);
        q.slot = n;
        q.m = m;
        q.j = j;
        out.push_back(q);
      }
    }
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Inner feasibility solver: squared-hinge penalty over box-clamped variables,
// accelerated projected gradient with restarts. Works on a flat vector of the
// interior-slot variables; dim = 2 for free motion, dim = 1 for progress
// along a fixed segment.
// ---------------------------------------------------------------------------

// gi . v_i[n] + gj . v_j[n] >= c in solver coordinates, interior slot n.
struct AffineCon {
  int n = 0;
  int mi = 0;
  int mj = 0;
  double gi[2] = {0.0, 0.0};
  double gj[2] = {0.0, 0.0};
  double c = 0.0;
};

struct FeasProblem {
  int m_count = 0;
  int n_slots = 0;
  int dim = 2;
  std::vector<double> start;   // m_count * dim, slot 0 (fixed)
  std::vector<double> finish;  // m_count * dim, slot N (fixed)
  std::vector<double> box_lo;  // m_count * dim
  std::vector<double> box_hi;  // m_count * dim
  std::vector<AffineCon> cons;
  double smax = 0.0;  // per-slot displacement bound (v_max * tau)
};

class FeasibilitySolver {
 public:
  explicit FeasibilitySolver(FeasProblem p) : p_(std::move(p)) {
    n_vars_ = p_.m_count * std::max(0, p_.n_slots - 1) * p_.dim;
    var_lo_.resize(n_vars_);
    var_hi_.resize(n_vars_);
    for (int n = 1; n < p_.n_slots; ++n) {
      for (int m = 0; m < p_.m_count; ++m) {
        for (int k = 0; k < p_.dim; ++k) {
          const int i = ((n - 1) * p_.m_count + m) * p_.dim + k;
          var_lo_[i] = p_.box_lo[m * p_.dim + k];
          var_hi_[i] = p_.box_hi[m * p_.dim + k];
        }
      }
    }
  }

  void set_smax(double smax) { p_.smax = smax; }
  int n_vars() const { return n_vars_; }

  std::optional<std::vector<double>> solve(std::vector<double> x, double tol,
                                           int max_iters) const {
    clamp(x);
    Eval ex = eval(x, nullptr);
    if (ex.maxviol <= tol) return x;
    if (n_vars_ == 0) return std::nullopt;  // fully determined by endpoints

    std::vector<double> grad(n_vars_), y(n_vars_), xn(n_vars_), xprev = x;
    double step = 1.0;
    double t_momentum = 1.0;
    double best_viol = ex.maxviol;
    int best_iter = 0;

    // Backtracking prox step from `base` (gradient already in `grad`).
    auto prox_step = [&](const std::vector<double>& base, double phi_base) {
      while (true) {
        double lin = 0.0, sq = 0.0;
        for (int i = 0; i < n_vars_; ++i) {
          const double zi =
              std::min(std::max(base[i] - step * grad[i], var_lo_[i]), var_hi_[i]);
          xn[i] = zi;
          const double dz = zi - base[i];
          lin += grad[i] * dz;
          sq += dz * dz;
        }
        Eval en = eval(xn, nullptr);
        if (en.phi <= phi_base + lin + sq / (2.0 * step) + 1e-18 || step <= 1e-14)
          return en;
        step *= 0.5;
      }
    };

    for (int iter = 1; iter <= max_iters; ++iter) {
      const double t_next =
          0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
      const double beta = (t_momentum - 1.0) / t_next;
      for (int i = 0; i < n_vars_; ++i) y[i] = x[i] + beta * (x[i] - xprev[i]);
      if ((iter & 15) == 0) step = std::min(step * 2.0, 1.0);

      Eval ey = eval(y, &grad);
      Eval en = prox_step(y, ey.phi);
      if (en.phi > ex.phi + 1e-18) {
        // restart on objective increase: drop momentum, step from x
        t_momentum = 1.0;
        Eval ex2 = eval(x, &grad);
        en = prox_step(x, ex2.phi);
      } else {
        t_momentum = t_next;
      }

      x.swap(xn);
      xprev.swap(xn);
      ex = en;
      if (ex.maxviol <= tol) return x;

      if (ex.maxviol < best_viol * (1.0 - 1e-4)) {
        best_viol = ex.maxviol;
        best_iter = iter;
      } else if (iter - best_iter > kStallWindow) {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

 private:
  static constexpr int kStallWindow = 600;

  struct Eval {
    double phi = 0.0;
    double maxviol = 0.0;
  };

  const double* at(const std::vector<double>& x, int n, int m) const {
    if (n == 0) return &p_.start[m * p_.dim];
    if (n == p_.n_slots) return &p_.finish[m * p_.dim];
    return &x[((n - 1) * p_.m_count + m) * p_.dim];
  }

  double* grad_at(std::vector<double>& g, int n, int m) const {
    if (n == 0 || n == p_.n_slots) return nullptr;
    return &g[((n - 1) * p_.m_count + m) * p_.dim];
  }

  void clamp(std::vector<double>& x) const {
    for (int i = 0; i < n_vars_; ++i)
      x[i] = std::min(std::max(x[i], var_lo_[i]), var_hi_[i]);
  }

  Eval eval(const std::vector<double>& x, std::vector<double>* grad) const {
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);
    Eval e;
    const int dim = p_.dim;
    const double smax = p_.smax;
    const double smax_sq = smax * smax;

    for (int m = 0; m < p_.m_count; ++m) {
      for (int n = 0; n < p_.n_slots; ++n) {
        const double* pa = at(x, n, m);
        const double* pb = at(x, n + 1, m);
        double dv[2] = {0.0, 0.0};
        double d2 = 0.0;
        for (int k = 0; k < dim; ++k) {
          dv[k] = pb[k] - pa[k];
          d2 += dv[k] * dv[k];
        }
        if (d2 <= smax_sq) continue;
        const double dist = std::sqrt(d2);
        const double h = dist - smax;
        e.phi += h * h;
        e.maxviol = std::max(e.maxviol, h);
        if (grad) {
          const double coef = 2.0 * h / dist;
          double* ga = grad_at(*grad, n, m);
          double* gb = grad_at(*grad, n + 1, m);
          for (int k = 0; k < dim; ++k) {
            const double g = coef * dv[k];
            if (gb) gb[k] += g;
            if (ga) ga[k] -= g;
          }
        }
      }
    }

    for (const AffineCon& q : p_.cons) {
      const double* pi = at(x, q.n, q.mi);
      const double* pj = at(x, q.n, q.mj);
      double v = 0.0;
      for (int k = 0; k < dim; ++k) v += q.gi[k] * pi[k] + q.gj[k] * pj[k];
      const double h = q.c - v;
      if (h <= 0.0) continue;
      e.phi += h * h;
      e.maxviol = std::max(e.maxviol, h);
      if (grad) {
        double* gi = grad_at(*grad, q.n, q.mi);
        double* gj = grad_at(*grad, q.n, q.mj);
        const double coef = 2.0 * h;
        for (int k = 0; k < dim; ++k) {
          if (gi) gi[k] -= coef * q.gi[k];
          if (gj) gj[k] -= coef * q.gj[k];
        }
      }
    }
    return e;
  }

  FeasProblem p_;
  int n_vars_ = 0;
  std::vector<double> var_lo_, var_hi_;
};

// ---------------------------------------------------------------------------
// Bisection over tau around the inner solver.
// ---------------------------------------------------------------------------

struct BisectResult {
  std::vector<double> x;
  double tau = 0.0;
  int probes = 0;
};

using ProbeFn =
    std::function<std::optional<std::vector<double>>(double, const std::vector<double>&)>;

// Smallest certified-feasible tau in [tau_lo, cap] with relative bracket
// width at most rel_tol. tau_anchor (when above tau_lo) is tried as the
// upper end before the doubling ladder.
std::optional<BisectResult> bisect_tau(double tau_lo, double tau_anchor, double cap,
                                       double rel_tol, const std::vector<double>& warm0,
                                       const ProbeFn& probe) {
  BisectResult best;
  int probes = 0;
  auto try_tau = [&](double tau, const std::vector<double>& warm) {
    ++probes;
    if (auto r = probe(tau, warm)) {
      best.x = std::move(*r);
      best.tau = tau;
      return true;
    }
    return false;
  };

  if (try_tau(tau_lo, warm0)) {
    best.probes = probes;
    return best;  // geometric floor reached, nothing smaller exists
  }

  double lo = tau_lo;
  double hi = -1.0;
  if (tau_anchor > tau_lo * (1.0 + 1e-12) && try_tau(tau_anchor, warm0)) hi = tau_anchor;
  if (hi < 0.0) {
    for (double t = 2.0 * tau_lo;; t *= 2.0) {
      const bool last = t >= cap;
      if (last) t = cap;
      if (try_tau(t, warm0)) {
        hi = t;
        break;
      }
      lo = t;
      if (last) break;
    }
    if (hi < 0.0) return std::nullopt;
  }

  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (try_tau(mid, best.x))
      hi = mid;
    else
      lo = mid;
  }
  best.probes = probes;
  return best;
}

// ---------------------------------------------------------------------------
// Position-space subproblem (free 2D motion).
// ---------------------------------------------------------------------------

std::vector<double> interior_from_traj(const Trajectory& t) {
  const int m_count = t.m_count();
  const int n_slots = t.n_slots();
  std::vector<double> x(static_cast<size_t>(m_count) * std::max(0, n_slots - 1) * 2);
  for (int n = 1; n < n_slots; ++n) {
    for (int m = 0; m < m_count; ++m) {
      const size_t i = (static_cast<size_t>(n - 1) * m_count + m) * 2;
      x[i] = t.positions[m][n].x;
      x[i + 1] = t.positions[m][n].y;
    }
  }
  return x;
}

Trajectory traj_from_interior(const Scenario& s, const Assignment& a,
                              const std::vector<double>& x, double tau) {
  Trajectory t;
  t.tau = tau;
  t.positions.assign(s.m_count, std::vector<Point2>(s.n_slots + 1));
  for (int m = 0; m < s.m_count; ++m) {
    t.positions[m][0] = s.initial[m];
    t.positions[m][s.n_slots] = s.dest[a.dest_of[m]];
  }
  for (int n = 1; n < s.n_slots; ++n) {
    for (int m = 0; m < s.m_count; ++m) {
      const size_t i = (static_cast<size_t>(n - 1) * s.m_count + m) * 2;
      t.positions[m][n] = {x[i], x[i + 1]};
    }
  }
  return t;
}

// Builds the 2D problem; nullopt when a fixed-slot constraint is already
// beyond repair (cannot happen for validated scenarios).
std::optional<FeasProblem> build_position_problem(
    const Scenario& s, const Assignment& a, const std::vector<AffineMinorant>& minorants,
    double tol) {
  FeasProblem p;
  p.m_count = s.m_count;
  p.n_slots = s.n_slots;
  p.dim = 2;
  p.start.resize(s.m_count * 2);
  p.finish.resize(s.m_count * 2);
  p.box_lo.resize(s.m_count * 2);
  p.box_hi.resize(s.m_count * 2);
  for (int m = 0; m < s.m_count; ++m) {
    const Point2 goal = s.dest[a.dest_of[m]];
    p.start[m * 2] = s.initial[m].x;
    p.start[m * 2 + 1] = s.initial[m].y;
    p.finish[m * 2] = goal.x;
    p.finish[m * 2 + 1] = goal.y;
    p.box_lo[m * 2] = s.region.lo.x;
    p.box_lo[m * 2 + 1] = s.region.lo.y;
    p.box_hi[m * 2] = s.region.hi.x;
    p.box_hi[m * 2 + 1] = s.region.hi.y;
  }
  const double rhs = s.d_min * s.d_min;
  p.cons.reserve(minorants.size());
  for (const AffineMinorant& q : minorants) {
    if (q.slot <= 0 || q.slot >= s.n_slots) {
      const Point2 pm = q.slot <= 0 ? s.initial[q.m] : s.dest[a.dest_of[q.m]];
      const Point2 pj = q.slot <= 0 ? s.initial[q.j] : s.dest[a.dest_of[q.j]];
      if (q.value(pm, pj) < rhs - tol) return std::nullopt;
      continue;  // constant at fixed endpoints
    }
    AffineCon c;
    c.n = q.slot;
    c.mi = q.m;
    c.mj = q.j;
    c.gi[0] = q.grad_m.x;
    c.gi[1] = q.grad_m.y;
    c.gj[0] = q.grad_j.x;
    c.gj[1] = q.grad_j.y;
    c.c = rhs - q.offset;
    p.cons.push_back(c);
  }
  return p;
}

double max_assigned_length(const Scenario& s, const Assignment& a) {
  double len = 0.0;
  for (int m = 0; m < s.m_count; ++m)
    len = std::max(len, distance(s.initial[m], s.dest[a.dest_of[m]]));
  return len;
}

Trajectory constant_trajectory(const Scenario& s, const Assignment& a) {
  Trajectory t;
  t.tau = 0.0;
  t.positions.assign(s.m_count, std::vector<Point2>(s.n_slots + 1));
  for (int m = 0; m < s.m_count; ++m) {
    for (int n = 0; n < s.n_slots; ++n) t.positions[m][n] = s.initial[m];
    t.positions[m][s.n_slots] = s.dest[a.dest_of[m]];
  }
  return t;
}

double peak_displacement(const Trajectory& t) {
  double peak = 0.0;
  for (int m = 0; m < t.m_count(); ++m)
    for (int n = 0; n < t.n_slots(); ++n)
      peak = std::max(peak, distance(t.positions[m][n + 1], t.positions[m][n]));
  return peak;
}

struct SubOutcome {
  Trajectory traj;
  double tau = 0.0;
  int probes = 0;
};

SubOutcome solve_position_subproblem(const Scenario& s, const Assignment& a,
                                     const Trajectory& anchor, const ScaConfig& cfg) {
  const double len = max_assigned_length(s, a);
  if (len <= kEndpointTol) return {constant_trajectory(s, a), 0.0, 0};
  const double tau_lo = len / (s.v_max * s.n_slots);

  const auto minorants = build_minorants(anchor, s.d_min, cfg.anchor_jitter);
  auto problem = build_position_problem(s, a, minorants, cfg.tol_feas);
  if (!problem) throw SolverError("subproblem infeasible up to tau cap");
  FeasibilitySolver solver(std::move(*problem));

  ProbeFn probe = [&](double tau, const std::vector<double>& warm) {
    solver.set_smax(s.v_max * tau);
    return solver.solve(warm, cfg.tol_feas, cfg.inner_max_iters);
  };
  auto res = bisect_tau(tau_lo, anchor.tau, cfg.tau_cap_factor * tau_lo, cfg.bisect_tol,
                        interior_from_traj(anchor), probe);
  if (!res) throw SolverError("subproblem infeasible up to tau cap");

  Trajectory t = traj_from_interior(s, a, res->x, res->tau);
  // Stretch tau to the realized peak displacement so the speed bound holds
  // with zero residual; the linearized certificate is tau-independent.
  const double tau_exact = std::max(peak_displacement(t) / s.v_max, 0.0);
  t.tau = tau_exact;
  return {std::move(t), tau_exact, res->probes};
}

// ---------------------------------------------------------------------------
// Anchor preparation and audits shared by the refinement loops.
// ---------------------------------------------------------------------------

// Worst true residual of the trajectory: separation shortfall or per-slot
// speed excess, whichever is larger (lambda).
double true_violation(const Scenario& s, const Trajectory& t) {
  double worst = 0.0;
  const int n_slots = t.n_slots();
  for (int n = 0; n <= n_slots; ++n)
    for (int m = 0; m < s.m_count; ++m)
      for (int j = m + 1; j < s.m_count; ++j)
        worst = std::max(worst, s.d_min - distance(t.positions[m][n], t.positions[j][n]));
  const double budget = s.v_max * t.tau;
  for (int m = 0; m < s.m_count; ++m)
    for (int n = 0; n < n_slots; ++n)
      worst = std::max(worst,
                       distance(t.positions[m][n + 1], t.positions[m][n]) - budget);
  return std::max(worst, 0.0);
}

void audit_or_throw(const Scenario& s, const Assignment& a, const Trajectory& t) {
  if (s.m_count >= 2 &&
      !check_inter_ma_distance(t, s.d_min - kAuditSlack).feasible)
    throw SolverError("final trajectory violates separation beyond tolerance");
  const double budget = s.v_max * t.tau * (1.0 + kSpeedSlack) + 1e-15;
  for (int m = 0; m < s.m_count; ++m) {
    for (int n = 0; n < t.n_slots(); ++n)
      if (distance(t.positions[m][n + 1], t.positions[m][n]) > budget)
        throw SolverError("final trajectory violates speed beyond tolerance");
    if (distance(t.positions[m][0], s.initial[m]) > kEndpointTol ||
        distance(t.positions[m][t.n_slots()], s.dest[a.dest_of[m]]) > kEndpointTol)
      throw SolverError("final trajectory misses an endpoint");
    for (int n = 0; n <= t.n_slots(); ++n)
      if (!s.region.contains(t.positions[m][n]))
        throw SolverError("final trajectory leaves the region");
  }
}

// Conflicted straight-line anchors cross each other head-on, which leaves
// the expansion no lateral direction to separate along. Bending every
// conflicted antenna's interior slots sideways (alternating sides,
// staggered amplitudes) gives the first subproblem usable geometry. The
// bent anchor's tau is raised to its own peak displacement so it can serve
// as an upper bracket for the first bisection.
Trajectory bend_conflicts(const Scenario& s, const Assignment& a, const Trajectory& init) {
  const FeasibilityReport report = check_inter_ma_distance(init, s.d_min);
  if (report.feasible) return init;
  std::vector<char> conflicted(s.m_count, 0);
  for (const Violation& v : report.violations) {
    conflicted[v.m] = 1;
    conflicted[v.j] = 1;
  }

  Trajectory bent = init;
  const int n_slots = init.n_slots();
  int rank = 0;
  for (int m = 0; m < s.m_count; ++m) {
    if (!conflicted[m]) continue;
    const Point2 start = s.initial[m];
    const Point2 goal = s.dest[a.dest_of[m]];
    const double len = distance(goal, start);
    const Point2 perp = len > kEndpointTol
                            ? Point2{-(goal.y - start.y) / len, (goal.x - start.x) / len}
                            : Point2{1.0, 0.0};
    const double side = (rank % 2 == 0) ? 1.0 : -1.0;
    const double amp = 0.5 * s.d_min * (1.0 + 0.25 * (rank / 2));
    for (int n = 1; n < n_slots; ++n) {
      const double bump = side * amp * std::sin(std::numbers::pi * n / n_slots);
      bent.positions[m][n] = s.region.clamp(init.positions[m][n] + perp * bump);
    }
    ++rank;
  }
  bent.tau = std::max(bent.tau, peak_displacement(bent) / s.v_max);
  return bent;
}

}  // namespace

std::optional<Trajectory> subproblem_feasible(const Scenario& s, const Assignment& a,
                                              const std::vector<AffineMinorant>& minorants,
                                              double tau, const ScaConfig& cfg,
                                              const Trajectory& warm) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  auto problem = build_position_problem(s, a, minorants, cfg.tol_feas);
  if (!problem) return std::nullopt;
  FeasibilitySolver solver(std::move(*problem));
  solver.set_smax(s.v_max * tau);
  auto x = solver.solve(interior_from_traj(warm), cfg.tol_feas, cfg.inner_max_iters);
  if (!x) return std::nullopt;
  return traj_from_interior(s, a, *x, tau);
}

std::pair<Trajectory, double> solve_subproblem(const Scenario& s, const Assignment& a,
                                               const Trajectory& anchor,
                                               const ScaConfig& cfg) {
  SubOutcome out = solve_position_subproblem(s, a, anchor, cfg);
  return {std::move(out.traj), out.tau};
}

Solution sca_refine(const Scenario& s, const Assignment& a, const Trajectory& init,
                    const ScaConfig& cfg) {
  Solution sol;
  sol.scheme = Scheme::proposed;
  sol.assignment = a;

  Trajectory anchor = bend_conflicts(s, a, init);
  double prev = kInf;
  for (int l = 1; l <= cfg.max_outer_iters; ++l) {
    SubOutcome sub = solve_position_subproblem(s, a, anchor, cfg);
    const double tau2 = static_cast<double>(s.n_slots) * sub.tau;
    anchor = std::move(sub.traj);
    sol.objective_trace.push_back(tau2);
    sol.iters.push_back({l, tau2, true_violation(s, anchor), sub.probes});
    if (std::abs(prev - tau2) <= cfg.epsilon_star) break;
    prev = tau2;
  }
  sol.trajectory = std::move(anchor);
  sol.delay = sol.objective_trace.back();
  audit_or_throw(s, a, sol.trajectory);
  return sol;
}

Solution two_stage_solve(const Scenario& s, const ScaConfig& cfg) {
  const Assignment a = bottleneck_assignment(distance_matrix(s));
  const Trajectory straight = straight_line_trajectory(s, a);
  if (check_inter_ma_distance(straight, s.d_min).feasible) {
    Solution sol;
    sol.scheme = Scheme::proposed;
    sol.assignment = a;
    sol.trajectory = straight;
    sol.delay = lower_bound_delay(s, a).delay_lb;
    sol.stage1_feasible = true;
    sol.objective_trace = {sol.delay};
    sol.iters = {{1, sol.delay, 0.0, 0}};
    return sol;
  }
  Solution sol = sca_refine(s, a, straight, cfg);
  sol.scheme = Scheme::proposed;
  return sol;
}

Solution rma_solve(const Scenario& s, const ScaConfig& cfg, uint64_t seed) {
  SplitRng rng(seed);
  const Assignment a =
      assignment_from_permutation(distance_matrix(s), rng.permutation(s.m_count));
  const Trajectory straight = straight_line_trajectory(s, a);
  Solution sol;
  if (check_inter_ma_distance(straight, s.d_min).feasible) {
    sol.assignment = a;
    sol.trajectory = straight;
    sol.delay = lower_bound_delay(s, a).delay_lb;
    sol.stage1_feasible = true;
    sol.objective_trace = {sol.delay};
    sol.iters = {{1, sol.delay, 0.0, 0}};
  } else {
    sol = sca_refine(s, a, straight, cfg);
  }
  sol.scheme = Scheme::rma;
  sol.seed = seed;
  return sol;
}

Solution lower_bound_solution(const Scenario& s) {
  const Assignment a = bottleneck_assignment(distance_matrix(s));
  Solution sol;
  sol.scheme = Scheme::lower_bound;
  sol.assignment = a;
  sol.trajectory = straight_line_trajectory(s, a);
  sol.delay = lower_bound_delay(s, a).delay_lb;
  sol.stage1_feasible = check_inter_ma_distance(sol.trajectory, s.d_min).feasible;
  sol.objective_trace = {sol.delay};
  sol.iters = {{1, sol.delay, true_violation(s, sol.trajectory), 0}};
  return sol;
}

// ---------------------------------------------------------------------------
// Straight-line-movement baseline: progress along fixed segments.
// ---------------------------------------------------------------------------

namespace {

struct SlmGeometry {
  std::vector<Point2> origin;
  std::vector<Point2> dir;  // unit, zero for frozen antennas
  std::vector<double> len;
};

SlmGeometry slm_geometry(const Scenario& s, const Assignment& a) {
  SlmGeometry g;
  g.origin = s.initial;
  g.dir.resize(s.m_count);
  g.len.resize(s.m_count);
  for (int m = 0; m < s.m_count; ++m) {
    const Point2 goal = s.dest[a.dest_of[m]];
    const double len = distance(goal, s.initial[m]);
    g.len[m] = len;
    g.dir[m] = len > kEndpointTol ? (goal - s.initial[m]) * (1.0 / len) : Point2{0.0, 0.0};
  }
  return g;
}

Point2 slm_point(const SlmGeometry& g, int m, double progress) {
  return g.origin[m] + g.dir[m] * progress;
}

Trajectory slm_traj_from_progress(const Scenario& s, const Assignment& a,
                                  const SlmGeometry& g, const std::vector<double>& x,
                                  double tau) {
  Trajectory t;
  t.tau = tau;
  t.positions.assign(s.m_count, std::vector<Point2>(s.n_slots + 1));
  for (int m = 0; m < s.m_count; ++m) {
    t.positions[m][0] = s.initial[m];
    t.positions[m][s.n_slots] = s.dest[a.dest_of[m]];
  }
  for (int n = 1; n < s.n_slots; ++n)
    for (int m = 0; m < s.m_count; ++m)
      t.positions[m][n] = slm_point(g, m, x[(n - 1) * s.m_count + m]);
  return t;
}

// Straight schedule with per-antenna slot shifts, uniform speed in both
// cases so no slot carries a jump. A positive shift arrives that many
// slots earlier (steeper slope from the start); a negative one waits that
// many slots and catches up, arriving exactly at slot N.
std::vector<double> shifted_schedule(const Scenario& s, const SlmGeometry& g, double step,
                                     const std::vector<int>& shift) {
  std::vector<double> x(static_cast<size_t>(s.m_count) * std::max(0, s.n_slots - 1));
  for (int m = 0; m < s.m_count; ++m) {
    double slope = step;
    int wait = 0;
    if (shift[m] > 0) {
      const double natural = g.len[m] / std::max(step, 1e-300);
      slope = g.len[m] / std::max(natural - shift[m], 1.0);
    } else if (shift[m] < 0) {
      wait = std::min(-shift[m], s.n_slots - 1);
      slope = g.len[m] / (s.n_slots - wait);
    }
    for (int n = 1; n < s.n_slots; ++n)
      x[(n - 1) * s.m_count + m] = std::clamp(slope * (n - wait), 0.0, g.len[m]);
  }
  return x;
}

double schedule_min_separation(const Scenario& s, const SlmGeometry& g,
                               const std::vector<double>& prog) {
  double worst = kInf;
  for (int n = 1; n < s.n_slots; ++n)
    for (int m = 0; m < s.m_count; ++m)
      for (int j = m + 1; j < s.m_count; ++j)
        worst = std::min(worst, distance(slm_point(g, m, prog[(n - 1) * s.m_count + m]),
                                         slm_point(g, j, prog[(n - 1) * s.m_count + j])));
  return worst;
}

double schedule_peak_step(const Scenario& s, const SlmGeometry& g,
                          const std::vector<double>& prog) {
  double peak = 0.0;
  for (int m = 0; m < s.m_count; ++m) {
    double prev = 0.0;
    for (int n = 1; n < s.n_slots; ++n) {
      const double cur = prog[(n - 1) * s.m_count + m];
      peak = std::max(peak, std::abs(cur - prev));
      prev = cur;
    }
    peak = std::max(peak, std::abs(g.len[m] - prev));
  }
  return peak;
}

// (capped separation up, total shortfall down, peak step down) ordering;
// the shortfall term keeps a usable gradient while a wide conflict window
// shrinks without yet improving the worst pair.
struct SchedScore {
  double sep = 0.0;
  double shortfall = 0.0;
  double peak = 0.0;

  bool better_than(const SchedScore& o) const {
    if (sep != o.sep) return sep > o.sep;
    if (shortfall != o.shortfall) return shortfall < o.shortfall;
    return peak < o.peak;
  }
};

SchedScore schedule_score(const Scenario& s, const SlmGeometry& g,
                          const std::vector<double>& prog) {
  SchedScore sc;
  sc.sep = s.d_min;
  for (int n = 1; n < s.n_slots; ++n)
    for (int m = 0; m < s.m_count; ++m)
      for (int j = m + 1; j < s.m_count; ++j) {
        const double d =
            distance(slm_point(g, m, prog[(n - 1) * s.m_count + m]),
                     slm_point(g, j, prog[(n - 1) * s.m_count + j]));
        sc.sep = std::min(sc.sep, d);
        sc.shortfall += std::max(0.0, s.d_min - d);
      }
  sc.peak = schedule_peak_step(s, g, prog);
  return sc;
}
struct DeepestPair {
  double sep = kInf;
  int m = -1;
  int j = -1;
};

DeepestPair schedule_deepest_pair(const Scenario& s, const SlmGeometry& g,
                                  const std::vector<double>& prog) {
  DeepestPair out;
  for (int n = 1; n < s.n_slots; ++n)
    for (int m = 0; m < s.m_count; ++m)
      for (int j = m + 1; j < s.m_count; ++j) {
        const double d =
            distance(slm_point(g, m, prog[(n - 1) * s.m_count + m]),
                     slm_point(g, j, prog[(n - 1) * s.m_count + j]));
        if (d < out.sep) out = {d, m, j};
      }
  return out;
}

// Greedy repair of a conflicted straight schedule: each round tries lead
// and lag moves on the deepest pair and keeps the one improving the
// worst-case separation most (ties to the gentlest peak step, so free
// reschedules win over the ones that must be priced into tau).
std::vector<double> slm_anchor_schedule(const Scenario& s, const Assignment& a,
                                        const SlmGeometry& g,
                                        const FeasibilityReport& report) {
  const double step = a.bottleneck / s.n_slots;
  std::vector<int> shift(s.m_count, 0);  // negative entries wait before starting
  std::vector<double> prog = shifted_schedule(s, g, step, shift);
  if (report.feasible || step <= kEndpointTol) return prog;

  const int k_inc =
      std::max(1, static_cast<int>(std::ceil(s.d_min / step)) / 2);

  std::vector<double> best = prog;
  SchedScore best_score = schedule_score(s, g, prog);
  SchedScore cur_score = best_score;
  const int lag_cap = std::max(1, 2 * s.n_slots / 3);
  for (int round = 0; round < 100; ++round) {
    if (cur_score.sep >= s.d_min) break;
    const DeepestPair deep = schedule_deepest_pair(s, g, prog);
    // steepest-ascent over lead/lag moves of the deepest pair, singly and
    // in opposite-direction combination
    int move_m = -1, move_shift_m = 0;
    int move_j = -1, move_shift_j = 0;
    SchedScore move_score = cur_score;
    auto consider = [&](int am, int sm, int aj, int sj) {
      const int saved_m = am >= 0 ? shift[am] : 0;
      const int saved_j = aj >= 0 ? shift[aj] : 0;
      if (am >= 0) shift[am] = sm;
      if (aj >= 0) shift[aj] = sj;
      const std::vector<double> cand_prog = shifted_schedule(s, g, step, shift);
      if (am >= 0) shift[am] = saved_m;
      if (aj >= 0) shift[aj] = saved_j;
      const SchedScore sc = schedule_score(s, g, cand_prog);
      if (sc.better_than(move_score)) {
        move_score = sc;
        move_m = am;
        move_shift_m = sm;
        move_j = aj;
        move_shift_j = sj;
      }
    };
    for (int cand : {deep.m, deep.j}) {
      if (cand < 0 || g.len[cand] <= kEndpointTol) continue;
      for (int dir : {-1, 1})
        for (int mult : {1, 2, 4})
          consider(cand, std::clamp(shift[cand] + dir * mult * k_inc, -lag_cap,
                                    s.n_slots),
                   -1, 0);
    }
    if (deep.m >= 0 && deep.j >= 0 && g.len[deep.m] > kEndpointTol &&
        g.len[deep.j] > kEndpointTol) {
      for (int dir : {-1, 1})
        for (int mult : {2, 4})
          consider(deep.m,
                   std::clamp(shift[deep.m] + dir * mult * k_inc, -lag_cap, s.n_slots),
                   deep.j,
                   std::clamp(shift[deep.j] - dir * mult * k_inc, -lag_cap, s.n_slots));
    }
    if (move_m < 0 && move_j < 0) break;  // leave the rest to the expansion
    if (move_m >= 0) shift[move_m] = move_shift_m;
    if (move_j >= 0) shift[move_j] = move_shift_j;
    prog = shifted_schedule(s, g, step, shift);
    cur_score = move_score;
    if (cur_score.better_than(best_score)) {
      best_score = cur_score;
      best = prog;
    }
  }
  return best;
}

// Expansion direction for a violated pair in line space. The progress
// variables only move along the two segments, so the direction must be one
// the segments can realize: candidates are the current difference, the
// extreme differences at the progress-box corners, and the relative motion
// direction; the winner maximizes the reachable headroom
//   max over the box of dir . (p_m(s_m) - p_j(s_j))  minus  d_min.
Point2 slm_inflation_dir(const SlmGeometry& g, int m, int j, Point2 pm, Point2 pj,
                         double d_min, double anchor_jitter) {
  std::vector<Point2> cands;
  cands.reserve(8);
  const Point2 delta = pm - pj;
  const double dn = norm(delta);
  if (dn >= anchor_jitter) cands.push_back(delta * (1.0 / dn));
  for (double sm : {0.0, g.len[m]}) {
    for (double sj : {0.0, g.len[j]}) {
      const Point2 d = slm_point(g, m, sm) - slm_point(g, j, sj);
      const double n2 = norm(d);
      if (n2 > 1e-9) cands.push_back(d * (1.0 / n2));
    }
  }
  {
    const Point2 d = g.dir[m] - g.dir[j];
    const double n2 = norm(d);
    if (n2 > 1e-9) cands.push_back(d * (1.0 / n2));
  }
  cands.push_back(separation_axis(pm, pj));

  auto headroom = [&](Point2 dir) {
    double v = dot(dir, g.origin[m] - g.origin[j]);
    v += std::max(0.0, dot(dir, g.dir[m])) * g.len[m];
    v += std::max(0.0, -dot(dir, g.dir[j])) * g.len[j];
    return v - d_min;
  };
  Point2 best = cands.front();
  double best_headroom = headroom(best);
  for (const Point2& c : cands) {
    const double h = headroom(c);
    if (h > best_headroom + 1e-12) {
      best = c;
      best_headroom = h;
    }
  }
  return best;
}

FeasProblem build_progress_problem(const Scenario& s, const SlmGeometry& g,
                                   const std::vector<double>& anchor_prog,
                                   const ScaConfig& cfg) {
  FeasProblem p;
  p.m_count = s.m_count;
  p.n_slots = s.n_slots;
  p.dim = 1;
  p.start.assign(s.m_count, 0.0);
  p.finish = g.len;
  p.box_lo.assign(s.m_count, 0.0);
  p.box_hi = g.len;

  if (s.d_min > 0.0 && s.m_count >= 2) {
    const double rhs = s.d_min * s.d_min;
    for (int n = 1; n < s.n_slots; ++n) {
      for (int m = 0; m < s.m_count; ++m) {
        for (int j = m + 1; j < s.m_count; ++j) {
          Point2 pm = slm_point(g, m, anchor_prog[(n - 1) * s.m_count + m]);
          Point2 pj = slm_point(g, j, anchor_prog[(n - 1) * s.m_count + j]);
          const Point2 delta = pm - pj;
          const double len = norm(delta);
          if (len < s.d_min) {
            const Point2 dir = slm_inflation_dir(g, m, j, pm, pj, s.d_min,
                                                 cfg.anchor_jitter);
            const Point2 mid = (pm + pj) * 0.5;
            pm = mid + dir * (0.5 * s.d_min);
            pj = mid - dir * (0.5 * s.d_min);
          }
          const AffineMinorant q = linearize_distance_sq(pm, pj, cfg.anchor_jitter);
          AffineCon c;
          c.n = n;
          c.mi = m;
          c.mj = j;
          c.gi[0] = dot(q.grad_m, g.dir[m]);
          c.gj[0] = dot(q.grad_j, g.dir[j]);
          c.c = rhs - q.offset - dot(q.grad_m, g.origin[m]) - dot(q.grad_j, g.origin[j]);
          p.cons.push_back(c);
        }
      }
    }
  }
  return p;
}

SubOutcome solve_progress_subproblem(const Scenario& s, const Assignment& a,
                                     const SlmGeometry& g,
                                     const std::vector<double>& anchor_prog,
                                     double anchor_tau, const ScaConfig& cfg) {
  const double len = max_assigned_length(s, a);
  if (len <= kEndpointTol) return {constant_trajectory(s, a), 0.0, 0};
  const double tau_lo = len / (s.v_max * s.n_slots);

  FeasibilitySolver solver(build_progress_problem(s, g, anchor_prog, cfg));
  ProbeFn probe = [&](double tau, const std::vector<double>& warm) {
    solver.set_smax(s.v_max * tau);
    return solver.solve(warm, cfg.tol_feas, cfg.inner_max_iters);
  };
  auto res = bisect_tau(tau_lo, anchor_tau, cfg.tau_cap_factor * tau_lo, cfg.bisect_tol,
                        anchor_prog, probe);
  if (!res) throw SolverError("subproblem infeasible up to tau cap");

  Trajectory t = slm_traj_from_progress(s, a, g, res->x, res->tau);
  const double tau_exact = std::max(peak_displacement(t) / s.v_max, 0.0);
  t.tau = tau_exact;
  return {std::move(t), tau_exact, res->probes};
}

}  // namespace

Solution slm_refine(const Scenario& s, const Assignment& a, const ScaConfig& cfg) {
  const Trajectory straight = straight_line_trajectory(s, a);
  const FeasibilityReport report = check_inter_ma_distance(straight, s.d_min);
  Solution sol;
  sol.scheme = Scheme::slm;
  sol.assignment = a;
  if (report.feasible) {
    sol.trajectory = straight;
    sol.delay = lower_bound_delay(s, a).delay_lb;
    sol.stage1_feasible = true;
    sol.objective_trace = {sol.delay};
    sol.iters = {{1, sol.delay, 0.0, 0}};
    return sol;
  }

  const SlmGeometry g = slm_geometry(s, a);
  std::vector<double> anchor_prog = slm_anchor_schedule(s, a, g, report);
  double anchor_tau =
      std::max(straight.tau, schedule_peak_step(s, g, anchor_prog) / s.v_max);
  if (std::getenv("MATRAJ_SLM_DEBUG")) {
    std::fprintf(stderr,
                 "[slm] anchor sep=%.4f peak=%.4f step=%.4f tau0=%.5f anchor_tau=%.5f\n",
                 schedule_min_separation(s, g, anchor_prog),
                 schedule_peak_step(s, g, anchor_prog), a.bottleneck / s.n_slots,
                 straight.tau, anchor_tau);
  }
  double prev = kInf;
  for (int l = 1; l <= cfg.max_outer_iters; ++l) {
    SubOutcome sub = solve_progress_subproblem(s, a, g, anchor_prog, anchor_tau, cfg);
    const double tau2 = static_cast<double>(s.n_slots) * sub.tau;
    sol.objective_trace.push_back(tau2);
    sol.iters.push_back({l, tau2, true_violation(s, sub.traj), sub.probes});
    // re-anchor in progress space at the accepted trajectory
    for (int n = 1; n < s.n_slots; ++n)
      for (int m = 0; m < s.m_count; ++m) {
        const double prog = dot(sub.traj.positions[m][n] - g.origin[m], g.dir[m]);
        anchor_prog[(n - 1) * s.m_count + m] = std::clamp(prog, 0.0, g.len[m]);
      }
    anchor_tau = sub.tau;
    sol.trajectory = std::move(sub.traj);
    if (std::abs(prev - tau2) <= cfg.epsilon_star) break;
    prev = tau2;
  }
  sol.delay = sol.objective_trace.back();
  audit_or_throw(s, a, sol.trajectory);
  return sol;
}

Solution slm_solve(const Scenario& s, const ScaConfig& cfg) {
  return slm_refine(s, bottleneck_assignment(distance_matrix(s)), cfg);
}

}  // namespace matraj
