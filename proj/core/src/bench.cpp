#include "matraj/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <thread>

#include "matraj/rng.hpp"

namespace matraj {

namespace {

std::vector<Point2> sample_point_set(const GenParams& p, SplitRng& rng) {
  std::vector<Point2> pts;
  pts.reserve(p.m_count);
  while (static_cast<int>(pts.size()) < p.m_count) {
    bool placed = false;
    for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
      const Point2 cand{rng.uniform(p.region.lo.x, p.region.hi.x),
                        rng.uniform(p.region.lo.y, p.region.hi.y)};
      bool clear = true;
      for (const Point2& q : pts) {
        if (distance(cand, q) < p.d_min) {
          clear = false;
          break;
        }
      }
      if (clear) {
        pts.push_back(cand);
        placed = true;
        break;
      }
    }
    if (!placed) throw SolverError("generation stalled");
  }
  return pts;
}

}  // namespace

Scenario generate_scenario(const GenParams& p, uint64_t seed) {
  if (p.m_count < 1) throw std::invalid_argument("m_count must be at least 1");
  if (p.n_slots < 1) throw std::invalid_argument("n_slots must be at least 1");
  if (!(p.v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
  const double area = p.region.width() * p.region.height();
  const double packing = p.m_count * std::numbers::pi * 0.25 * p.d_min * p.d_min;
  if (!(packing < area))
    throw std::invalid_argument("region cannot admit m_count points at d_min");

  SplitRng rng(seed);
  Scenario s;
  s.m_count = p.m_count;
  s.region = p.region;
  s.d_min = p.d_min;
  s.v_max = p.v_max;
  s.n_slots = p.n_slots;
  s.initial = sample_point_set(p, rng);
  s.dest = sample_point_set(p, rng);
  return s;
}

double effective_rate_bound(double tau_1, double tau_2, double tau_tot, double rate_hat) {
  if (!(tau_tot > 0.0)) throw std::invalid_argument("tau_tot must be positive");
  if (tau_1 < 0.0 || tau_2 < 0.0) throw std::invalid_argument("negative overhead");
  if (rate_hat < 0.0) throw std::invalid_argument("negative rate");
  if (tau_1 + tau_2 > tau_tot) throw std::invalid_argument("overheads exceed block");
  return (1.0 - (tau_1 + tau_2) / tau_tot) * rate_hat;
}

namespace {

struct TrialCell {
  double lower_bound = 0.0;
  std::optional<double> proposed;
  std::optional<double> slm;
  std::optional<double> rma;
};

int sweep_thread_count(int trials) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MATRAJ_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) n = v;
  }
  return std::clamp(n, 1, std::max(trials, 1));
}

void aggregate_rows(std::vector<SweepRow>& rows, double speed, Scheme scheme,
                    const std::vector<double>& delays, const std::vector<double>& lbs,
                    int failures) {
  SweepRow row;
  row.v_max = speed;
  row.scheme = scheme;
  row.failures = failures;
  row.trials = static_cast<int>(delays.size());
  if (!delays.empty()) {
    double sum = 0.0;
    for (double d : delays) sum += d;
    row.mean_delay = sum / delays.size();
    if (delays.size() >= 2) {
      double ss = 0.0;
      for (double d : delays) ss += (d - row.mean_delay) * (d - row.mean_delay);
      row.std_delay = std::sqrt(ss / (delays.size() - 1));
    }
    double gap = 0.0;
    for (size_t i = 0; i < delays.size(); ++i)
      gap += lbs[i] > 0.0 ? (delays[i] - lbs[i]) / lbs[i] : 0.0;
    row.mean_gap_to_lb = gap / delays.size();
  }
  rows.push_back(row);
}

}  // namespace

std::vector<SweepRow> sweep_speed(const GenParams& p, const std::vector<double>& speeds,
                                  int trials, const ScaConfig& cfg, uint64_t base_seed) {
  if (speeds.empty()) throw std::invalid_argument("speeds must be non-empty");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");

  const int n_speeds = static_cast<int>(speeds.size());
  std::vector<std::vector<TrialCell>> cells(trials,
                                            std::vector<TrialCell>(n_speeds));

  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int trial = next.fetch_add(1);
      if (trial >= trials) return;
      const uint64_t scenario_seed = base_seed + static_cast<uint64_t>(trial);
      const uint64_t rma_seed = derive_seed(base_seed, trial, 1);
      for (int si = 0; si < n_speeds; ++si) {
        GenParams params = p;
        params.v_max = speeds[si];
        Scenario s = generate_scenario(params, scenario_seed);
        TrialCell& cell = cells[trial][si];
        cell.lower_bound =
            lower_bound_delay(s, bottleneck_assignment(distance_matrix(s))).delay_lb;
        try {
          cell.proposed = two_stage_solve(s, cfg).delay;
        } catch (const SolverError&) {
        }
        try {
          cell.slm = slm_solve(s, cfg).delay;
        } catch (const SolverError&) {
        }
        try {
          cell.rma = rma_solve(s, cfg, rma_seed).delay;
        } catch (const SolverError&) {
        }
      }
    }
  };

  const int n_threads = sweep_thread_count(trials);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // merge in trial order so output does not depend on the thread count
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<size_t>(n_speeds) * 4);
  for (int si = 0; si < n_speeds; ++si) {
    std::vector<double> lb_all, lb_for;
    std::vector<double> delays;
    lb_all.reserve(trials);
    for (int t = 0; t < trials; ++t) lb_all.push_back(cells[t][si].lower_bound);
    aggregate_rows(rows, speeds[si], Scheme::lower_bound, lb_all, lb_all, 0);

    auto scheme_rows = [&](Scheme scheme, auto member) {
      delays.clear();
      lb_for.clear();
      int failures = 0;
      for (int t = 0; t < trials; ++t) {
        const TrialCell& cell = cells[t][si];
        if (cell.*member) {
          delays.push_back(*(cell.*member));
          lb_for.push_back(cell.lower_bound);
        } else {
          ++failures;
        }
      }
      aggregate_rows(rows, speeds[si], scheme, delays, lb_for, failures);
    };
    scheme_rows(Scheme::proposed, &TrialCell::proposed);
    scheme_rows(Scheme::slm, &TrialCell::slm);
    scheme_rows(Scheme::rma, &TrialCell::rma);
  }
  return rows;
}

namespace {

std::vector<std::vector<double>> safe_speeds(const Trajectory& t) {
  if (t.tau > 0.0) return trajectory_speeds(t);
  return std::vector<std::vector<double>>(t.m_count(),
                                          std::vector<double>(t.n_slots(), 0.0));
}

}  // namespace

CaseStudy case_study(const Scenario& s, const ScaConfig& cfg, uint64_t rma_seed) {
  CaseStudy out;
  out.proposed = two_stage_solve(s, cfg);
  out.slm = slm_solve(s, cfg);
  out.rma = rma_solve(s, cfg, rma_seed);
  out.speeds_proposed = safe_speeds(out.proposed.trajectory);
  out.speeds_slm = safe_speeds(out.slm.trajectory);
  out.speeds_rma = safe_speeds(out.rma.trajectory);
  return out;
}

}  // namespace matraj
