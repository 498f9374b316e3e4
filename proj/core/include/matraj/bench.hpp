#pragma once

#include <cstdint>
#include <vector>

#include "matraj/sca.hpp"

namespace matraj {

struct GenParams {
  int m_count = 6;
  Region region{{0.0, 0.0}, {4.0, 4.0}};
  double d_min = 0.5;
  double v_max = 1.0;
  int n_slots = 100;
  int max_attempts = 10000;
};

/// Aggregated delay statistics for one (speed, scheme) cell of the sweep.
struct SweepRow {
  double v_max = 0.0;
  Scheme scheme = Scheme::proposed;
  double mean_delay = 0.0;  // ms, over successful trials
  double std_delay = 0.0;   // sample standard deviation
  int trials = 0;           // successful trials
  int failures = 0;         // trials where the scheme's solver gave up
  double mean_gap_to_lb = 0.0;  // mean of (delay - lb) / lb
};

/// Rejection-samples m_count initial and destination points uniformly in
/// the region, keeping pairwise separations at least d_min within each
/// set. Deterministic per seed. Throws SolverError("generation stalled")
/// when a point exceeds max_attempts rejections.
Scenario generate_scenario(const GenParams& p, uint64_t seed);

/// Paired speed sweep: per trial one scenario (seed = base_seed + trial,
/// positions independent of speed), solved by all schemes at every speed.
/// Scheme failures are counted and excluded from that scheme's statistics.
/// Trials may run on several threads (MATRAJ_THREADS overrides the count);
/// results are merged in trial order, so output is thread-count invariant.
std::vector<SweepRow> sweep_speed(const GenParams& p, const std::vector<double>& speeds,
                                  int trials, const ScaConfig& cfg, uint64_t base_seed);

/// Lower bound on the effective achievable rate once estimation and
/// movement overheads are taken out of the block: (1 - (t1+t2)/ttot) * rate.
double effective_rate_bound(double tau_1, double tau_2, double tau_tot, double rate_hat);

struct CaseStudy {
  Solution proposed;
  Solution slm;
  Solution rma;
  std::vector<std::vector<double>> speeds_proposed;  // [m][n]
  std::vector<std::vector<double>> speeds_slm;
  std::vector<std::vector<double>> speeds_rma;
};

/// Solves all three schemes on the same instance and attaches the per-slot
/// speed series of each antenna.
CaseStudy case_study(const Scenario& s, const ScaConfig& cfg, uint64_t rma_seed);

}  // namespace matraj
