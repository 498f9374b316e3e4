#pragma once

#include <string>
#include <vector>

#include "matraj/bench.hpp"
#include "matraj/sca.hpp"

namespace matraj {

// JSON schemas are stable: scenario files use the keys m, region{lo,hi},
// d_min, v_max, n_slots, initial, dest, unit_note; solution files use
// scheme, delay_ms, tau_ms, assignment, stage1_feasible, objective_trace,
// positions, seed, config.

std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

std::string solution_to_json(const Solution& sol, const ScaConfig& cfg);
/// Reads a solution file; fills cfg_out from its "config" object when given.
Solution solution_from_json(const std::string& text, ScaConfig* cfg_out = nullptr);

/// Columns: iter,tau2_ms,max_true_violation,bisect_steps.
std::string trace_to_csv(const Solution& sol);

/// Columns: v_max,scheme,mean_delay_ms,std_delay_ms,trials,failures,mean_gap_to_lb.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_from_csv(const std::string& text);

/// Wide per-antenna speed table; columns slot,a,b,...
std::string speeds_to_csv(const std::vector<std::vector<double>>& speeds);

std::string read_file(const std::string& path);
/// Writes via a temporary file in the same directory plus rename.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace matraj
