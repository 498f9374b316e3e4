#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matraj/bench.hpp"
#include "matraj/io.hpp"
#include "matraj/svg.hpp"

namespace {

using namespace matraj;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitSolverFailure = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Region parse_region(const std::string& spec) {
  const auto sep = spec.find('x');
  if (sep == std::string::npos) throw InputError("region must look like 4x4");
  try {
    const double w = std::stod(spec.substr(0, sep));
    const double h = std::stod(spec.substr(sep + 1));
    if (!(w > 0.0) || !(h > 0.0)) throw InputError("region sides must be positive");
    return {{0.0, 0.0}, {w, h}};
  } catch (const std::invalid_argument&) {
    throw InputError("region must look like 4x4");
  }
}

Scenario load_scenario(const std::string& path) {
  Scenario s = scenario_from_json(read_file(path));
  const ValidationResult v = validate_scenario(s);
  if (!v.ok) {
    std::string msg = "invalid scenario " + path + ":";
    for (const auto& issue : v.issues) msg += "\n  " + issue;
    throw InputError(msg);
  }
  return s;
}

void add_config_options(CLI::App* cmd, ScaConfig& cfg) {
  cmd->add_option("--epsilon-star", cfg.epsilon_star, "outer stop threshold (ms)");
  cmd->add_option("--max-outer-iters", cfg.max_outer_iters, "outer iteration cap");
  cmd->add_option("--tol-feas", cfg.tol_feas, "inner feasibility tolerance");
  cmd->add_option("--bisect-tol", cfg.bisect_tol, "relative tau bracket width");
  cmd->add_option("--inner-max-iters", cfg.inner_max_iters, "inner iteration cap");
  cmd->add_option("--anchor-jitter", cfg.anchor_jitter, "coincident-anchor separation");
  cmd->add_option("--tau-cap-factor", cfg.tau_cap_factor, "infeasibility cap factor");
}

void print_solution_summary(const Solution& sol) {
  std::printf("scheme=%s delay_ms=%.6f iters=%zu stage1_feasible=%s\n",
              to_string(sol.scheme).c_str(), sol.delay, sol.objective_trace.size(),
              sol.stage1_feasible ? "true" : "false");
}

Solution run_scheme(const Scenario& s, Scheme scheme, const ScaConfig& cfg,
                    uint64_t seed) {
  switch (scheme) {
    case Scheme::proposed: return two_stage_solve(s, cfg);
    case Scheme::slm: return slm_solve(s, cfg);
    case Scheme::rma: return rma_solve(s, cfg, seed);
    case Scheme::lower_bound: return lower_bound_solution(s);
  }
  throw InputError("unknown scheme");
}

int run(int argc, char** argv) {
  CLI::App app{"Minimum-delay collision-free trajectory planning for movable antennas"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate a random scenario file");
  GenParams gp;
  std::string gen_region = "4x4";
  uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--m", gp.m_count, "number of antennas");
  gen->add_option("--dmin", gp.d_min, "minimum separation (lambda)");
  gen->add_option("--vmax", gp.v_max, "maximum speed (lambda/ms)");
  gen->add_option("--n", gp.n_slots, "number of time slots");
  gen->add_option("--region", gen_region, "region WxH with corner at the origin");
  gen->add_option("--max-attempts", gp.max_attempts, "rejection cap per point");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output scenario JSON")->required();

  // --- solve ---
  auto* solve = app.add_subcommand("solve", "solve one scenario with one scheme");
  std::string solve_scenario, solve_scheme = "proposed", solve_out, solve_trace;
  uint64_t solve_seed = 0;
  ScaConfig solve_cfg;
  solve->add_option("--scenario", solve_scenario, "scenario JSON")->required();
  solve->add_option("--scheme", solve_scheme, "proposed|slm|rma|lower_bound");
  solve->add_option("--seed", solve_seed, "association seed (rma)");
  solve->add_option("--out", solve_out, "output solution JSON");
  solve->add_option("--trace", solve_trace, "per-iteration trace CSV");
  add_config_options(solve, solve_cfg);

  // --- bench ---
  auto* bench = app.add_subcommand("bench", "speed sweep over random scenarios");
  GenParams bp;
  std::string bench_region = "4x4";
  std::vector<double> bench_speeds{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  int bench_trials = 100;
  uint64_t bench_seed = 0;
  std::string bench_out;
  ScaConfig bench_cfg;
  bench->add_option("--m", bp.m_count, "number of antennas");
  bench->add_option("--dmin", bp.d_min, "minimum separation (lambda)");
  bench->add_option("--n", bp.n_slots, "number of time slots");
  bench->add_option("--region", bench_region, "region WxH with corner at the origin");
  bench->add_option("--speeds", bench_speeds, "speeds to sweep (lambda/ms)")
      ->delimiter(',');
  bench->add_option("--trials", bench_trials, "paired trials per speed");
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_option("--out", bench_out, "output sweep CSV")->required();
  add_config_options(bench, bench_cfg);

  // --- case ---
  auto* case_cmd = app.add_subcommand("case", "solve all schemes on one scenario");
  std::string case_scenario, case_dir;
  uint64_t case_seed = 0;
  ScaConfig case_cfg;
  case_cmd->add_option("--scenario", case_scenario, "scenario JSON")->required();
  case_cmd->add_option("--seed", case_seed, "rma association seed");
  case_cmd->add_option("--out-dir", case_dir, "output directory")->required();
  add_config_options(case_cmd, case_cfg);

  // --- plot ---
  auto* plot = app.add_subcommand("plot", "emit an SVG figure");
  std::string plot_kind, plot_solution, plot_scenario, plot_sweep, plot_out;
  plot->add_option("--kind", plot_kind, "trajectory|speeds|sweep")->required();
  plot->add_option("--solution", plot_solution, "solution JSON (trajectory, speeds)");
  plot->add_option("--scenario", plot_scenario, "scenario JSON (trajectory, speeds)");
  plot->add_option("--sweep", plot_sweep, "sweep CSV (sweep)");
  plot->add_option("--out", plot_out, "output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  if (gen->parsed()) {
    gp.region = parse_region(gen_region);
    const Scenario s = generate_scenario(gp, gen_seed);
    atomic_write_file(gen_out, scenario_to_json(s));
    std::printf("gen m=%d region=%s d_min=%g n_slots=%d seed=%llu out=%s\n", gp.m_count,
                gen_region.c_str(), gp.d_min, gp.n_slots,
                static_cast<unsigned long long>(gen_seed), gen_out.c_str());
    return kExitOk;
  }

  if (solve->parsed()) {
    const auto scheme = scheme_from_string(solve_scheme);
    if (!scheme) throw InputError("unknown scheme: " + solve_scheme);
    const Scenario s = load_scenario(solve_scenario);
    Solution sol = run_scheme(s, *scheme, solve_cfg, solve_seed);
    if (!solve_out.empty()) atomic_write_file(solve_out, solution_to_json(sol, solve_cfg));
    if (!solve_trace.empty()) atomic_write_file(solve_trace, trace_to_csv(sol));
    print_solution_summary(sol);
    return kExitOk;
  }

  if (bench->parsed()) {
    bp.region = parse_region(bench_region);
    const auto rows = sweep_speed(bp, bench_speeds, bench_trials, bench_cfg, bench_seed);
    atomic_write_file(bench_out, sweep_to_csv(rows));
    std::printf("bench speeds=%zu trials=%d seed=%llu out=%s\n", bench_speeds.size(),
                bench_trials, static_cast<unsigned long long>(bench_seed),
                bench_out.c_str());
    return kExitOk;
  }

  if (case_cmd->parsed()) {
    const Scenario s = load_scenario(case_scenario);
    const CaseStudy cs = case_study(s, case_cfg, case_seed);
    namespace fs = std::filesystem;
    fs::create_directories(case_dir);
    auto path = [&](const std::string& name) { return (fs::path(case_dir) / name).string(); };
    atomic_write_file(path("proposed.json"), solution_to_json(cs.proposed, case_cfg));
    atomic_write_file(path("slm.json"), solution_to_json(cs.slm, case_cfg));
    atomic_write_file(path("rma.json"), solution_to_json(cs.rma, case_cfg));
    atomic_write_file(path("speeds_proposed.csv"), speeds_to_csv(cs.speeds_proposed));
    atomic_write_file(path("speeds_slm.csv"), speeds_to_csv(cs.speeds_slm));
    atomic_write_file(path("speeds_rma.csv"), speeds_to_csv(cs.speeds_rma));
    print_solution_summary(cs.proposed);
    print_solution_summary(cs.slm);
    print_solution_summary(cs.rma);
    return kExitOk;
  }

  if (plot->parsed()) {
    std::string svg;
    if (plot_kind == "trajectory" || plot_kind == "speeds") {
      if (plot_solution.empty() || plot_scenario.empty())
        throw InputError("plot --kind " + plot_kind + " needs --solution and --scenario");
      const Scenario s = load_scenario(plot_scenario);
      const Solution sol = solution_from_json(read_file(plot_solution));
      if (plot_kind == "trajectory") {
        svg = trajectory_svg(s, sol.trajectory, sol.assignment);
      } else {
        std::vector<std::vector<double>> speeds;
        if (sol.trajectory.tau > 0.0)
          speeds = trajectory_speeds(sol.trajectory);
        else
          speeds.assign(sol.trajectory.m_count(),
                        std::vector<double>(sol.trajectory.n_slots(), 0.0));
        svg = speeds_svg(speeds, s.v_max);
      }
    } else if (plot_kind == "sweep") {
      if (plot_sweep.empty()) throw InputError("plot --kind sweep needs --sweep");
      svg = sweep_svg(sweep_from_csv(read_file(plot_sweep)));
    } else {
      throw InputError("unknown plot kind: " + plot_kind);
    }
    atomic_write_file(plot_out, svg);
    std::printf("plot kind=%s out=%s\n", plot_kind.c_str(), plot_out.c_str());
    return kExitOk;
  }

  return kExitBadInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  }
}
