#include "matraj/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace matraj {

namespace {

using nlohmann::json;

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

Point2 point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("point must be [x,y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json config_json(const ScaConfig& cfg) {
  return {
      {"epsilon_star", cfg.epsilon_star},
      {"max_outer_iters", cfg.max_outer_iters},
      {"tol_feas", cfg.tol_feas},
      {"bisect_tol", cfg.bisect_tol},
      {"inner_max_iters", cfg.inner_max_iters},
      {"anchor_jitter", cfg.anchor_jitter},
      {"tau_cap_factor", cfg.tau_cap_factor},
  };
}

ScaConfig config_from(const json& j) {
  ScaConfig cfg;
  cfg.epsilon_star = j.value("epsilon_star", cfg.epsilon_star);
  cfg.max_outer_iters = j.value("max_outer_iters", cfg.max_outer_iters);
  cfg.tol_feas = j.value("tol_feas", cfg.tol_feas);
  cfg.bisect_tol = j.value("bisect_tol", cfg.bisect_tol);
  cfg.inner_max_iters = j.value("inner_max_iters", cfg.inner_max_iters);
  cfg.anchor_jitter = j.value("anchor_jitter", cfg.anchor_jitter);
  cfg.tau_cap_factor = j.value("tau_cap_factor", cfg.tau_cap_factor);
  return cfg;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["m"] = s.m_count;
  j["region"] = {{"lo", point_json(s.region.lo)}, {"hi", point_json(s.region.hi)}};
  j["d_min"] = s.d_min;
  j["v_max"] = s.v_max;
  j["n_slots"] = s.n_slots;
  j["initial"] = json::array();
  j["dest"] = json::array();
  for (const Point2& p : s.initial) j["initial"].push_back(point_json(p));
  for (const Point2& p : s.dest) j["dest"].push_back(point_json(p));
  j["unit_note"] = "lengths in wavelengths, time in ms";
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  const json j = json::parse(text);
  Scenario s;
  s.m_count = j.at("m").get<int>();
  s.region.lo = point_from(j.at("region").at("lo"));
  s.region.hi = point_from(j.at("region").at("hi"));
  s.d_min = j.at("d_min").get<double>();
  s.v_max = j.at("v_max").get<double>();
  s.n_slots = j.at("n_slots").get<int>();
  for (const json& p : j.at("initial")) s.initial.push_back(point_from(p));
  for (const json& p : j.at("dest")) s.dest.push_back(point_from(p));
  return s;
}

std::string solution_to_json(const Solution& sol, const ScaConfig& cfg) {
  json j;
  j["scheme"] = to_string(sol.scheme);
  j["delay_ms"] = sol.delay;
  j["tau_ms"] = sol.trajectory.tau;
  j["assignment"] = sol.assignment.dest_of;
  j["stage1_feasible"] = sol.stage1_feasible;
  j["objective_trace"] = sol.objective_trace;
  json positions = json::array();
  for (const auto& path : sol.trajectory.positions) {
    json row = json::array();
    for (const Point2& p : path) row.push_back(point_json(p));
    positions.push_back(std::move(row));
  }
  j["positions"] = std::move(positions);
  if (sol.seed)
    j["seed"] = *sol.seed;
  else
    j["seed"] = nullptr;
  j["config"] = config_json(cfg);
  return j.dump(2) + "\n";
}

Solution solution_from_json(const std::string& text, ScaConfig* cfg_out) {
  const json j = json::parse(text);
  Solution sol;
  const auto scheme = scheme_from_string(j.at("scheme").get<std::string>());
  if (!scheme) throw std::invalid_argument("unknown scheme tag");
  sol.scheme = *scheme;
  sol.delay = j.at("delay_ms").get<double>();
  sol.trajectory.tau = j.at("tau_ms").get<double>();
  sol.assignment.dest_of = j.at("assignment").get<std::vector<int>>();
  sol.stage1_feasible = j.at("stage1_feasible").get<bool>();
  sol.objective_trace = j.at("objective_trace").get<std::vector<double>>();
  for (const json& row : j.at("positions")) {
    std::vector<Point2> path;
    for (const json& p : row) path.push_back(point_from(p));
    sol.trajectory.positions.push_back(std::move(path));
  }
  if (j.contains("seed") && !j.at("seed").is_null())
    sol.seed = j.at("seed").get<uint64_t>();
  if (cfg_out && j.contains("config")) *cfg_out = config_from(j.at("config"));
  return sol;
}

std::string trace_to_csv(const Solution& sol) {
  std::string out = "iter,tau2_ms,max_true_violation,bisect_steps\n";
  for (const IterRecord& r : sol.iters) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d,%s,%s,%d\n", r.iter, num17(r.tau2_ms).c_str(),
                  num17(r.max_true_violation).c_str(), r.bisect_steps);
    out += buf;
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "v_max,scheme,mean_delay_ms,std_delay_ms,trials,failures,mean_gap_to_lb\n";
  for (const SweepRow& r : rows) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%s,%d,%d,%s\n", num17(r.v_max).c_str(),
                  to_string(r.scheme).c_str(), num17(r.mean_delay).c_str(),
                  num17(r.std_delay).c_str(), r.trials, r.failures,
                  num17(r.mean_gap_to_lb).c_str());
    out += buf;
  }
  return out;
}

std::vector<SweepRow> sweep_from_csv(const std::string& text) {
  std::vector<SweepRow> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 7) throw std::invalid_argument("malformed sweep csv row");
    SweepRow r;
    r.v_max = std::stod(fields[0]);
    const auto scheme = scheme_from_string(fields[1]);
    if (!scheme) throw std::invalid_argument("unknown scheme tag in sweep csv");
    r.scheme = *scheme;
    r.mean_delay = std::stod(fields[2]);
    r.std_delay = std::stod(fields[3]);
    r.trials = std::stoi(fields[4]);
    r.failures = std::stoi(fields[5]);
    r.mean_gap_to_lb = std::stod(fields[6]);
    rows.push_back(r);
  }
  return rows;
}

std::string speeds_to_csv(const std::vector<std::vector<double>>& speeds) {
  std::string out = "slot";
  for (size_t m = 0; m < speeds.size(); ++m) out += "," + ma_label(static_cast<int>(m));
  out += "\n";
  const size_t n_slots = speeds.empty() ? 0 : speeds[0].size();
  for (size_t n = 0; n < n_slots; ++n) {
    out += std::to_string(n);
    for (const auto& row : speeds) out += "," + num17(row[n]);
    out += "\n";
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace matraj
