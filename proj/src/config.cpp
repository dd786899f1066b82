#include "locomanip/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace locomanip {

using nlohmann::json;

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_per_mode(const json& j, std::array<double, 3>& out) {
  for (Mode m : kAllModes) {
    const std::string name(mode_name(m));
    if (j.contains(name)) out[mode_index(m)] = j.at(name).get<double>();
  }
}

json per_mode(const std::array<double, 3>& v) {
  json j;
  for (Mode m : kAllModes) j[std::string(mode_name(m))] = v[mode_index(m)];
  return j;
}

void read_gains(const json& j, AdmittanceGains& g) {
  maybe(j, "m_d", g.m_d);
  maybe(j, "d_d", g.d_d);
  maybe(j, "k_d", g.k_d);
  maybe(j, "k_f", g.k_f);
  maybe(j, "k_ix", g.k_ix);
  maybe(j, "k_if", g.k_if);
}

json gains_json(const AdmittanceGains& g) {
  return {{"m_d", g.m_d}, {"d_d", g.d_d}, {"k_d", g.k_d}, {"k_f", g.k_f}, {"k_ix", g.k_ix}, {"k_if", g.k_if}};
}

void read_bounds(const json& j, AxisBounds& b) {
  maybe(j, "x_max", b.x_max);
  maybe(j, "v_max", b.v_max);
  maybe(j, "w_max", b.w_max);
  maybe(j, "accel_max", b.accel_max);
  maybe(j, "horizon_steps", b.horizon_steps);
  maybe(j, "dt", b.dt);
}

json bounds_json(const AxisBounds& b) {
  return {{"x_max", b.x_max}, {"v_max", b.v_max}, {"w_max", b.w_max},
          {"accel_max", b.accel_max}, {"horizon_steps", b.horizon_steps}, {"dt", b.dt}};
}

json parse(std::string_view document, const char* what) {
  try {
    json j = json::parse(document);
    if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

}  // namespace

ToolkitConfig load_config(std::string_view document) {
  const json j = parse(document, "config");
  ToolkitConfig c;
  try {
    if (j.contains("plan")) {
      const auto& p = j["plan"];
      maybe(p, "horizon", c.plan.horizon);
      maybe(p, "w_exp", c.plan.w_exp);
      maybe(p, "w_goal", c.plan.w_goal);
      if (p.contains("penalties")) read_per_mode(p["penalties"], c.plan.mode_penalties);
      maybe(p, "big_m", c.plan.big_m);
      maybe(p, "epsilon", c.plan.epsilon);
      maybe(p, "allow_standing", c.plan.allow_standing);
    }
    if (j.contains("solver")) {
      maybe(j["solver"], "node_limit", c.solver.node_limit);
      maybe(j["solver"], "time_limit_s", c.solver.time_limit_s);
    }
    if (j.contains("energy")) {
      const auto& e = j["energy"];
      if (e.contains("per_meter")) read_per_mode(e["per_meter"], c.energy.energy_per_meter);
      if (e.contains("max_velocity")) read_per_mode(e["max_velocity"], c.energy.max_velocity);
    }
    if (j.contains("admittance")) read_gains(j["admittance"], c.gains);
    if (j.contains("bounds")) read_bounds(j["bounds"], c.bounds);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad config value: ") + e.what());
  }
  for (Mode m : kAllModes) {
    if (!(c.energy.energy_per_meter[mode_index(m)] > 0.0) || !(c.energy.max_velocity[mode_index(m)] > 0.0)) {
      throw InvalidConfig("energy model entries must be positive");
    }
  }
  return c;
}

std::string save_config(const ToolkitConfig& c) {
  json j;
  j["plan"] = {{"horizon", c.plan.horizon},
               {"w_exp", c.plan.w_exp},
               {"w_goal", c.plan.w_goal},
               {"penalties", per_mode(c.plan.mode_penalties)},
               {"big_m", c.plan.big_m},
               {"epsilon", c.plan.epsilon},
               {"allow_standing", c.plan.allow_standing}};
  j["solver"] = {{"node_limit", c.solver.node_limit}, {"time_limit_s", c.solver.time_limit_s}};
  j["energy"] = {{"per_meter", per_mode(c.energy.energy_per_meter)},
                 {"max_velocity", per_mode(c.energy.max_velocity)}};
  j["admittance"] = gains_json(c.gains);
  j["bounds"] = bounds_json(c.bounds);
  return j.dump(2);
}

ScenarioFile load_scenario(std::string_view document) {
  const json j = parse(document, "scenario");
  ScenarioFile f;
  Scenario& s = f.scenario;
  try {
    if (j.contains("gains")) read_gains(j["gains"], s.gains);
    if (j.contains("bounds")) read_bounds(j["bounds"], s.bounds);
    if (j.contains("contact")) {
      const auto& c = j["contact"];
      maybe(c, "wall_position", s.contact.wall_position);
      maybe(c, "k_env", s.contact.k_env);
      for (const auto& d : c.value("disturbance", json::array())) {
        s.contact.disturbance.push_back({d.at(0).get<double>(), d.at(1).get<double>()});
      }
    }
    for (const auto& r : j.value("references", json::array())) {
      s.references.push_back({r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()});
    }
    maybe(j, "duration", s.duration);
    if (j.contains("initial")) {
      maybe(j["initial"], "x", s.initial.x);
      maybe(j["initial"], "v", s.initial.v);
    }
    if (j.contains("governor")) {
      const auto& g = j["governor"];
      maybe(g, "enabled", s.governed);
      maybe(g, "exact", s.governor.exact);
      maybe(g, "max_candidates", s.governor.max_candidates);
      if (g.contains("tol") && !g["tol"].is_null()) f.tol = g["tol"].get<double>();
    }
    if (j.contains("moas_grid")) f.grid.counts = j["moas_grid"].get<std::array<int, 5>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad scenario value: ") + e.what());
  }
  s.governor.tol = f.tol.value_or(default_tolerance(f.grid));
  return f;
}

std::string save_scenario(const ScenarioFile& f) {
  const Scenario& s = f.scenario;
  json j;
  j["gains"] = gains_json(s.gains);
  j["bounds"] = bounds_json(s.bounds);
  json dist = json::array();
  for (const auto& d : s.contact.disturbance) dist.push_back({d.t_start, d.value});
  j["contact"] = {{"wall_position", s.contact.wall_position}, {"k_env", s.contact.k_env}, {"disturbance", dist}};
  j["references"] = json::array();
  for (const auto& r : s.references) j["references"].push_back({r.t_start, r.x_ref, r.w_ref});
  j["duration"] = s.duration;
  j["initial"] = {{"x", s.initial.x}, {"v", s.initial.v}};
  j["governor"] = {{"enabled", s.governed},
                   {"exact", s.governor.exact},
                   {"max_candidates", s.governor.max_candidates},
                   {"tol", f.tol ? json(*f.tol) : json(nullptr)}};
  j["moas_grid"] = f.grid.counts;
  return j.dump(2);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace locomanip
