#include "json.hpp"
#include "locomanip/planner.hpp"

namespace locomanip {

using nlohmann::json;

std::string save_plan(const Plan& plan, const GridMap& map, const PlanConfig& config) {
  json j;
  j["n_grid"] = plan.n_grid;
  j["horizon"] = plan.horizon();
  j["positions"] = json::array();
  for (Cell c : plan.positions) j["positions"].push_back({c.x, c.y});
  j["displacements"] = json::array();
  for (Cell d : plan.displacements) j["displacements"].push_back({d.x, d.y});
  j["modes"] = json::array();
  j["mode_labels"] = json::array();
  for (int t = 0; t < plan.horizon(); ++t) {
    const auto m = plan.mode_at(t);
    j["modes"].push_back(m ? std::string(mode_name(*m)) : std::string("invalid"));
    j["mode_labels"].push_back(m ? static_cast<int>(*m) : 0);
  }
  j["visited"] = json::array();
  for (int i = 0; i < plan.n_grid; ++i) {
    for (int k = 0; k < plan.n_grid; ++k) {
      if (plan.is_visited({i, k})) j["visited"].push_back({i, k});
    }
  }
  j["objective"] = objective_value(plan, config, map.goal);

  const auto report = validate_plan(plan, map, config);
  json status = json::object();
  for (int f = 0; f < kNumFamilies; ++f) {
    const auto fam = static_cast<ConstraintFamily>(f);
    status[std::string(family_name(fam))] = report.count(fam);
  }
  j["validation"] = status;
  j["valid"] = report.ok();
  return j.dump(2);
}

Plan load_plan(std::string_view document) {
  json j;
  try {
    j = json::parse(document);
    Plan plan;
    plan.n_grid = j.at("n_grid").get<int>();
    plan.visited.assign(static_cast<std::size_t>(plan.n_grid) * plan.n_grid, 0);
    for (const auto& p : j.at("positions")) plan.positions.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    for (const auto& d : j.at("displacements")) {
      plan.displacements.push_back({d.at(0).get<int>(), d.at(1).get<int>()});
    }
    for (const auto& m : j.at("modes")) plan.modes.push_back(one_hot(parse_mode(m.get<std::string>())));
    for (const auto& v : j.at("visited")) {
      const int x = v.at(0).get<int>(), y = v.at(1).get<int>();
      if (x < 0 || y < 0 || x >= plan.n_grid || y >= plan.n_grid) throw ParseError("visited cell outside grid");
      plan.visited[x * plan.n_grid + y] = 1;
    }
    return plan;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed plan document: ") + e.what());
  }
}

}  // namespace locomanip
