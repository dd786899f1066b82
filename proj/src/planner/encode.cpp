#include <algorithm>
#include <cmath>

#include "locomanip/planner.hpp"

namespace locomanip {

void validate_config(const PlanConfig& config, const GridMap& map) {
  if (config.horizon < 1) throw InvalidConfig("horizon T must be at least 1");
  if (!(config.w_exp >= 0.0) || !(config.w_goal >= 0.0)) {
    throw InvalidConfig("objective weights must be nonnegative");
  }
  for (Mode m : kAllModes) {
    if (!(config.penalty(m) >= 0.0)) {
      throw InvalidConfig("mode penalty for " + std::string(mode_name(m)) + " must be nonnegative");
    }
  }
  const double n = map.n_grid;
  if (!(config.big_m > n * n)) throw InvalidConfig("big-M must exceed n_grid^2");
  if (!(config.epsilon >= 0.0)) throw InvalidConfig("epsilon must be nonnegative");
  if (config.enabled_modes.empty()) throw InvalidConfig("at least one mode must be enabled");
}

OneHot one_hot(Mode m) {
  OneHot h{0, 0, 0};
  h[mode_index(m)] = 1;
  return h;
}

int Plan::visited_count() const {
  return static_cast<int>(std::count(visited.begin(), visited.end(), std::uint8_t{1}));
}

std::optional<Mode> Plan::mode_at(int t) const {
  const auto& h = modes[t];
  if (h[0] + h[1] + h[2] != 1) return std::nullopt;
  for (int k = 0; k < 3; ++k) {
    if (h[k] == 1) return mode_from_index(k);
  }
  return std::nullopt;
}

Plan make_plan(int n_grid, Cell start, std::span<const Cell> steps, std::span<const Mode> modes) {
  Plan plan;
  plan.n_grid = n_grid;
  plan.visited.assign(static_cast<std::size_t>(n_grid) * n_grid, 0);
  plan.positions.push_back(start);
  Cell p = start;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    p = p + steps[t];
    plan.positions.push_back(p);
    plan.displacements.push_back(steps[t]);
    plan.modes.push_back(one_hot(modes[t]));
  }
  for (Cell c : plan.positions) {
    if (0 <= c.x && c.x < n_grid && 0 <= c.y && c.y < n_grid) plan.visited[c.x * n_grid + c.y] = 1;
  }
  return plan;
}

std::vector<Cell> step_set(Mode m, bool allow_standing) {
  std::vector<int> strides;
  switch (m) {
    case Mode::kBiped:
      strides = {1};
      break;
    case Mode::kCrawl:
      strides = {1, 2};
      break;
    case Mode::kRoll:
      strides = {3};
      break;
  }
  std::vector<Cell> out;
  if (allow_standing && m != Mode::kRoll) out.push_back({0, 0});
  for (int s : strides) {
    out.push_back({s, 0});
    out.push_back({-s, 0});
    out.push_back({0, s});
    out.push_back({0, -s});
  }
  return out;
}

ModeSet ProblemInstance::legal_modes(Cell from, Cell d) const {
  ModeSet legal = ModeSet::none();
  const ModeSet terrain = map.terrain_modes(from);
  for (Mode m : kAllModes) {
    if (!terrain.contains(m)) continue;
    const auto& set = steps(m);
    if (std::find(set.begin(), set.end(), d) != set.end()) legal = legal | ModeSet::only(m);
  }
  return legal;
}

ProblemInstance encode(const GridMap& map, const PlanConfig& config) {
  validate_map(map);
  validate_config(config, map);
  ProblemInstance inst{map, config, {}};
  for (Mode m : kAllModes) {
    if (config.enabled_modes.contains(m)) inst.step_sets[mode_index(m)] = step_set(m, config.allow_standing);
  }

  bool any_move = false;
  for (Mode m : kAllModes) {
    if (!map.terrain_modes(map.start).contains(m)) continue;
    for (Cell d : inst.steps(m)) {
      const Cell to = map.start + d;
      if (map.in_bounds(to) && !map.blocked(to)) any_move = true;
    }
  }
  if (!any_move) {
    throw InfeasibleEncoding("no displacement set offers a legal first move from the start cell");
  }
  return inst;
}

std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kFeasible:
      return "feasible";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnknown:
      return "unknown";
  }
  return "unknown";
}

}  // namespace locomanip
