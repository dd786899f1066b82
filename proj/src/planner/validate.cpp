#include <algorithm>
#include <cstdlib>
#include <string>

#include "locomanip/planner.hpp"

namespace locomanip {

std::string_view family_name(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::kStructure:
      return "structure";
    case ConstraintFamily::kVisitLinking:
      return "visit_linking";
    case ConstraintFamily::kPropagation:
      return "propagation";
    case ConstraintFamily::kStepSet:
      return "step_set";
    case ConstraintFamily::kOneHot:
      return "one_hot";
    case ConstraintFamily::kTerrain:
      return "terrain";
    case ConstraintFamily::kObstacle:
      return "obstacle";
    case ConstraintFamily::kBounds:
      return "bounds";
  }
  return "unknown";
}

int ValidationReport::count(ConstraintFamily f) const {
  return static_cast<int>(std::count_if(violations.begin(), violations.end(),
                                        [f](const Violation& v) { return v.family == f; }));
}

std::vector<ConstraintFamily> ValidationReport::families() const {
  std::vector<ConstraintFamily> out;
  for (const auto& v : violations) {
    if (std::find(out.begin(), out.end(), v.family) == out.end()) out.push_back(v.family);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string at(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

// Stride membership written out from the mode definitions rather than taken
// from the encoder, so the validator stays an independent check.
bool stride_allowed(Mode m, Cell d, bool allow_standing) {
  if (d.x == 0 && d.y == 0) return allow_standing && m != Mode::kRoll;
  if (d.x != 0 && d.y != 0) return false;
  const int mag = std::abs(d.x + d.y);
  switch (m) {
    case Mode::kBiped:
      return mag == 1;
    case Mode::kCrawl:
      return mag == 1 || mag == 2;
    case Mode::kRoll:
      return mag == 3;
  }
  return false;
}

}  // namespace

ValidationReport validate_plan(const Plan& plan, const GridMap& map, const PlanConfig& config) {
  ValidationReport report;
  auto flag = [&](ConstraintFamily f, int t, std::string detail) {
    report.violations.push_back({f, t, std::move(detail)});
  };

  const int T = plan.horizon();
  const std::size_t n = static_cast<std::size_t>(map.n_grid);
  bool shape_ok = true;
  if (plan.n_grid != map.n_grid) {
    flag(ConstraintFamily::kStructure, -1, "plan grid size differs from map");
    shape_ok = false;
  }
  if (plan.positions.size() != static_cast<std::size_t>(T) + 1 ||
      plan.modes.size() != static_cast<std::size_t>(T)) {
    flag(ConstraintFamily::kStructure, -1, "expected T+1 positions and T mode assignments");
    shape_ok = false;
  }
  if (plan.visited.size() != n * n) {
    flag(ConstraintFamily::kStructure, -1, "visited matrix has wrong size");
    shape_ok = false;
  }
  if (T != config.horizon) {
    flag(ConstraintFamily::kStructure, -1,
         "plan horizon " + std::to_string(T) + " differs from configured " +
             std::to_string(config.horizon));
  }
  if (!shape_ok) return report;

  if (plan.positions.front() != map.start) {
    flag(ConstraintFamily::kPropagation, 0, "x(0) is not the start cell");
  }

  for (int t = 0; t <= T; ++t) {
    const Cell p = plan.positions[t];
    if (!map.in_bounds(p)) flag(ConstraintFamily::kBounds, t, "x(t)=" + at(p) + " outside grid");
    for (std::size_t k = 0; k < map.obstacles.size(); ++k) {
      if (map.obstacles[k].contains(p)) {
        flag(ConstraintFamily::kObstacle, t, "x(t)=" + at(p) + " inside obstacle " + std::to_string(k));
      }
    }
  }

  for (int t = 0; t < T; ++t) {
    const Cell p = plan.positions[t];
    const Cell d = plan.displacements[t];
    if (plan.positions[t + 1] != p + d) {
      flag(ConstraintFamily::kPropagation, t, "x(t+1) != x(t) + d(t)");
    }

    const OneHot& h = plan.modes[t];
    bool binary = true;
    int sum = 0;
    for (int k = 0; k < 3; ++k) {
      if (h[k] != 0 && h[k] != 1) binary = false;
      sum += h[k];
    }
    if (!binary || sum != 1) {
      flag(ConstraintFamily::kOneHot, t, "mode assignment is not one-hot");
    }

    for (Mode m : kAllModes) {
      if (h[mode_index(m)] != 1) continue;
      if (!config.enabled_modes.contains(m)) {
        flag(ConstraintFamily::kStepSet, t, std::string(mode_name(m)) + " is disabled");
      } else if (!stride_allowed(m, d, config.allow_standing)) {
        flag(ConstraintFamily::kStepSet, t,
             "d(t)=" + at(d) + " not in the " + std::string(mode_name(m)) + " step set");
      }
    }

    for (std::size_t r = 0; r < map.terrains.size(); ++r) {
      const auto& region = map.terrains[r];
      if (cell_contains(region, p) && h[mode_index(region.required_mode)] != 1) {
        flag(ConstraintFamily::kTerrain, t,
             "terrain " + std::to_string(r) + " requires " + std::string(mode_name(region.required_mode)));
      }
    }
  }

  std::vector<std::uint8_t> occupied(n * n, 0);
  for (Cell p : plan.positions) {
    if (map.in_bounds(p)) occupied[p.x * n + p.y] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = plan.visited[i * n + j];
      if ((v != 0) != (occupied[i * n + j] != 0) || v > 1) {
        flag(ConstraintFamily::kVisitLinking, -1,
             "V" + at({static_cast<int>(i), static_cast<int>(j)}) + " disagrees with occupancy");
      }
    }
  }
  return report;
}

double objective_value(const Plan& plan, const PlanConfig& config, Cell goal) {
  const Cell err = plan.positions.back() - goal;
  std::array<int, 3> counts{0, 0, 0};
  for (const auto& h : plan.modes) {
    for (int k = 0; k < 3; ++k) counts[k] += h[k];
  }
  double penalty = 0.0;
  for (int k = 0; k < 3; ++k) penalty += counts[k] * config.mode_penalties[k];
  return config.w_exp * plan.visited_count() - config.w_goal * squared_norm(err) - penalty;
}

}  // namespace locomanip
