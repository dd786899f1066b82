#include <cmath>
#include <deque>
#include <iomanip>
#include <limits>
#include <sstream>

#include "locomanip/planner.hpp"

namespace locomanip {

EvcReport evc(const Plan& plan, const GridMap& map, const EnergyModel& energy) {
  EvcReport report;
  for (Mode m : kAllModes) report.per_mode[mode_index(m)].mode = m;

  std::vector<std::uint8_t> seen(static_cast<std::size_t>(map.n_grid) * map.n_grid, 0);
  auto first_visit = [&](Cell c) {
    if (!map.in_bounds(c)) return false;
    auto& s = seen[map.cell_index(c)];
    if (s) return false;
    s = 1;
    return true;
  };
  first_visit(plan.positions.front());

  for (int t = 0; t < plan.horizon(); ++t) {
    const auto mode = plan.mode_at(t);
    const bool fresh = first_visit(plan.positions[t + 1]);
    if (!mode) continue;
    const int k = mode_index(*mode);
    auto& row = report.per_mode[k];
    const double meters = manhattan(plan.displacements[t]) * map.cell_size_m;
    row.distance_m += meters;
    row.duration_s += meters / energy.max_velocity[k];
    row.energy_j += meters * energy.energy_per_meter[k];
    if (fresh) row.cells_visited += 1;
  }
  for (auto& row : report.per_mode) {
    row.evc_j_per_cell = row.cells_visited > 0 ? row.energy_j / row.cells_visited : 0.0;
    report.distance_m += row.distance_m;
    report.duration_s += row.duration_s;
    report.energy_j += row.energy_j;
  }
  report.cells_visited = plan.visited_count();
  report.evc_j_per_cell = report.cells_visited > 0 ? report.energy_j / report.cells_visited : 0.0;
  return report;
}

std::string evc_csv(const EvcReport& report) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "mode,distance_m,duration_s,energy_J,cells_visited,evc_J_per_cell\n";
  for (const auto& row : report.per_mode) {
    out << mode_name(row.mode) << ',' << row.distance_m << ',' << row.duration_s << ','
        << row.energy_j << ',' << row.cells_visited << ',' << row.evc_j_per_cell << '\n';
  }
  out << "total," << report.distance_m << ',' << report.duration_s << ',' << report.energy_j << ','
      << report.cells_visited << ',' << report.evc_j_per_cell << '\n';
  return out.str();
}

std::optional<int> min_goal_horizon(const GridMap& map, Mode mode, bool allow_standing) {
  const int n = map.n_grid;
  std::vector<int> dist(n * n, -1);
  std::deque<Cell> queue{map.start};
  dist[map.cell_index(map.start)] = 0;
  const auto steps = step_set(mode, allow_standing);
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (c == map.goal) return dist[map.cell_index(c)];
    if (!map.terrain_modes(c).contains(mode)) continue;
    for (Cell d : steps) {
      const Cell to = c + d;
      if (!map.in_bounds(to) || map.blocked(to) || dist[map.cell_index(to)] >= 0) continue;
      dist[map.cell_index(to)] = dist[map.cell_index(c)] + 1;
      queue.push_back(to);
    }
  }
  return std::nullopt;
}

std::vector<SweepRow> evc_sweep(const GridMap& map, const PlanConfig& base,
                                const EnergyModel& energy, const SweepOptions& options) {
  std::vector<SweepRow> rows;
  int longest = 0;
  for (Mode m : kAllModes) {
    SweepRow row;
    row.mode = m;
    if (auto t = min_goal_horizon(map, m, base.allow_standing)) {
      row.feasible = true;
      row.min_horizon = std::max(1, *t);
      longest = std::max(longest, row.min_horizon);
    }
    rows.push_back(row);
  }
  const int t_max = longest + options.extra_horizon;

  for (auto& row : rows) {
    if (!row.feasible) continue;
    bool found = false;
    for (int T = row.min_horizon; T <= t_max; ++T) {
      for (const auto& [w_exp, w_goal] : options.weights) {
        PlanConfig cfg = base;
        cfg.horizon = T;
        cfg.w_exp = w_exp;
        cfg.w_goal = w_goal;
        cfg.enabled_modes = ModeSet::only(row.mode);
        SolveResult res;
        try {
          res = solve(encode(map, cfg), options.solve);
        } catch (const InfeasibleEncoding&) {
          continue;
        }
        if (!res.plan || res.plan->positions.back() != map.goal) continue;
        const auto report = evc(*res.plan, map, energy);
        if (!found || report.evc_j_per_cell < row.evc_j_per_cell) {
          found = true;
          row.best_horizon = T;
          row.cells_visited = report.cells_visited;
          row.energy_j = report.energy_j;
          row.evc_j_per_cell = report.evc_j_per_cell;
        }
      }
    }
    row.feasible = found;
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "mode,feasible,min_T,best_T,cells_visited,energy_J,evc_J_per_cell\n";
  for (const auto& r : rows) {
    out << mode_name(r.mode) << ',' << (r.feasible ? "yes" : "no") << ',' << r.min_horizon << ','
        << r.best_horizon << ',' << r.cells_visited << ',' << r.energy_j << ',' << r.evc_j_per_cell
        << '\n';
  }
  return out.str();
}

}  // namespace locomanip
