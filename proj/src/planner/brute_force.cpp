#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "locomanip/planner.hpp"

namespace locomanip {
namespace {

// Move rules restated directly from the map and the per-mode step sets.
struct Oracle {
  const ProblemInstance& inst;
  std::vector<Cell> displacements;  // lexicographic order

  explicit Oracle(const ProblemInstance& i) : inst(i) {
    for (Mode m : kAllModes) {
      for (Cell d : inst.steps(m)) displacements.push_back(d);
    }
    std::sort(displacements.begin(), displacements.end());
    displacements.erase(std::unique(displacements.begin(), displacements.end()), displacements.end());
  }

  bool landing_ok(Cell to) const {
    if (!inst.map.in_bounds(to)) return false;
    for (const auto& o : inst.map.obstacles) {
      if (o.contains(to)) return false;
    }
    return true;
  }

  // Cheapest mode that may take displacement d from `from`; ties go to the
  // lower mode index, which is also the lexicographically first choice.
  std::optional<Mode> cheapest_mode(Cell from, Cell d) const {
    std::optional<Mode> best;
    for (Mode m : kAllModes) {
      const auto& set = inst.steps(m);
      if (std::find(set.begin(), set.end(), d) == set.end()) continue;
      bool gated_out = false;
      for (const auto& r : inst.map.terrains) {
        if (cell_contains(r, from) && r.required_mode != m) gated_out = true;
      }
      if (gated_out) continue;
      if (!best || inst.config.penalty(m) < inst.config.penalty(*best)) best = m;
    }
    return best;
  }
};

}  // namespace

std::uint64_t enumeration_size(const ProblemInstance& instance) {
  const Oracle oracle(instance);
  const GridMap& map = instance.map;
  const int n = map.n_grid;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> ways(n * n, 0), next(n * n, 0);
  ways[map.cell_index(map.start)] = 1;
  for (int t = 0; t < instance.config.horizon; ++t) {
    std::fill(next.begin(), next.end(), 0);
    for (int c = 0; c < n * n; ++c) {
      if (ways[c] == 0) continue;
      const Cell from{c / n, c % n};
      for (Cell d : oracle.displacements) {
        const Cell to = from + d;
        if (!oracle.landing_ok(to) || !oracle.cheapest_mode(from, d)) continue;
        auto& slot = next[map.cell_index(to)];
        slot = (kMax - slot < ways[c]) ? kMax : slot + ways[c];
      }
    }
    ways.swap(next);
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = (kMax - total < w) ? kMax : total + w;
  return total;
}

SolveResult brute_force_solve(const ProblemInstance& instance, std::uint64_t guard) {
  const std::uint64_t size = enumeration_size(instance);
  if (size > guard) {
    throw BudgetExceeded("exhaustive enumeration needs " + std::to_string(size) +
                         " leaves, guard is " + std::to_string(guard));
  }
  const auto t0 = std::chrono::steady_clock::now();
  const Oracle oracle(instance);
  const GridMap& map = instance.map;
  const PlanConfig& cfg = instance.config;
  const int n = map.n_grid;
  const int T = cfg.horizon;

  std::vector<int> occupancy(n * n, 0);
  int distinct = 0;
  std::vector<Cell> steps;
  std::vector<Mode> modes;
  std::array<int, 3> counts{0, 0, 0};
  bool found = false;
  double best = 0.0;
  std::vector<Cell> best_steps;
  std::vector<Mode> best_modes;
  std::int64_t leaves = 0;

  auto visit = [&](Cell c, int delta) {
    int& o = occupancy[map.cell_index(c)];
    if (delta > 0 && o++ == 0) ++distinct;
    if (delta < 0 && --o == 0) --distinct;
  };

  auto recurse = [&](auto&& self, Cell pos, int t) -> void {
    if (t == T) {
      ++leaves;
      double penalty = 0.0;
      for (int k = 0; k < 3; ++k) penalty += counts[k] * cfg.mode_penalties[k];
      const double value = cfg.w_exp * distinct - cfg.w_goal * squared_norm(pos - map.goal) - penalty;
      if (!found || value > best + 1e-9 * std::max(1.0, std::abs(best))) {
        found = true;
        best = value;
        best_steps = steps;
        best_modes = modes;
      }
      return;
    }
    for (Cell d : oracle.displacements) {
      const Cell to = pos + d;
      if (!oracle.landing_ok(to)) continue;
      const auto mode = oracle.cheapest_mode(pos, d);
      if (!mode) continue;
      steps.push_back(d);
      modes.push_back(*mode);
      counts[mode_index(*mode)] += 1;
      visit(to, +1);
      self(self, to, t + 1);
      visit(to, -1);
      counts[mode_index(*mode)] -= 1;
      modes.pop_back();
      steps.pop_back();
    }
  };

  visit(map.start, +1);
  recurse(recurse, map.start, 0);

  SolveResult res;
  res.nodes = leaves;
  res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!found) {
    res.status = SolveStatus::kInfeasible;
    return res;
  }
  res.status = SolveStatus::kOptimal;
  res.plan = make_plan(n, map.start, best_steps, best_modes);
  res.objective = objective_value(*res.plan, cfg, map.goal);
  res.bound = res.objective;
  return res;
}

}  // namespace locomanip
