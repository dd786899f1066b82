#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace locomanip::support {

std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(LOCOMANIP_FIXTURES) / name;
}

GridMap random_map(std::mt19937_64& rng, int n) {
  GridMap m;
  m.n_grid = n;
  std::uniform_int_distribution<int> coord(0, n - 1);
  m.start = {coord(rng), coord(rng)};
  m.goal = {coord(rng), coord(rng)};

  std::uniform_int_distribution<int> count(0, 2);
  const int n_obs = count(rng);
  for (int k = 0; k < n_obs; ++k) {
    RectObstacle o;
    o.x_min = coord(rng);
    o.y_min = coord(rng);
    o.x_max = std::min(n - 1, o.x_min + std::uniform_int_distribution<int>(0, 1)(rng));
    o.y_max = std::min(n - 1, o.y_min + std::uniform_int_distribution<int>(0, 1)(rng));
    if (o.contains(m.start) || o.contains(m.goal)) continue;
    m.obstacles.push_back(o);
  }
  const int n_ter = count(rng);
  std::uniform_real_distribution<double> c(0.0, n - 1.0), r(0.6, 1.6);
  for (int k = 0; k < n_ter; ++k) {
    TerrainRegion t;
    t.center_x = c(rng);
    t.center_y = c(rng);
    t.radius = r(rng);
    t.required_mode = std::uniform_int_distribution<int>(0, 1)(rng) ? Mode::kCrawl : Mode::kBiped;
    m.terrains.push_back(t);
  }
  return m;
}

std::optional<Plan> random_valid_plan(std::mt19937_64& rng, const GridMap& map,
                                      const PlanConfig& config) {
  const ProblemInstance inst = encode(map, config);
  std::vector<Cell> steps;
  std::vector<Mode> modes;
  Cell at = map.start;
  for (int t = 0; t < config.horizon; ++t) {
    std::vector<std::pair<Cell, Mode>> options;
    for (Mode m : kAllModes) {
      for (Cell d : inst.steps(m)) {
        const Cell to = at + d;
        if (!map.in_bounds(to) || map.blocked(to)) continue;
        if (!inst.legal_modes(at, d).contains(m)) continue;
        options.emplace_back(d, m);
      }
    }
    if (options.empty()) return std::nullopt;
    const auto& [d, m] = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    steps.push_back(d);
    modes.push_back(m);
    at = at + d;
  }
  return make_plan(map.n_grid, map.start, steps, modes);
}

bool reference_admissible(const MoasSample& s, const AdmittanceGains& g, const AxisBounds& b,
                          const ContactModel& env) {
  auto spring = [&](double x) {
    return x > env.wall_position ? env.k_env * (x - env.wall_position) : 0.0;
  };
  const double offset = s.w - spring(s.x);
  double x = s.x, v = s.v, w = s.w, zx = 0.0, zf = 0.0;
  for (int k = 0; k <= b.horizon_steps; ++k) {
    if (std::fabs(x) > b.x_max || std::fabs(v) > b.v_max || std::fabs(w) > b.w_max) return false;
    if (k == b.horizon_steps) break;
    const double ex = x - s.x_ref, ef = w - s.w_ref;
    const double a = (-g.d_d * v - g.k_d * ex + g.k_f * ef) / g.m_d;
    if (std::fabs(a) > b.accel_max) zx = zf = 0.0;
    const double u = a - g.k_ix * zx - g.k_if * zf;
    zx += ex * b.dt;
    zf += ef * b.dt;
    const double x_next = x + v * b.dt;
    v += u * b.dt;
    x = x_next;
    w = spring(x) + offset;
  }
  return true;
}

}  // namespace locomanip::support

namespace locomanip::support {
namespace {

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool in_any_region(const GridMap& map, Cell c) {
  for (const auto& r : map.terrains) {
    if (cell_contains(r, c)) return true;
  }
  return false;
}

bool has(const std::vector<Cell>& v, Cell c) { return std::find(v.begin(), v.end(), c) != v.end(); }

// Re-lands the final step with a new (displacement, mode) whose target
// satisfies `want`; everything else stays consistent.
std::optional<Plan> reland_last(std::mt19937_64& rng, const Plan& plan, const GridMap& map,
                                const PlanConfig& config, auto want) {
  const ProblemInstance inst = encode(map, config);
  const int T = plan.horizon();
  const Cell from = plan.positions[T - 1];
  std::vector<std::pair<Cell, Mode>> options;
  for (Mode m : kAllModes) {
    if (!map.terrain_modes(from).contains(m)) continue;
    for (Cell d : inst.steps(m)) {
      if (want(from + d)) options.emplace_back(d, m);
    }
  }
  if (options.empty()) return std::nullopt;
  const auto [d, m] = pick(rng, options);
  std::vector<Cell> steps = plan.displacements;
  std::vector<Mode> modes;
  for (int t = 0; t < T; ++t) modes.push_back(*plan.mode_at(t));
  steps.back() = d;
  modes.back() = m;
  return make_plan(plan.n_grid, plan.positions.front(), steps, modes);
}

}  // namespace

std::optional<Plan> inject(std::mt19937_64& rng, const Plan& plan, const GridMap& map,
                           const PlanConfig& config, ConstraintFamily family) {
  const ProblemInstance inst = encode(map, config);
  const int T = plan.horizon();
  std::vector<int> times(T);
  std::iota(times.begin(), times.end(), 0);
  std::shuffle(times.begin(), times.end(), rng);
  Plan out = plan;

  switch (family) {
    case ConstraintFamily::kStructure: {
      if (std::uniform_int_distribution<int>(0, 1)(rng)) {
        out.modes.pop_back();
      } else {
        out.visited.push_back(0);
      }
      return out;
    }
    case ConstraintFamily::kVisitLinking: {
      const auto i = std::uniform_int_distribution<std::size_t>(0, out.visited.size() - 1)(rng);
      out.visited[i] ^= 1;
      return out;
    }
    case ConstraintFamily::kPropagation: {
      // Another displacement from the same mode's set, positions untouched.
      const int t = times.front();
      const Mode m = *plan.mode_at(t);
      std::vector<Cell> others;
      for (Cell d : inst.steps(m)) {
        if (d != plan.displacements[t]) others.push_back(d);
      }
      if (others.empty()) return std::nullopt;
      out.displacements[t] = pick(rng, others);
      return out;
    }
    case ConstraintFamily::kStepSet: {
      for (int t : times) {
        const Cell p = plan.positions[t], d = plan.displacements[t];
        std::vector<Mode> wrong;
        for (Mode m : kAllModes) {
          if (map.terrain_modes(p).contains(m) && config.enabled_modes.contains(m) &&
              !has(step_set(m, config.allow_standing), d)) {
            wrong.push_back(m);
          }
        }
        if (wrong.empty()) continue;
        out.modes[t] = one_hot(pick(rng, wrong));
        return out;
      }
      return std::nullopt;
    }
    case ConstraintFamily::kOneHot: {
      for (int t : times) {
        const Cell d = plan.displacements[t];
        const Mode m = *plan.mode_at(t);
        const int style = std::uniform_int_distribution<int>(0, 2)(rng);
        if (style == 0 && !in_any_region(map, plan.positions[t])) {
          out.modes[t] = {0, 0, 0};
          return out;
        }
        if (style == 1) {
          if (in_any_region(map, plan.positions[t])) continue;
          out.modes[t][mode_index(m)] = 2;
          return out;
        }
        // Two active modes, both of which accept d.
        for (Mode m2 : kAllModes) {
          if (m2 != m && config.enabled_modes.contains(m2) &&
              has(step_set(m2, config.allow_standing), d)) {
            out.modes[t][mode_index(m2)] = 1;
            return out;
          }
        }
        out = plan;
      }
      return std::nullopt;
    }
    case ConstraintFamily::kTerrain: {
      for (int t : times) {
        const Cell p = plan.positions[t], d = plan.displacements[t];
        if (!in_any_region(map, p)) continue;
        const Mode m = *plan.mode_at(t);
        for (Mode m2 : kAllModes) {
          if (m2 != m && config.enabled_modes.contains(m2) &&
              has(step_set(m2, config.allow_standing), d)) {
            out.modes[t] = one_hot(m2);
            return out;
          }
        }
      }
      return std::nullopt;
    }
    case ConstraintFamily::kObstacle:
      return reland_last(rng, plan, map, config,
                         [&](Cell c) { return map.in_bounds(c) && map.blocked(c); });
    case ConstraintFamily::kBounds:
      return reland_last(rng, plan, map, config, [&](Cell c) { return !map.in_bounds(c); });
  }
  return std::nullopt;
}

}  // namespace locomanip::support
