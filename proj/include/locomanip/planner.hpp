#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locomanip/world.hpp"

namespace locomanip {

// Hyper-parameters of the multi-modal planning program.
struct PlanConfig {
  int horizon = 10;
  double w_exp = 1.0;
  double w_goal = 1.0;
  // Indexed by mode_index(). Crawl cheapest, roll most expensive.
  std::array<double, 3> mode_penalties = {0.5, 0.1, 1.0};
  double big_m = 1e4;
  double epsilon = 1e-3;
  // Biped and crawl may stand still for a step. Roll never can.
  bool allow_standing = true;
  ModeSet enabled_modes = ModeSet::all();

  double penalty(Mode m) const { return mode_penalties[mode_index(m)]; }
};

// Throws InvalidConfig.
void validate_config(const PlanConfig& config, const GridMap& map);

using OneHot = std::array<int, 3>;

OneHot one_hot(Mode m);

// Time-indexed plan: T+1 positions, T displacements and T mode assignments.
// `visited` is the n_grid x n_grid occupancy indicator, row-major by x.
struct Plan {
  int n_grid = 0;
  std::vector<Cell> positions;
  std::vector<Cell> displacements;
  std::vector<OneHot> modes;
  std::vector<std::uint8_t> visited;

  int horizon() const { return static_cast<int>(displacements.size()); }
  bool is_visited(Cell c) const { return visited[c.x * n_grid + c.y] != 0; }
  int visited_count() const;
  // The active mode when the step's assignment is one-hot.
  std::optional<Mode> mode_at(int t) const;
};

// Builds a consistent plan by propagating `steps` from `start`. Cells outside
// the grid never appear in `visited`.
Plan make_plan(int n_grid, Cell start, std::span<const Cell> steps, std::span<const Mode> modes);

// Displacement set of one mode: axis-aligned steps with the mode's stride
// magnitudes, plus the zero step for biped and crawl when standing is on.
std::vector<Cell> step_set(Mode m, bool allow_standing);

struct ProblemInstance {
  GridMap map;
  PlanConfig config;
  // Indexed by mode_index(); empty for disabled modes.
  std::array<std::vector<Cell>, 3> step_sets;

  const std::vector<Cell>& steps(Mode m) const { return step_sets[mode_index(m)]; }
  // Modes that may be used to leave `from` with displacement `d`.
  ModeSet legal_modes(Cell from, Cell d) const;
};

ProblemInstance encode(const GridMap& map, const PlanConfig& config);

// kFeasible: budget hit with an incumbent. kUnknown: budget hit without one.
enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kUnknown };

std::string_view status_name(SolveStatus s);

struct SolveOptions {
  std::int64_t node_limit = 200'000'000;
  double time_limit_s = 300.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<Plan> plan;
  double objective = 0.0;
  // Proven upper bound on the optimal objective.
  double bound = 0.0;
  // Relative optimality gap, 0 when proven optimal.
  double gap = 0.0;
  std::int64_t nodes = 0;
  double wall_time_s = 0.0;
};

// Depth-first branch-and-bound over the per-step (displacement, mode) choice.
SolveResult solve(const ProblemInstance& instance, const SolveOptions& options = {});

// Number of in-bounds, obstacle-free displacement sequences the exhaustive
// oracle would walk, saturating at UINT64_MAX.
std::uint64_t enumeration_size(const ProblemInstance& instance);

inline constexpr std::uint64_t kBruteForceGuard = 100'000'000;

// Exhaustive oracle. Throws BudgetExceeded when enumeration_size > guard.
SolveResult brute_force_solve(const ProblemInstance& instance,
                              std::uint64_t guard = kBruteForceGuard);

// Constraint families checked by validate_plan.
enum class ConstraintFamily {
  kStructure,     // sequence lengths, grid size
  kVisitLinking,  // V marks exactly the cells the path lands on
  kPropagation,   // x(t+1) = x(t) + d(t)
  kStepSet,       // d(t) lies in the active mode's step set
  kOneHot,        // exactly one mode per step
  kTerrain,       // mode required by the region containing x(t)
  kObstacle,      // no landing inside an obstacle
  kBounds,        // positions stay on the grid
};

inline constexpr int kNumFamilies = 8;

std::string_view family_name(ConstraintFamily f);

struct Violation {
  ConstraintFamily family;
  int t = -1;  // -1 for violations not tied to a time step
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  int count(ConstraintFamily f) const;
  std::vector<ConstraintFamily> families() const;
};

ValidationReport validate_plan(const Plan& plan, const GridMap& map, const PlanConfig& config);

// W_exp * |V| - W_goal * |x_T - goal|^2 - sum of per-step mode penalties.
double objective_value(const Plan& plan, const PlanConfig& config, Cell goal);

// Per-meter locomotion energy and top speed for each mode (indexed by
// mode_index()).
struct EnergyModel {
  std::array<double, 3> energy_per_meter = {104.0, 65.0, 30.0};
  std::array<double, 3> max_velocity = {0.1, 0.4, 0.7};
};

struct ModeEnergy {
  Mode mode = Mode::kBiped;
  double distance_m = 0.0;
  double duration_s = 0.0;
  double energy_j = 0.0;
  // Cells first reached by a step in this mode.
  int cells_visited = 0;
  double evc_j_per_cell = 0.0;
};

struct EvcReport {
  std::array<ModeEnergy, 3> per_mode;
  double distance_m = 0.0;
  double duration_s = 0.0;
  double energy_j = 0.0;
  int cells_visited = 0;
  double evc_j_per_cell = 0.0;
};

EvcReport evc(const Plan& plan, const GridMap& map, const EnergyModel& energy);

// CSV: mode,distance_m,duration_s,energy_J,cells_visited,evc_J_per_cell with
// one row per mode followed by a "total" row.
std::string evc_csv(const EvcReport& report);

struct SweepRow {
  Mode mode = Mode::kBiped;
  bool feasible = false;
  int min_horizon = 0;     // fewest steps that reach the goal
  int best_horizon = 0;    // horizon of the lowest-EVC goal-reaching plan
  int cells_visited = 0;
  double energy_j = 0.0;
  double evc_j_per_cell = 0.0;
};

struct SweepOptions {
  // Horizons tried per mode run from that mode's minimum up to the largest
  // minimum over all modes plus `extra_horizon`.
  int extra_horizon = 2;
  // (w_exp, w_goal) pairs.
  std::vector<std::array<double, 2>> weights = {{1.0, 1.0}, {1.0, 10.0}};
  // Per-solve budget. A node limit keeps the sweep deterministic; incumbents
  // that reach the goal still count when it runs out.
  SolveOptions solve{250'000, 1e9};
};

// Fewest steps a single-mode plan needs to land exactly on the goal, or
// nullopt when unreachable.
std::optional<int> min_goal_horizon(const GridMap& map, Mode mode, bool allow_standing);

std::vector<SweepRow> evc_sweep(const GridMap& map, const PlanConfig& base,
                                const EnergyModel& energy, const SweepOptions& options = {});

std::string sweep_csv(const std::vector<SweepRow>& rows);

// Plan file (JSON). Carries the plan, objective and per-family validation.
std::string save_plan(const Plan& plan, const GridMap& map, const PlanConfig& config);
Plan load_plan(std::string_view document);

}  // namespace locomanip
