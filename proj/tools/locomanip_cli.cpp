// Batch front end: plan, validate, evc-sweep, moas-build, simulate.
//
// Exit codes: 0 ok, 1 usage or invalid input, 2 infeasible, 3 budget
// exhausted (incumbent still written), 4 I/O, 5 validation failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "locomanip/config.hpp"
#include "locomanip/contact_sim.hpp"
#include "locomanip/governor.hpp"
#include "locomanip/planner.hpp"

namespace fs = std::filesystem;
using namespace locomanip;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kBudget = 3, kIo = 4, kInvalid = 5 };

struct Common {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
};

ToolkitConfig load_toolkit(const std::string& path) {
  return path.empty() ? ToolkitConfig{} : load_config(read_text_file(path));
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  return dir;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& inputs,
                    const json& overrides, std::uint64_t seed) {
  json m;
  m["command"] = command;
  m["inputs"] = inputs;
  m["overrides"] = overrides;
  m["output_dir"] = dir.string();
  m["seed"] = seed;
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

void print_validation(const ValidationReport& rep) {
  for (int f = 0; f < kNumFamilies; ++f) {
    const auto fam = static_cast<ConstraintFamily>(f);
    std::printf("  %-14s %d\n", std::string(family_name(fam)).c_str(), rep.count(fam));
  }
  for (const auto& v : rep.violations) {
    std::printf("  ! %s t=%d %s\n", std::string(family_name(v.family)).c_str(), v.t, v.detail.c_str());
  }
}

struct PlanArgs {
  Common common;
  std::string map;
  std::optional<int> horizon;
  std::string single_mode;
  std::optional<std::int64_t> node_limit;
  std::optional<double> time_limit;
};

int cmd_plan(const PlanArgs& a) {
  const GridMap map = load_map_file(a.map);
  ToolkitConfig cfg = load_toolkit(a.common.config);
  json overrides = json::object();
  if (a.horizon) {
    cfg.plan.horizon = *a.horizon;
    overrides["horizon"] = *a.horizon;
  }
  if (!a.single_mode.empty()) {
    cfg.plan.enabled_modes = ModeSet::only(parse_mode(a.single_mode));
    overrides["single_mode"] = a.single_mode;
  }
  if (a.node_limit) {
    cfg.solver.node_limit = *a.node_limit;
    overrides["node_limit"] = *a.node_limit;
  }
  if (a.time_limit) {
    cfg.solver.time_limit_s = *a.time_limit;
    overrides["time_limit_s"] = *a.time_limit;
  }

  ProblemInstance inst;
  try {
    inst = encode(map, cfg.plan);
  } catch (const InfeasibleEncoding& e) {
    std::printf("status: infeasible (%s)\n", e.what());
    return kInfeasible;
  }
  const SolveResult res = solve(inst, cfg.solver);
  std::printf("status: %s\n", std::string(status_name(res.status)).c_str());
  std::printf("nodes: %lld\nwall_time_s: %.3f\n", static_cast<long long>(res.nodes), res.wall_time_s);
  if (!res.plan) return res.status == SolveStatus::kInfeasible ? kInfeasible : kBudget;

  const fs::path dir = prepare_dir(a.common.out);
  write_text_file(dir / "plan.json", save_plan(*res.plan, map, cfg.plan) + "\n");
  const EvcReport report = evc(*res.plan, map, cfg.energy);
  write_text_file(dir / "evc.csv", evc_csv(report));
  write_manifest(dir, "plan", {{"map", a.map}, {"config", a.common.config}}, overrides, a.common.seed);

  const ValidationReport rep = validate_plan(*res.plan, map, cfg.plan);
  std::printf("objective: %.6f\nbound: %.6f\ngap: %.4f\n", res.objective, res.bound, res.gap);
  std::printf("cells_visited: %d\nenergy_J: %.3f\nevc_J_per_cell: %.4f\n", report.cells_visited,
              report.energy_j, report.evc_j_per_cell);
  std::printf("modes:");
  for (int t = 0; t < res.plan->horizon(); ++t) std::printf(" %d", static_cast<int>(*res.plan->mode_at(t)));
  std::printf("\nvalid: %s\n", rep.ok() ? "yes" : "no");
  std::printf("wrote %s, %s\n", (dir / "plan.json").c_str(), (dir / "evc.csv").c_str());
  if (!rep.ok()) {
    print_validation(rep);
    return kInvalid;
  }
  return res.status == SolveStatus::kOptimal ? kOk : kBudget;
}

struct ValidateArgs {
  Common common;
  std::string map;
  std::string plan;
  std::string single_mode;
};

int cmd_validate(const ValidateArgs& a) {
  const GridMap map = load_map_file(a.map);
  ToolkitConfig cfg = load_toolkit(a.common.config);
  const Plan plan = load_plan(read_text_file(a.plan));
  cfg.plan.horizon = plan.horizon();
  if (!a.single_mode.empty()) cfg.plan.enabled_modes = ModeSet::only(parse_mode(a.single_mode));
  const ValidationReport rep = validate_plan(plan, map, cfg.plan);
  std::printf("violations: %zu\n", rep.violations.size());
  print_validation(rep);
  if (rep.ok()) {
    std::printf("objective: %.6f\n", objective_value(plan, cfg.plan, map.goal));
  }
  return rep.ok() ? kOk : kInvalid;
}

struct SweepArgs {
  Common common;
  std::string map;
  int extra = 2;
  std::optional<std::int64_t> node_limit;
};

int cmd_evc_sweep(const SweepArgs& a) {
  const GridMap map = load_map_file(a.map);
  const ToolkitConfig cfg = load_toolkit(a.common.config);
  SweepOptions opts;
  opts.extra_horizon = a.extra;
  if (a.node_limit) opts.solve.node_limit = *a.node_limit;
  const auto rows = evc_sweep(map, cfg.plan, cfg.energy, opts);
  const std::string csv = sweep_csv(rows);
  const fs::path dir = prepare_dir(a.common.out);
  write_text_file(dir / "evc_sweep.csv", csv);
  write_manifest(dir, "evc-sweep", {{"map", a.map}, {"config", a.common.config}},
                 {{"extra_horizon", a.extra}}, a.common.seed);
  std::fputs(csv.c_str(), stdout);
  bool any = false;
  for (const auto& r : rows) any = any || r.feasible;
  return any ? kOk : kInfeasible;
}

struct MoasArgs {
  Common common;
  std::string scenario;
  std::string artifact = "moas.bin";
  int workers = 0;
};

int cmd_moas_build(const MoasArgs& a) {
  const ScenarioFile f = load_scenario(read_text_file(a.scenario));
  const Scenario& s = f.scenario;
  const int workers = a.workers > 0 ? a.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  MoasBuildSummary summary;
  const MoasIndex idx = build_moas(s.gains, s.bounds, s.contact, f.grid, workers, &summary);
  MoasArtifact art;
  art.gains = s.gains;
  art.bounds = s.bounds;
  art.env = s.contact;
  art.grid = f.grid;
  art.fingerprint = moas_fingerprint(s.gains, s.bounds, s.contact, f.grid);
  art.samples = idx.samples();
  const fs::path out(a.artifact);
  if (out.has_parent_path()) prepare_dir(out.parent_path().string());
  save_moas(out, art);
  std::printf("samples: %llu\nretained: %llu (%.2f%%)\nfingerprint: %016llx\nwrote %s\n",
              static_cast<unsigned long long>(summary.total),
              static_cast<unsigned long long>(summary.retained), 100.0 * summary.retained_fraction,
              static_cast<unsigned long long>(art.fingerprint), out.c_str());
  return kOk;
}

struct SimArgs {
  Common common;
  std::string scenario;
  std::string moas;
  bool ungoverned = false;
};

int cmd_simulate(const SimArgs& a) {
  ScenarioFile f = load_scenario(read_text_file(a.scenario));
  Scenario& s = f.scenario;
  if (a.ungoverned) s.governed = false;
  if (s.governed) {
    if (a.moas.empty()) throw IoError("governed scenario needs --moas (build one with moas-build)");
    if (!fs::exists(a.moas)) throw IoError("MOAS artifact not found: " + a.moas);
    const auto art = load_moas(a.moas, moas_fingerprint(s.gains, s.bounds, s.contact, f.grid));
    s.index = std::make_shared<MoasIndex>(art.samples, art.bounds);
  }
  const Trace trace = run_scenario(s);
  const ViolationReport rep = check_trace(trace, s.bounds);

  const fs::path dir = prepare_dir(a.common.out);
  write_text_file(dir / "trace.csv", trace_csv(trace));
  write_text_file(dir / "trace_bounds.json", plot_sidecar(s.bounds) + "\n");
  write_manifest(dir, "simulate", {{"scenario", a.scenario}, {"moas", a.moas}},
                 {{"governed", s.governed}}, a.common.seed);

  int modified = 0;
  for (const auto& r : trace.rows) modified += r.governor_modified;
  std::printf("governed: %s\nsteps: %zu\nreferences modified: %d\n", s.governed ? "yes" : "no",
              trace.rows.size(), modified);
  auto line = [](const char* name, const BoundViolations& b) {
    if (b.first_time) {
      std::printf("%s violations: %d (first at t=%.4f s)\n", name, b.count, *b.first_time);
    } else {
      std::printf("%s violations: 0\n", name);
    }
  };
  line("x", rep.x);
  line("v", rep.v);
  line("w", rep.w);
  std::printf("wrote %s\n", (dir / "trace.csv").c_str());
  // Violations are expected without the governor; with it they are a regression.
  return s.governed && rep.any() ? kInvalid : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locomotion planning and governed admittance toolkit"};
  app.require_subcommand(1);

  auto add_common = [](CLI::App* sub, Common& c, bool with_config = true) {
    if (with_config) sub->add_option("--config", c.config, "toolkit config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--seed", c.seed, "recorded in the run manifest; runs are deterministic");
  };

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "solve the multi-modal planning problem");
  p->add_option("--map", plan.map, "map file")->required();
  p->add_option("--T", plan.horizon, "planning horizon")->check(CLI::Range(1, 1000));
  p->add_option("--single-mode", plan.single_mode, "biped | crawl | roll")
      ->check(CLI::IsMember({"biped", "crawl", "roll"}));
  p->add_option("--node-limit", plan.node_limit, "branch-and-bound node budget");
  p->add_option("--time-limit", plan.time_limit, "wall-clock budget in seconds");
  add_common(p, plan.common);

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "check a plan file against a map");
  v->add_option("--map", val.map, "map file")->required();
  v->add_option("--plan", val.plan, "plan file")->required();
  v->add_option("--single-mode", val.single_mode, "restrict enabled modes")
      ->check(CLI::IsMember({"biped", "crawl", "roll"}));
  add_common(v, val.common);

  SweepArgs sw;
  auto* e = app.add_subcommand("evc-sweep", "single-mode energy-per-visited-cell sweep");
  e->add_option("--map", sw.map, "map file")->required();
  e->add_option("--extra-horizon", sw.extra, "horizons past the slowest mode's minimum")
      ->check(CLI::Range(0, 100));
  e->add_option("--node-limit", sw.node_limit, "node budget per solve");
  add_common(e, sw.common);

  MoasArgs mb;
  auto* m = app.add_subcommand("moas-build", "build and store the admissible set for a scenario");
  m->add_option("--scenario", mb.scenario, "scenario file")->required();
  m->add_option("--artifact", mb.artifact, "output artifact path");
  m->add_option("--workers", mb.workers, "rollout threads (0 = all cores)")->check(CLI::Range(0, 1024));
  add_common(m, mb.common, false);

  SimArgs sim;
  auto* s = app.add_subcommand("simulate", "run a contact scenario and write its trace");
  s->add_option("--scenario", sim.scenario, "scenario file")->required();
  s->add_option("--moas", sim.moas, "admissible-set artifact for governed runs");
  s->add_flag("--ungoverned", sim.ungoverned, "disable the governor");
  add_common(s, sim.common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*p) return cmd_plan(plan);
    if (*v) return cmd_validate(val);
    if (*e) return cmd_evc_sweep(sw);
    if (*m) return cmd_moas_build(mb);
    if (*s) return cmd_simulate(sim);
  } catch (const IoError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kIo;
  } catch (const ParseError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kIo;
  } catch (const FingerprintMismatch& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kIo;
  } catch (const BudgetExceeded& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kBudget;
  } catch (const EmptySet& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kInfeasible;
  } catch (const Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kUsage;
  }
  return kUsage;
}
