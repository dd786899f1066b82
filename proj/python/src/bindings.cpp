#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>

#include "locomanip/config.hpp"
#include "locomanip/contact_sim.hpp"
#include "locomanip/errors.hpp"
#include "locomanip/governor.hpp"
#include "locomanip/planner.hpp"

namespace py = pybind11;
using namespace locomanip;

namespace {

py::dict report_dict(const ValidationReport& rep) {
  py::dict counts;
  for (int f = 0; f < kNumFamilies; ++f) {
    const auto fam = static_cast<ConstraintFamily>(f);
    counts[py::str(std::string(family_name(fam)))] = rep.count(fam);
  }
  py::list items;
  for (const auto& v : rep.violations) {
    items.append(py::make_tuple(std::string(family_name(v.family)), v.t, v.detail));
  }
  py::dict d;
  d["ok"] = rep.ok();
  d["counts"] = counts;
  d["violations"] = items;
  return d;
}

py::dict evc_dict(const EvcReport& r) {
  py::dict per_mode;
  for (const auto& m : r.per_mode) {
    per_mode[py::str(std::string(mode_name(m.mode)))] =
        py::dict(py::arg("distance_m") = m.distance_m, py::arg("duration_s") = m.duration_s,
                 py::arg("energy_j") = m.energy_j, py::arg("cells_visited") = m.cells_visited,
                 py::arg("evc_j_per_cell") = m.evc_j_per_cell);
  }
  return py::dict(py::arg("per_mode") = per_mode, py::arg("distance_m") = r.distance_m,
                  py::arg("duration_s") = r.duration_s, py::arg("energy_j") = r.energy_j,
                  py::arg("cells_visited") = r.cells_visited,
                  py::arg("evc_j_per_cell") = r.evc_j_per_cell);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-modal locomotion planning and governed admittance control.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<InvalidMap>(m, "InvalidMap", base.ptr());
  py::register_exception<InvalidConfig>(m, "InvalidConfig", base.ptr());
  py::register_exception<InfeasibleEncoding>(m, "InfeasibleEncoding", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
  py::register_exception<EmptySet>(m, "EmptySet", base.ptr());
  py::register_exception<EmptyIndex>(m, "EmptyIndex", base.ptr());
  py::register_exception<FingerprintMismatch>(m, "FingerprintMismatch", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  // World

  py::enum_<Mode>(m, "Mode")
      .value("BIPED", Mode::kBiped)
      .value("CRAWL", Mode::kCrawl)
      .value("ROLL", Mode::kRoll);
  m.def("parse_mode", &parse_mode);

  py::class_<Cell>(m, "Cell")
      .def(py::init<>())
      .def(py::init([](int x, int y) { return Cell{x, y}; }), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &Cell::x)
      .def_readwrite("y", &Cell::y)
      .def("__eq__", [](const Cell& a, const Cell& b) { return a == b; })
      .def("__iter__", [](const Cell& c) { return py::iter(py::make_tuple(c.x, c.y)); })
      .def("__repr__", [](const Cell& c) {
        return "Cell(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
      });

  py::class_<TerrainRegion>(m, "TerrainRegion")
      .def(py::init<>())
      .def(py::init([](double cx, double cy, double r, Mode mode) { return TerrainRegion{cx, cy, r, mode}; }),
           py::arg("center_x"), py::arg("center_y"), py::arg("radius"), py::arg("required_mode"))
      .def_readwrite("center_x", &TerrainRegion::center_x)
      .def_readwrite("center_y", &TerrainRegion::center_y)
      .def_readwrite("radius", &TerrainRegion::radius)
      .def_readwrite("required_mode", &TerrainRegion::required_mode);

  py::class_<RectObstacle>(m, "RectObstacle")
      .def(py::init<>())
      .def(py::init([](int x0, int x1, int y0, int y1) { return RectObstacle{x0, x1, y0, y1}; }),
           py::arg("x_min"), py::arg("x_max"), py::arg("y_min"), py::arg("y_max"))
      .def_readwrite("x_min", &RectObstacle::x_min)
      .def_readwrite("x_max", &RectObstacle::x_max)
      .def_readwrite("y_min", &RectObstacle::y_min)
      .def_readwrite("y_max", &RectObstacle::y_max)
      .def("contains", &RectObstacle::contains);

  py::class_<GridMap>(m, "GridMap")
      .def(py::init<>())
      .def_readwrite("n_grid", &GridMap::n_grid)
      .def_readwrite("cell_size_m", &GridMap::cell_size_m)
      .def_readwrite("terrains", &GridMap::terrains)
      .def_readwrite("obstacles", &GridMap::obstacles)
      .def_readwrite("start", &GridMap::start)
      .def_readwrite("goal", &GridMap::goal)
      .def("in_bounds", &GridMap::in_bounds)
      .def("blocked", &GridMap::blocked)
      .def("terrain_modes", [](const GridMap& g, Cell c) {
        std::vector<Mode> out;
        for (Mode md : kAllModes) {
          if (g.terrain_modes(c).contains(md)) out.push_back(md);
        }
        return out;
      });
  m.def("validate_map", &validate_map);
  m.def("load_map", &load_map, py::arg("document"));
  m.def("load_map_file", &load_map_file, py::arg("path"));
  m.def("save_map", &save_map);

  // Planning

  py::class_<PlanConfig>(m, "PlanConfig")
      .def(py::init<>())
      .def_readwrite("horizon", &PlanConfig::horizon)
      .def_readwrite("w_exp", &PlanConfig::w_exp)
      .def_readwrite("w_goal", &PlanConfig::w_goal)
      .def_readwrite("mode_penalties", &PlanConfig::mode_penalties)
      .def_readwrite("big_m", &PlanConfig::big_m)
      .def_readwrite("epsilon", &PlanConfig::epsilon)
      .def_readwrite("allow_standing", &PlanConfig::allow_standing)
      .def_property(
          "enabled_modes",
          [](const PlanConfig& c) {
            std::vector<Mode> out;
            for (Mode md : kAllModes) {
              if (c.enabled_modes.contains(md)) out.push_back(md);
            }
            return out;
          },
          [](PlanConfig& c, const std::vector<Mode>& modes) {
            ModeSet s = ModeSet::none();
            for (Mode md : modes) s = s | ModeSet::only(md);
            c.enabled_modes = s;
          });

  py::class_<Plan>(m, "Plan")
      .def(py::init<>())
      .def_readonly("n_grid", &Plan::n_grid)
      .def_readonly("positions", &Plan::positions)
      .def_readonly("displacements", &Plan::displacements)
      .def_readonly("modes", &Plan::modes)
      .def_property_readonly("horizon", &Plan::horizon)
      .def_property_readonly("visited_count", &Plan::visited_count)
      .def("is_visited", &Plan::is_visited)
      .def("mode_at", &Plan::mode_at);
  m.def("make_plan",
        [](int n, Cell start, const std::vector<Cell>& steps, const std::vector<Mode>& modes) {
          return make_plan(n, start, steps, modes);
        },
        py::arg("n_grid"), py::arg("start"), py::arg("steps"), py::arg("modes"));
  m.def("step_set", &step_set, py::arg("mode"), py::arg("allow_standing") = true);

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def_readonly("map", &ProblemInstance::map)
      .def_readonly("config", &ProblemInstance::config)
      .def("steps", &ProblemInstance::steps);
  m.def("encode", &encode, py::arg("map"), py::arg("config"));

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("OPTIMAL", SolveStatus::kOptimal)
      .value("FEASIBLE", SolveStatus::kFeasible)
      .value("INFEASIBLE", SolveStatus::kInfeasible)
      .value("UNKNOWN", SolveStatus::kUnknown);

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("node_limit", &SolveOptions::node_limit)
      .def_readwrite("time_limit_s", &SolveOptions::time_limit_s);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("status", &SolveResult::status)
      .def_readonly("plan", &SolveResult::plan)
      .def_readonly("objective", &SolveResult::objective)
      .def_readonly("bound", &SolveResult::bound)
      .def_readonly("gap", &SolveResult::gap)
      .def_readonly("nodes", &SolveResult::nodes)
      .def_readonly("wall_time_s", &SolveResult::wall_time_s);

  m.def("solve", &solve, py::arg("instance"), py::arg("options") = SolveOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("brute_force_solve", &brute_force_solve, py::arg("instance"),
        py::arg("guard") = kBruteForceGuard, py::call_guard<py::gil_scoped_release>());
  m.def("enumeration_size", &enumeration_size);

  m.def("validate_plan", [](const Plan& p, const GridMap& g, const PlanConfig& c) {
    return report_dict(validate_plan(p, g, c));
  });
  m.def("objective_value", &objective_value);

  py::class_<EnergyModel>(m, "EnergyModel")
      .def(py::init<>())
      .def_readwrite("energy_per_meter", &EnergyModel::energy_per_meter)
      .def_readwrite("max_velocity", &EnergyModel::max_velocity);
  m.def("evc", [](const Plan& p, const GridMap& g, const EnergyModel& e) { return evc_dict(evc(p, g, e)); },
        py::arg("plan"), py::arg("map"), py::arg("energy") = EnergyModel{});

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("mode", &SweepRow::mode)
      .def_readonly("feasible", &SweepRow::feasible)
      .def_readonly("min_horizon", &SweepRow::min_horizon)
      .def_readonly("best_horizon", &SweepRow::best_horizon)
      .def_readonly("cells_visited", &SweepRow::cells_visited)
      .def_readonly("energy_j", &SweepRow::energy_j)
      .def_readonly("evc_j_per_cell", &SweepRow::evc_j_per_cell);
  m.def(
      "evc_sweep",
      [](const GridMap& g, const PlanConfig& base, const EnergyModel& e, int extra) {
        SweepOptions o;
        o.extra_horizon = extra;
        py::gil_scoped_release release;
        return evc_sweep(g, base, e, o);
      },
      py::arg("map"), py::arg("config") = PlanConfig{}, py::arg("energy") = EnergyModel{},
      py::arg("extra_horizon") = 2);
  m.def("min_goal_horizon", &min_goal_horizon, py::arg("map"), py::arg("mode"),
        py::arg("allow_standing") = true);
  m.def("save_plan", &save_plan);
  m.def("load_plan", &load_plan);

  // Admittance control

  py::class_<AdmittanceGains>(m, "AdmittanceGains")
      .def(py::init<>())
      .def_readwrite("m_d", &AdmittanceGains::m_d)
      .def_readwrite("d_d", &AdmittanceGains::d_d)
      .def_readwrite("k_d", &AdmittanceGains::k_d)
      .def_readwrite("k_f", &AdmittanceGains::k_f)
      .def_readwrite("k_ix", &AdmittanceGains::k_ix)
      .def_readwrite("k_if", &AdmittanceGains::k_if);

  py::class_<AxisState>(m, "AxisState")
      .def(py::init<>())
      .def(py::init([](double x, double v, double w) { return AxisState{x, v, w, 0.0, 0.0}; }),
           py::arg("x"), py::arg("v") = 0.0, py::arg("w") = 0.0)
      .def_readwrite("x", &AxisState::x)
      .def_readwrite("v", &AxisState::v)
      .def_readwrite("w", &AxisState::w)
      .def_readwrite("z_x", &AxisState::z_x)
      .def_readwrite("z_f", &AxisState::z_f);

  py::class_<AxisReference>(m, "AxisReference")
      .def(py::init<>())
      .def(py::init([](double x, double w) { return AxisReference{x, w}; }), py::arg("x_ref"),
           py::arg("w_ref") = 0.0)
      .def_readwrite("x_ref", &AxisReference::x_ref)
      .def_readwrite("w_ref", &AxisReference::w_ref);

  py::class_<ControlOutput>(m, "ControlOutput")
      .def_readonly("u", &ControlOutput::u)
      .def_readonly("z_x", &ControlOutput::z_x)
      .def_readonly("z_f", &ControlOutput::z_f)
      .def_readonly("reset", &ControlOutput::reset);

  m.attr("DEFAULT_DT") = kDefaultDt;
  m.def("admittance_accel", &admittance_accel);
  m.def("governed_control", &governed_control, py::arg("state"), py::arg("ref"), py::arg("gains"),
        py::arg("accel_max"), py::arg("dt") = kDefaultDt);
  m.def("integrate_axis", &integrate_axis, py::arg("state"), py::arg("u"), py::arg("dt") = kDefaultDt);

  // Contact

  py::class_<ContactModel>(m, "ContactModel")
      .def(py::init<>())
      .def_readwrite("wall_position", &ContactModel::wall_position)
      .def_readwrite("k_env", &ContactModel::k_env)
      .def_property(
          "disturbance",
          [](const ContactModel& c) {
            std::vector<std::pair<double, double>> out;
            for (const auto& d : c.disturbance) out.emplace_back(d.t_start, d.value);
            return out;
          },
          [](ContactModel& c, const std::vector<std::pair<double, double>>& steps) {
            c.disturbance.clear();
            for (const auto& [t, v] : steps) c.disturbance.push_back({t, v});
          });
  m.def("measured_wrench", &measured_wrench);

  // Reference governor

  py::class_<AxisBounds>(m, "AxisBounds")
      .def(py::init<>())
      .def_readwrite("x_max", &AxisBounds::x_max)
      .def_readwrite("v_max", &AxisBounds::v_max)
      .def_readwrite("w_max", &AxisBounds::w_max)
      .def_readwrite("accel_max", &AxisBounds::accel_max)
      .def_readwrite("horizon_steps", &AxisBounds::horizon_steps)
      .def_readwrite("dt", &AxisBounds::dt);

  py::class_<MoasSample>(m, "MoasSample")
      .def(py::init<>())
      .def(py::init([](double x, double v, double xr, double w, double wr) {
             return MoasSample{x, v, xr, w, wr};
           }),
           py::arg("x"), py::arg("v"), py::arg("x_ref"), py::arg("w"), py::arg("w_ref"))
      .def_readwrite("x", &MoasSample::x)
      .def_readwrite("v", &MoasSample::v)
      .def_readwrite("x_ref", &MoasSample::x_ref)
      .def_readwrite("w", &MoasSample::w)
      .def_readwrite("w_ref", &MoasSample::w_ref)
      .def("as_tuple", &MoasSample::as_array)
      .def("__eq__", [](const MoasSample& a, const MoasSample& b) { return a == b; })
      .def("__repr__", [](const MoasSample& s) {
        return py::str("MoasSample(x={}, v={}, x_ref={}, w={}, w_ref={})")
            .format(s.x, s.v, s.x_ref, s.w, s.w_ref);
      });

  m.def("is_admissible", &is_admissible);
  m.def("rollout", &rollout);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("counts", &GridSpec::counts)
      .def_readwrite("budget", &GridSpec::budget)
      .def_readwrite("extent", &GridSpec::extent)
      .def("total", &GridSpec::total);

  py::class_<MoasBuildSummary>(m, "MoasBuildSummary")
      .def_readonly("total", &MoasBuildSummary::total)
      .def_readonly("retained", &MoasBuildSummary::retained)
      .def_readonly("retained_fraction", &MoasBuildSummary::retained_fraction);

  py::class_<MoasIndex, std::shared_ptr<MoasIndex>>(m, "MoasIndex")
      .def(py::init<std::vector<MoasSample>, const AxisBounds&>())
      .def("__len__", &MoasIndex::size)
      .def_property_readonly("samples", &MoasIndex::samples)
      .def("distance", &MoasIndex::distance)
      .def("nearest", [](const MoasIndex& i, const MoasSample& q) { return nearest(i, q); });

  m.def(
      "build_moas",
      [](const AdmittanceGains& g, const AxisBounds& b, const ContactModel& env, const GridSpec& grid,
         int workers) {
        MoasBuildSummary summary;
        std::shared_ptr<MoasIndex> idx;
        {
          py::gil_scoped_release release;
          idx = std::make_shared<MoasIndex>(build_moas(g, b, env, grid, workers, &summary));
        }
        return py::make_tuple(idx, summary);
      },
      py::arg("gains"), py::arg("bounds"), py::arg("env"), py::arg("grid") = GridSpec{},
      py::arg("workers") = 1);
  m.def("default_tolerance", &default_tolerance);

  py::class_<GovernorOptions>(m, "GovernorOptions")
      .def(py::init<>())
      .def_readwrite("tol", &GovernorOptions::tol)
      .def_readwrite("exact", &GovernorOptions::exact)
      .def_readwrite("gains", &GovernorOptions::gains)
      .def_readwrite("bounds", &GovernorOptions::bounds)
      .def_readwrite("env", &GovernorOptions::env)
      .def_readwrite("max_candidates", &GovernorOptions::max_candidates);

  py::class_<GovernResult>(m, "GovernResult")
      .def_readonly("x_ref", &GovernResult::x_ref)
      .def_readonly("w_ref", &GovernResult::w_ref)
      .def_readonly("modified", &GovernResult::modified);

  m.def("is_member", &is_member);
  m.def("govern", py::overload_cast<const MoasIndex&, const MoasSample&, const GovernorOptions&>(&govern));
  m.def("govern", py::overload_cast<const MoasIndex&, const MoasSample&, double>(&govern));
  m.def("moas_fingerprint", &moas_fingerprint);

  m.def(
      "save_moas",
      [](const std::filesystem::path& path, const AdmittanceGains& g, const AxisBounds& b,
         const ContactModel& env, const GridSpec& grid, const MoasIndex& idx) {
        MoasArtifact art{g, b, env, grid, moas_fingerprint(g, b, env, grid), idx.samples()};
        save_moas(path, art);
        return art.fingerprint;
      },
      py::arg("path"), py::arg("gains"), py::arg("bounds"), py::arg("env"), py::arg("grid"),
      py::arg("index"));
  m.def(
      "load_moas",
      [](const std::filesystem::path& path, std::optional<std::uint64_t> expected) {
        const MoasArtifact art = load_moas(path, expected);
        return std::make_shared<MoasIndex>(art.samples, art.bounds);
      },
      py::arg("path"), py::arg("expected") = std::nullopt);

  // Closed-loop simulation

  py::class_<ReferenceStep>(m, "ReferenceStep")
      .def(py::init([](double t, double x, double w) { return ReferenceStep{t, x, w}; }),
           py::arg("t_start"), py::arg("x_ref"), py::arg("w_ref") = 0.0)
      .def_readwrite("t_start", &ReferenceStep::t_start)
      .def_readwrite("x_ref", &ReferenceStep::x_ref)
      .def_readwrite("w_ref", &ReferenceStep::w_ref);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("gains", &Scenario::gains)
      .def_readwrite("bounds", &Scenario::bounds)
      .def_readwrite("contact", &Scenario::contact)
      .def_readwrite("references", &Scenario::references)
      .def_readwrite("duration", &Scenario::duration)
      .def_readwrite("initial", &Scenario::initial)
      .def_readwrite("governed", &Scenario::governed)
      .def_property(
          "index", [](const Scenario& s) { return std::const_pointer_cast<MoasIndex>(s.index); },
          [](Scenario& s, std::shared_ptr<MoasIndex> idx) { s.index = std::move(idx); })
      .def_readwrite("governor", &Scenario::governor);

  m.def(
      "load_scenario",
      [](const std::string& doc) {
        const ScenarioFile f = load_scenario(doc);
        return py::make_tuple(f.scenario, f.grid);
      },
      py::arg("document"));

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("t", &TraceRow::t)
      .def_readonly("x", &TraceRow::x)
      .def_readonly("v", &TraceRow::v)
      .def_readonly("w_meas", &TraceRow::w_meas)
      .def_readonly("x_ref_applied", &TraceRow::x_ref_applied)
      .def_readonly("w_ref_applied", &TraceRow::w_ref_applied)
      .def_readonly("u", &TraceRow::u)
      .def_readonly("governor_modified", &TraceRow::governor_modified)
      .def_readonly("x_violation", &TraceRow::x_violation)
      .def_readonly("v_violation", &TraceRow::v_violation)
      .def_readonly("w_violation", &TraceRow::w_violation);

  py::class_<Trace>(m, "Trace")
      .def_readonly("dt", &Trace::dt)
      .def_readonly("rows", &Trace::rows)
      .def("__len__", [](const Trace& t) { return t.rows.size(); })
      .def("column", [](const Trace& t, const std::string& name) {
        std::vector<double> out;
        out.reserve(t.rows.size());
        for (const auto& r : t.rows) {
          if (name == "t") out.push_back(r.t);
          else if (name == "x") out.push_back(r.x);
          else if (name == "v") out.push_back(r.v);
          else if (name == "w_meas") out.push_back(r.w_meas);
          else if (name == "x_ref_applied") out.push_back(r.x_ref_applied);
          else if (name == "w_ref_applied") out.push_back(r.w_ref_applied);
          else if (name == "u") out.push_back(r.u);
          else throw py::key_error(name);
        }
        return out;
      });

  m.def("run_scenario", &run_scenario, py::call_guard<py::gil_scoped_release>());
  m.def(
      "check_trace",
      [](const Trace& t, const AxisBounds& b) {
        const ViolationReport r = check_trace(t, b);
        auto axis = [](const BoundViolations& v) {
          return py::dict(py::arg("count") = v.count, py::arg("first_time") = v.first_time);
        };
        return py::dict(py::arg("x") = axis(r.x), py::arg("v") = axis(r.v), py::arg("w") = axis(r.w),
                        py::arg("total") = r.total, py::arg("consistent") = r.consistent);
      });
  m.def("trace_csv", &trace_csv);
  m.def("load_trace_csv", &load_trace_csv);
}
