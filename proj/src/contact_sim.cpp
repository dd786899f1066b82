#include "locomanip/contact_sim.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "locomanip/errors.hpp"

namespace locomanip {

void Scenario::validate() const {
  gains.validate();
  bounds.validate();
  contact.validate();
  if (!(duration > 0.0)) throw InvalidConfig("scenario duration must be positive");
  for (std::size_t i = 1; i < references.size(); ++i) {
    if (!(references[i].t_start > references[i - 1].t_start)) {
      throw InvalidConfig("reference schedule times must be strictly increasing");
    }
  }
  if (governed && (!index || index->empty())) {
    throw EmptyIndex("governed scenario needs a nonempty admissible set");
  }
}

AxisReference Scenario::reference_at(double t) const {
  AxisReference ref;
  for (const auto& r : references) {
    if (r.t_start > t) break;
    ref = {r.x_ref, r.w_ref};
  }
  return ref;
}

Trace run_scenario(const Scenario& s) {
  s.validate();
  const double dt = s.bounds.dt;
  const auto steps = static_cast<long>(std::llround(s.duration / dt));

  GovernorOptions gov = s.governor;
  gov.gains = s.gains;
  gov.bounds = s.bounds;
  gov.env = s.contact;

  Trace trace;
  trace.dt = dt;
  trace.rows.reserve(static_cast<std::size_t>(steps) + 1);
  AxisState state = s.initial;
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    state.w = measured_wrench(s.contact, state.x, t);
    AxisReference ref = s.reference_at(t);
    bool modified = false;
    if (s.governed) {
      const auto g = govern(*s.index, {state.x, state.v, ref.x_ref, state.w, ref.w_ref}, gov);
      ref = {g.x_ref, g.w_ref};
      modified = g.modified;
    }
    const auto c = governed_control(state, ref, s.gains, s.bounds.accel_max, dt);

    TraceRow row;
    row.t = t;
    row.x = state.x;
    row.v = state.v;
    row.w_meas = state.w;
    row.x_ref_applied = ref.x_ref;
    row.w_ref_applied = ref.w_ref;
    row.u = c.u;
    row.governor_modified = modified;
    row.x_violation = std::abs(state.x) > s.bounds.x_max;
    row.v_violation = std::abs(state.v) > s.bounds.v_max;
    row.w_violation = std::abs(state.w) > s.bounds.w_max;
    trace.rows.push_back(row);

    if (k == steps) break;
    state.z_x = c.z_x;
    state.z_f = c.z_f;
    state = integrate_axis(state, c.u, dt);
  }
  return trace;
}

ViolationReport check_trace(const Trace& trace, const AxisBounds& bounds) {
  ViolationReport r;
  auto note = [](BoundViolations& b, bool hit, double t) {
    if (!hit) return;
    if (!b.first_time) b.first_time = t;
    ++b.count;
  };
  for (const auto& row : trace.rows) {
    const bool vx = std::abs(row.x) > bounds.x_max;
    const bool vv = std::abs(row.v) > bounds.v_max;
    const bool vw = std::abs(row.w_meas) > bounds.w_max;
    note(r.x, vx, row.t);
    note(r.v, vv, row.t);
    note(r.w, vw, row.t);
    if (vx != row.x_violation || vv != row.v_violation || vw != row.w_violation) r.consistent = false;
  }
  r.total = r.x.count + r.v.count + r.w.count;
  return r;
}

namespace {
constexpr const char* kTraceHeader =
    "t,x,v,w_meas,x_ref_applied,w_ref_applied,u,governor_modified,x_violation,v_violation,"
    "w_violation";
}

std::string trace_csv(const Trace& trace) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << r.t << ',' << r.x << ',' << r.v << ',' << r.w_meas << ',' << r.x_ref_applied << ','
        << r.w_ref_applied << ',' << r.u << ',' << int(r.governor_modified) << ','
        << int(r.x_violation) << ',' << int(r.v_violation) << ',' << int(r.w_violation) << '\n';
  }
  return out.str();
}

Trace load_trace_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw ParseError("trace CSV header mismatch");
  Trace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11) throw ParseError("trace CSV row has " + std::to_string(cells.size()) + " columns");
    TraceRow r;
    try {
      r.t = std::stod(cells[0]);
      r.x = std::stod(cells[1]);
      r.v = std::stod(cells[2]);
      r.w_meas = std::stod(cells[3]);
      r.x_ref_applied = std::stod(cells[4]);
      r.w_ref_applied = std::stod(cells[5]);
      r.u = std::stod(cells[6]);
      r.governor_modified = cells[7] == "1";
      r.x_violation = cells[8] == "1";
      r.v_violation = cells[9] == "1";
      r.w_violation = cells[10] == "1";
    } catch (const std::exception&) {
      throw ParseError("trace CSV row is not numeric");
    }
    trace.rows.push_back(r);
  }
  if (trace.rows.size() >= 2) trace.dt = trace.rows[1].t - trace.rows[0].t;
  return trace;
}

std::string plot_sidecar(const AxisBounds& bounds) {
  nlohmann::json j;
  j["x_max"] = bounds.x_max;
  j["v_max"] = bounds.v_max;
  j["w_max"] = bounds.w_max;
  j["accel_max"] = bounds.accel_max;
  j["dt"] = bounds.dt;
  return j.dump(2);
}

}  // namespace locomanip
