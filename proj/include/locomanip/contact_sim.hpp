#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locomanip/admittance.hpp"
#include "locomanip/contact.hpp"
#include "locomanip/governor.hpp"

namespace locomanip {

// Desired references, piecewise constant from t_start on.
struct ReferenceStep {
  double t_start = 0.0;
  double x_ref = 0.0;
  double w_ref = 0.0;
};

struct Scenario {
  AdmittanceGains gains;
  AxisBounds bounds;
  ContactModel contact;
  std::vector<ReferenceStep> references;
  double duration = 1.0;
  AxisState initial;

  bool governed = false;
  std::shared_ptr<const MoasIndex> index;
  // gains/bounds/env inside are overwritten from the scenario when run.
  GovernorOptions governor;

  // Throws InvalidConfig.
  void validate() const;
  AxisReference reference_at(double t) const;
};

struct TraceRow {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  double w_meas = 0.0;
  double x_ref_applied = 0.0;
  double w_ref_applied = 0.0;
  double u = 0.0;
  bool governor_modified = false;
  bool x_violation = false;
  bool v_violation = false;
  bool w_violation = false;
};

struct Trace {
  double dt = kDefaultDt;
  std::vector<TraceRow> rows;
};

// Steps the loop at bounds.dt: reference schedule -> optional governor ->
// governed_control -> integrate_axis -> measured wrench. One row per time
// step including t = 0 and t = duration.
Trace run_scenario(const Scenario& s);

struct BoundViolations {
  int count = 0;
  std::optional<double> first_time;
};

struct ViolationReport {
  BoundViolations x;
  BoundViolations v;
  BoundViolations w;
  int total = 0;
  // Recomputed flags equal the ones recorded in the trace.
  bool consistent = true;

  bool any() const { return total > 0; }
};

ViolationReport check_trace(const Trace& trace, const AxisBounds& bounds);

// Fixed header: t,x,v,w_meas,x_ref_applied,w_ref_applied,u,governor_modified,
// x_violation,v_violation,w_violation
std::string trace_csv(const Trace& trace);
Trace load_trace_csv(std::string_view text);
// Bound constants for external plotting.
std::string plot_sidecar(const AxisBounds& bounds);

}  // namespace locomanip
