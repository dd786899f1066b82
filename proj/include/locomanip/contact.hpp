#pragma once

#include <vector>

namespace locomanip {

// Piecewise-constant disturbance: `value` holds from `t_start` until the next
// entry's start. Zero before the first entry.
struct DisturbanceStep {
  double t_start = 0.0;
  double value = 0.0;
};

// Unilateral linear spring at `wall_position` plus a scheduled disturbance.
struct ContactModel {
  double wall_position = 0.0;
  double k_env = 0.0;
  std::vector<DisturbanceStep> disturbance;

  // Throws InvalidConfig.
  void validate() const;
  double spring(double x) const { return x > wall_position ? k_env * (x - wall_position) : 0.0; }
  double disturbance_at(double t) const;
};

// k_env * max(0, x - wall) + disturbance(t)
double measured_wrench(const ContactModel& contact, double x, double t);

}  // namespace locomanip
