#include "locomanip/admittance.hpp"

#include <cmath>

#include "locomanip/errors.hpp"

namespace locomanip {

void AdmittanceGains::validate() const {
  if (!(m_d > 0.0)) throw InvalidConfig("desired mass m_d must be positive");
  if (!(d_d >= 0.0) || !(k_d >= 0.0)) throw InvalidConfig("damping and stiffness must be nonnegative");
  if (!(k_ix >= 0.0) || !(k_if >= 0.0)) throw InvalidConfig("integral gains must be nonnegative");
  if (!std::isfinite(k_f)) throw InvalidConfig("wrench sensitivity must be finite");
}

double admittance_accel(const AxisState& s, const AxisReference& ref, const AdmittanceGains& g) {
  return (-g.d_d * s.v - g.k_d * (s.x - ref.x_ref) + g.k_f * (s.w - ref.w_ref)) / g.m_d;
}

ControlOutput governed_control(const AxisState& s, const AxisReference& ref,
                               const AdmittanceGains& g, double accel_max, double dt) {
  const double accel = admittance_accel(s, ref, g);
  ControlOutput out;
  out.reset = std::abs(accel) > accel_max;
  const double z_x = out.reset ? 0.0 : s.z_x;
  const double z_f = out.reset ? 0.0 : s.z_f;
  out.u = accel - g.k_ix * z_x - g.k_if * z_f;
  out.z_x = z_x + (s.x - ref.x_ref) * dt;
  out.z_f = z_f + (s.w - ref.w_ref) * dt;
  return out;
}

AxisState integrate_axis(const AxisState& s, double u, double dt) {
  AxisState next = s;
  next.v = s.v + u * dt;
  next.x = s.x + s.v * dt;
  return next;
}

}  // namespace locomanip
