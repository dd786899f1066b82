#pragma once

namespace locomanip {

// Loop period of the admittance controller (300 Hz).
inline constexpr double kDefaultDt = 1.0 / 300.0;

// Diagonal admittance parameters for one decoupled axis.
struct AdmittanceGains {
  double m_d = 1.0;   // desired mass, kg (must be > 0)
  double d_d = 0.0;   // damping, N s/m
  double k_d = 0.0;   // stiffness, N/m
  double k_f = 0.0;   // wrench sensitivity
  double k_ix = 0.0;  // position integral gain
  double k_if = 0.0;  // wrench integral gain

  // Throws InvalidConfig.
  void validate() const;
};

struct AxisState {
  double x = 0.0;    // fingertip position, m
  double v = 0.0;    // velocity, m/s
  double w = 0.0;    // measured wrench component
  double z_x = 0.0;  // position error integral
  double z_f = 0.0;  // wrench error integral
};

struct AxisReference {
  double x_ref = 0.0;
  double w_ref = 0.0;
};

// m_d^-1 (-d_d v - k_d (x - x_ref) + k_f (w - w_ref))
double admittance_accel(const AxisState& s, const AxisReference& ref, const AdmittanceGains& g);

struct ControlOutput {
  double u = 0.0;
  // Integrators to carry into the next call.
  double z_x = 0.0;
  double z_f = 0.0;
  // True when |admittance accel| exceeded accel_max and the integrators were
  // cleared before computing u.
  bool reset = false;
};

// Integral-augmented command with anti-windup:
//   u = accel - k_ix z_x - k_if z_f, with z_x = z_f = 0 when |accel| > accel_max.
// The returned integrators add this step's errors times dt.
ControlOutput governed_control(const AxisState& s, const AxisReference& ref,
                               const AdmittanceGains& g, double accel_max, double dt = kDefaultDt);

// Forward Euler step: v' = v + u dt, x' = x + v dt (old velocity). Wrench and
// integrators are copied unchanged.
AxisState integrate_axis(const AxisState& s, double u, double dt = kDefaultDt);

}  // namespace locomanip
