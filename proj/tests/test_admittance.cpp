#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "locomanip/admittance.hpp"
#include "locomanip/errors.hpp"

using namespace locomanip;

TEST(Admittance, EquilibriumIsZero) {
  const AdmittanceGains g{2.0, 3.0, 5.0, 0.7, 0.1, 0.1};
  EXPECT_DOUBLE_EQ(admittance_accel({0.3, 0.0, 4.0}, {0.3, 4.0}, g), 0.0);
}

TEST(Admittance, WorkedExample) {
  const AdmittanceGains g{1.0, 2.0, 4.0, 0.5, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(admittance_accel({0.0, 0.0, 1.5}, {1.0, 1.5}, g), 4.0);
}

TEST(Admittance, GainValidation) {
  EXPECT_THROW((AdmittanceGains{0.0, 1, 1, 0, 0, 0}.validate()), InvalidConfig);
  EXPECT_THROW((AdmittanceGains{1.0, -1, 1, 0, 0, 0}.validate()), InvalidConfig);
  EXPECT_THROW((AdmittanceGains{1.0, 1, 1, 0, -0.1, 0}.validate()), InvalidConfig);
  EXPECT_NO_THROW((AdmittanceGains{1.0, 1, 1, -0.5, 0, 0}.validate()));
}

TEST(GovernedControl, EquilibriumGivesZero) {
  const AdmittanceGains g{1.0, 2.0, 4.0, 0.5, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(governed_control({0.1, 0.0, 2.0}, {0.1, 2.0}, g, 10.0).u, 0.0);
}

TEST(GovernedControl, AntiWindupClearsIntegrators) {
  const AdmittanceGains g{1.0, 0.0, 100.0, 0.0, 3.0, 2.0};
  const AxisState s{0.0, 0.0, 0.0, 0.5, -0.25};
  const auto out = governed_control(s, {1.0, 0.0}, g, 5.0, 0.01);
  EXPECT_TRUE(out.reset);
  EXPECT_DOUBLE_EQ(out.u, 100.0);
  // The carried integrators restart from zero.
  EXPECT_DOUBLE_EQ(out.z_x, -1.0 * 0.01);
  EXPECT_DOUBLE_EQ(out.z_f, 0.0);
}

TEST(GovernedControl, IntegratorsActBelowLimit) {
  const AdmittanceGains g{1.0, 0.0, 1.0, 0.0, 3.0, 2.0};
  const AxisState s{0.0, 0.0, 0.0, 0.5, -0.25};
  const auto out = governed_control(s, {0.1, 0.0}, g, 5.0, 0.01);
  EXPECT_FALSE(out.reset);
  EXPECT_DOUBLE_EQ(out.u, 0.1 - 3.0 * 0.5 + 2.0 * 0.25);
}

TEST(GovernedControl, NoIntegralGainsIsPureAdmittance) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  const AdmittanceGains g{1.3, 0.4, 2.2, -0.3, 0.0, 0.0};
  for (int i = 0; i < 500; ++i) {
    const AxisState s{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const AxisReference r{u(rng), u(rng)};
    EXPECT_DOUBLE_EQ(governed_control(s, r, g, 1.0).u, admittance_accel(s, r, g));
  }
}

TEST(Integrate, Examples) {
  auto s = integrate_axis({0.2, 0.0, 1.0}, 0.0, 0.1);
  EXPECT_DOUBLE_EQ(s.x, 0.2);
  EXPECT_DOUBLE_EQ(s.v, 0.0);
  s = integrate_axis({0.0, 1.0}, 0.0, 0.1);
  EXPECT_DOUBLE_EQ(s.x, 0.1);
  EXPECT_DOUBLE_EQ(s.v, 1.0);
  s = integrate_axis({0.0, 0.0}, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(s.v, 1.0);
  EXPECT_DOUBLE_EQ(s.x, 0.0);
}

TEST(Admittance, AxesAreDecoupled) {
  // Two axes stepped side by side never see each other's state.
  const AdmittanceGains gx{1.0, 4.0, 9.0, 0.1, 0.0, 0.0}, gy{2.0, 1.0, 3.0, -0.2, 0.5, 0.0};
  AxisState x{0.1, 0.0, 0.0}, y{-0.2, 0.3, 1.0};
  AxisState y_alone = y;
  for (int k = 0; k < 300; ++k) {
    const auto cx = governed_control(x, {0.0, 0.0}, gx, 50.0);
    const auto cy = governed_control(y, {0.05, 0.5}, gy, 50.0);
    x = integrate_axis({x.x, x.v, x.w, cx.z_x, cx.z_f}, cx.u);
    y = integrate_axis({y.x, y.v, y.w, cy.z_x, cy.z_f}, cy.u);
    const auto ca = governed_control(y_alone, {0.05, 0.5}, gy, 50.0);
    y_alone = integrate_axis({y_alone.x, y_alone.v, y_alone.w, ca.z_x, ca.z_f}, ca.u);
  }
  EXPECT_EQ(y.x, y_alone.x);
  EXPECT_EQ(y.v, y_alone.v);
}

TEST(Admittance, PassiveEnergyDoesNotGrow) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> m(0.5, 3), d(0.5, 10), k(1, 50), x0(-0.1, 0.1);
  const double dt = kDefaultDt;
  for (int trial = 0; trial < 20; ++trial) {
    const AdmittanceGains g{m(rng), d(rng), k(rng), 0.0, 0.0, 0.0};
    AxisState s{x0(rng), x0(rng)};
    auto energy = [&](const AxisState& a) { return 0.5 * g.m_d * a.v * a.v + 0.5 * g.k_d * a.x * a.x; };
    const double e0 = energy(s);
    double prev = e0;
    for (int step = 0; step < 3000; ++step) {
      const auto c = governed_control(s, {0.0, 0.0}, g, 1e9, dt);
      s = integrate_axis(s, c.u, dt);
      const double e = energy(s);
      // Forward Euler may add O(dt) relative energy per step.
      EXPECT_LE(e, prev + dt * (g.k_d / g.m_d + 1.0) * e0 + 1e-15);
      prev = e;
    }
    EXPECT_LT(prev, e0);
  }
}
