#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hydrofel/dynamics.hpp"
#include "oracles.hpp"

using namespace hydrofel;

namespace {

SimConfig small(std::size_t n, InitMode mode = InitMode::quiet_start) {
  SimConfig c;
  c.n_particles = n;
  c.init_mode = mode;
  return c;
}

EnsembleState uniform_state(std::size_t n, std::complex<double> field) {
  EnsembleState s;
  for (std::size_t i = 0; i < n; ++i) s.theta.push_back(2 * pi * i / n);
  s.p.assign(n, 0.0);
  s.field = field;
  return s;
}

TEST(InitEnsemble, QuietStartIsNearlyUnbunched) {
  const auto s = init_ensemble(small(8));
  EXPECT_LT(std::abs(bunching(s.theta)), 1e-5);
  EXPECT_EQ(s.amplitude(), 1e-4);
  for (double p : s.p) EXPECT_EQ(p, 0.0);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(s.theta[i], 2 * pi * i / 8, 1e-6);
}

TEST(InitEnsemble, DeterministicPerSeed) {
  for (auto mode : {InitMode::quiet_start, InitMode::uniform_random}) {
    auto c = small(256, mode);
    const auto a = init_ensemble(c), b = init_ensemble(c);
    EXPECT_EQ(a.theta, b.theta);
    c.rng_seed = 2;
    EXPECT_NE(init_ensemble(c).theta, a.theta);
  }
  const auto u = init_ensemble(small(4096, InitMode::uniform_random));
  for (double t : u.theta) {
    EXPECT_GE(t, 0.0);
    EXPECT_LT(t, 2 * pi);
  }
}

TEST(InitEnsemble, RejectsBadConfig) {
  auto c = small(1);
  EXPECT_THROW(init_ensemble(c), InvalidArgument);
  c = small(8);
  c.dt = 0;
  EXPECT_THROW(init_ensemble(c), InvalidArgument);
  c = small(8);
  c.seed_amp = 0;
  EXPECT_THROW(init_ensemble(c), InvalidArgument);
}

TEST(InitMode, StringRoundTrip) {
  for (auto m : {InitMode::quiet_start, InitMode::uniform_random})
    EXPECT_EQ(parse_init_mode(to_string(m)), m);
  EXPECT_FALSE(parse_init_mode("shot-noise"));
}

TEST(Derivative, SingleParticleExamples) {
  // Real field A0 = 1, phi = 0: force -2 cos(theta).
  EnsembleState s{{pi / 2}, {0.0}, {1.0, 0.0}, 0.0};
  auto d = derivative(s);
  EXPECT_NEAR(d.dp[0], 0.0, 1e-15);
  EXPECT_NEAR(d.dfield.real(), 0.0, 1e-15);  // A0' = cos(theta + phi)
  s.theta[0] = 3 * pi / 2;
  d = derivative(s);
  EXPECT_NEAR(phase_rate(s.field, d.dfield), 1.0, 1e-15);  // -sin/A0 = 1
  s.theta[0] = 0.0;
  s.p[0] = 0.7;
  d = derivative(s);
  EXPECT_NEAR(d.dp[0], -2.0, 1e-15);
  EXPECT_EQ(d.dtheta[0], 0.7);
}

TEST(Derivative, UniformPhasesLeaveFieldUnchanged) {
  const auto d = derivative(uniform_state(1024, {0.3, 0.4}));
  EXPECT_LT(std::abs(d.dfield), 1e-14);
}

TEST(Derivative, MatchesPolarFormWithinRoundoff) {
  const auto s = init_ensemble(small(512, InitMode::uniform_random));
  auto seeded = s;
  seeded.field = std::polar(0.37, -1.1);
  const auto dc = derivative(seeded);
  const auto dp = polar_derivative(to_polar(seeded));
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(dc.dp[i], dp.dp[i], 1e-14);
  EXPECT_NEAR(std::real(dc.dfield * std::conj(seeded.field)) / seeded.amplitude(), dp.dA0, 1e-14);
  EXPECT_NEAR(phase_rate(seeded.field, dc.dfield), dp.dphi, 1e-14);
}

TEST(Rk4, UniformZeroFieldIsFixedPoint) {
  auto s = uniform_state(64, {0.0, 0.0});
  const auto start = s;
  Rk4Integrator integ(s.size());
  for (int k = 0; k < 1000; ++k) integ.step(s, 0.01);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(s.theta[i], start.theta[i], 1e-14);
    EXPECT_NEAR(s.p[i], 0.0, 1e-14);
  }
  EXPECT_LT(std::abs(s.field), 1e-14);
}

TEST(Rk4, FourthOrderConvergence) {
  auto c = small(128, InitMode::uniform_random);
  auto s0 = init_ensemble(c);
  s0.field = {0.5, 0.2};
  auto integrate = [&](double dt) {
    auto s = s0;
    Rk4Integrator integ(s.size());
    const int steps = static_cast<int>(std::lround(2.0 / dt));
    for (int k = 0; k < steps; ++k) integ.step(s, dt);
    return s.field;
  };
  const auto a = integrate(0.1), b = integrate(0.05), r = integrate(0.00625);
  const double ratio = std::abs(a - r) / std::abs(b - r);
  EXPECT_GE(ratio, 12.0);
  EXPECT_LE(ratio, 20.0);
}

TEST(Rk4, FirstIntegralDrift) {
  auto c = small(512, InitMode::uniform_random);
  auto s = init_ensemble(c);
  s.field = {0.3, 0.0};
  const double c0 = first_integral(s);
  Rk4Integrator integ(s.size());
  double worst = 0;
  for (int k = 0; k < 10000; ++k) {
    integ.step(s, 0.01);
    worst = std::max(worst, std::abs(first_integral(s) - c0));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Rk4, PhaseShiftCovariance) {
  auto s = init_ensemble(small(256, InitMode::uniform_random));
  s.field = std::polar(0.4, -0.3);
  auto shifted = s;
  const double chi = 0.9;
  for (double& t : shifted.theta) t += chi;
  shifted.field *= std::polar(1.0, chi);  // phi -> phi - chi
  for (int k = 0; k < 200; ++k) {
    s = step(std::move(s), 0.01);
    shifted = step(std::move(shifted), 0.01);
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(shifted.theta[i], s.theta[i] + chi, 1e-9);
    EXPECT_NEAR(shifted.p[i], s.p[i], 1e-9);
  }
  EXPECT_NEAR(shifted.amplitude(), s.amplitude(), 1e-12);
  EXPECT_LE(std::abs(bunching(s.theta)), 1.0);
}

TEST(Rk4, ThreadCountDoesNotChangeBits) {
  auto c = small(3000, InitMode::uniform_random);
  c.tau_end = 5;
  c.threads = 1;
  const auto a = run(c);
  c.threads = 4;
  const auto b = run(c);
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    EXPECT_EQ(a.trajectory[i].A0_scaled, b.trajectory[i].A0_scaled);
    EXPECT_EQ(a.trajectory[i].p_mean, b.trajectory[i].p_mean);
  }
  EXPECT_EQ(a.final_state.theta, b.final_state.theta);
}

TEST(Rk4, NonFiniteFieldIsBlowup) {
  auto s = uniform_state(8, {std::numeric_limits<double>::infinity(), 0.0});
  Rk4Integrator integ(s.size());
  EXPECT_THROW(integ.step(s, 0.01), NumericalBlowup);
  auto t = uniform_state(8, {0.1, 0.0});
  t.p[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(integ.step(t, 0.01), NumericalBlowup);
}

TEST(Run, QuietStartInstability) {
  auto c = small(4096);
  const auto r = run(c);
  const auto& d = r.diagnostics;
  EXPECT_NEAR(d.growth_rate_fit / oracle::linear_growth_rate(), 1.0, 0.05);
  ASSERT_TRUE(d.saturated);
  EXPECT_GE(d.sat_peak, 0.7);
  EXPECT_LE(d.sat_peak, 1.6);
  EXPECT_GT(d.bunching_at_sat, 0.5);
  EXPECT_LT(d.conserved_drift, 1e-8);
  ASSERT_TRUE(r.peak_state);
  EXPECT_NEAR(r.peak_state->amplitude(), d.sat_peak, 0.0);
  EXPECT_NEAR(r.trajectory.back().tau, 30.0, 1e-12);
}

TEST(Run, RandomPhaseGrowthApproachesLinearRate) {
  const double target = oracle::linear_growth_rate();
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n : {1024u, 4096u, 16384u}) {
    auto c = small(n, InitMode::uniform_random);
    c.tau_end = 15;
    const double dev = std::abs(run(c).diagnostics.growth_rate_fit - target);
    EXPECT_LT(dev, prev) << "N = " << n;
    prev = dev;
  }
}

TEST(Run, RecordsEveryStride) {
  auto c = small(64);
  c.tau_end = 1.05;
  c.record_stride = 10;
  const auto r = run(c);
  ASSERT_EQ(r.trajectory.size(), 12u);  // tau = 0, 0.1 ... 1.0, 1.05
  EXPECT_NEAR(r.trajectory[1].tau, 0.1, 1e-15);
  EXPECT_NEAR(r.trajectory.back().tau, 1.05, 1e-15);
}

TEST(Polar, AgreesWithComplexForm) {
  auto c = small(1024);
  c.tau_end = 10;
  EXPECT_LT(polar_equivalence(c), 1e-6);
}

TEST(Polar, SingularBelowFloor) {
  PolarState s{{0.0, 1.0}, {0.0, 0.0}, 0.0, 0.0, 0.0};
  EXPECT_THROW(polar_derivative(s), RangeError);
  s.A0 = 1e-10;
  EXPECT_THROW(polar_step(s, 0.01), RangeError);
}

TEST(PhysicalReadout, ScalesAndValidity) {
  RigidRotor rotor = water_rotor();
  SystemParams p;
  p.rho = 1.2732e17;
  p.P_z = 4.9e-7;
  p.rotor = rotor;
  const auto g = gain_coefficients(p);
  EnsembleState s{{0.0, 1.0}, {-2.0, 1.0}, {1.0, 0.0}, 1.0};
  const auto r = physical_readout(s, g, rotor, 30);
  EXPECT_NEAR(r.A0 / 5.1e-13, 1.0, 0.1);
  EXPECT_EQ(r.t, g.t_gain);
  EXPECT_NEAR(r.theta_dot_max, 2.0 / g.t_gain, 1e-6 / g.t_gain);
  EXPECT_LT(r.L_min, r.L_max);
  EXPECT_NEAR(r.L_max, rotor.I_ave * 5 * (rotor.omega_c + 1.0 / g.t_gain), 1e-12 * r.L_max);
  EXPECT_FALSE(r.validity_warning);
  s.p[0] = 1e-2 * rotor.omega_c * g.t_gain * 2;
  EXPECT_TRUE(physical_readout(s, g, rotor, 30).validity_warning);
  p.P_z = 0;
  EXPECT_THROW(physical_readout(s, gain_coefficients(p), rotor, 30), InvalidArgument);
}

}  // namespace
