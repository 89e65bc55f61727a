#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hydrofel/scaling.hpp"

using namespace hydrofel;

namespace {

SystemParams axon_params() {
  SystemParams p;
  p.rho = 1.2732e17;
  p.P_z = 4.9e-7;
  p.rotor = water_rotor();
  return p;
}

// Hand arithmetic with literal constants, independent of the rotor builder.
struct HandOracle {
  double hbar = 1.054571817e-34, c = 2.99792458e8, mp = 1.67262192369e-27;
  double e = 1.602176634e-19, mu0 = 1.25663706212e-6;
  double I = 2 * mp * 0.82e-10 * 0.82e-10;
  double w = hbar / I;
  double dt = 2 * e * 0.2e-10 * std::sqrt(2.0 / 3.0);
  double n = 30, dn = 18.6;
  double Ka = std::sqrt(3.0) * dn * w * dt / (n * I);
  double Kb = mu0 * c * c * dn * dt / (2 * std::sqrt(3.0));
  double c_A() const { return std::pow(2 * Kb * Kb / Ka, 1.0 / 3.0); }
  double c_t() const { return std::pow(2 / (Ka * Kb), 1.0 / 3.0); }
};

TEST(UniversalPrefactors, MatchPublishedValues) {
  const auto u = universal_prefactors(water_rotor(), 30, solvation_inversion(30, 0.62));
  EXPECT_NEAR(u.c_A / 2.6e-22, 1.0, 0.05);
  EXPECT_NEAR(u.c_t / 8.1e-5, 1.0, 0.05);
}

TEST(UniversalPrefactors, AgreeWithHandArithmetic) {
  const HandOracle h;
  const auto u = universal_prefactors(water_rotor(), 30, 18.6);
  EXPECT_NEAR(u.c_A / h.c_A(), 1.0, 1e-8);
  EXPECT_NEAR(u.c_t / h.c_t(), 1.0, 1e-8);
  EXPECT_NEAR(h.c_A(), 2.581e-22, 0.001e-22);
  EXPECT_NEAR(h.c_t(), 8.134e-5, 0.001e-5);
}

TEST(UniversalPrefactors, MatchGainCoefficientsPath) {
  auto p = axon_params();
  const auto g = gain_coefficients(p);
  const auto u = universal_prefactors(p.rotor, p.n, p.delta_n_bar);
  EXPECT_NEAR(g.c_A / u.c_A, 1.0, 1e-12);
  EXPECT_NEAR(g.c_t / u.c_t, 1.0, 1e-12);
  const double t_from_prefactor = u.c_t / (std::cbrt(p.rho) * std::cbrt(p.P_z * p.P_z));
  EXPECT_NEAR(g.t_gain / t_from_prefactor, 1.0, 1e-12);
}

TEST(GainCoefficients, AxonScenario) {
  const auto g = gain_coefficients(axon_params());
  EXPECT_NEAR(g.A_sat / 5.1e-13, 1.0, 0.10);
  EXPECT_NEAR(g.t_gain / 2.6e-6, 1.0, 0.10);
  EXPECT_TRUE(g.usable());
}

TEST(GainCoefficients, ZeroPolarizationSwitchesMechanismOff) {
  auto p = axon_params();
  p.P_z = 0;
  const auto g = gain_coefficients(p);
  EXPECT_TRUE(g.mechanism_off);
  EXPECT_EQ(g.A_sat, 0.0);
  EXPECT_TRUE(std::isinf(g.t_gain));
  EXPECT_FALSE(g.usable());
  EXPECT_THROW(to_physical(1.0, 1.0, g), InvalidArgument);
  EXPECT_THROW(to_dimensionless(1.0, 1.0, g), InvalidArgument);
}

TEST(GainCoefficients, BetaLinearInRho) {
  auto p = axon_params();
  const auto a = alpha_beta(p);
  p.rho *= 2;
  const auto b = alpha_beta(p);
  EXPECT_NEAR(b.beta / a.beta, 2.0, 1e-14);
  EXPECT_DOUBLE_EQ(b.alpha, a.alpha);
}

TEST(GainCoefficients, PowerLawExponents) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> lr(15.0, 19.0), lp(-9.0, -2.0);
  const double eps = 1e-3;
  for (int k = 0; k < 10; ++k) {
    auto p = axon_params();
    p.rho = std::pow(10.0, lr(gen));
    p.P_z = std::pow(10.0, lp(gen));
    const auto g0 = gain_coefficients(p);
    auto pr = p;
    pr.rho *= std::exp(eps);
    auto pp = p;
    pp.P_z *= std::exp(eps);
    const auto gr = gain_coefficients(pr), gp = gain_coefficients(pp);
    EXPECT_NEAR(std::log(gr.A_sat / g0.A_sat) / eps, 2.0 / 3.0, 1e-10);
    EXPECT_NEAR(std::log(gp.A_sat / g0.A_sat) / eps, 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(std::log(gr.t_gain / g0.t_gain) / eps, -1.0 / 3.0, 1e-10);
    EXPECT_NEAR(std::log(gp.t_gain / g0.t_gain) / eps, -2.0 / 3.0, 1e-10);
  }
}

TEST(UnitConversion, RoundTrip) {
  const auto g = gain_coefficients(axon_params());
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 100; ++k) {
    const double a = u(gen), t = u(gen);
    const auto [A, T] = to_physical(a, t, g);
    const auto [a2, t2] = to_dimensionless(A, T, g);
    EXPECT_NEAR(a2, a, 1e-14 * std::max(1.0, a));
    EXPECT_NEAR(t2, t, 1e-14 * std::max(1.0, t));
  }
  const auto [A1, T1] = to_physical(1.0, 1.0, g);
  EXPECT_EQ(A1, g.A_sat);
  EXPECT_EQ(T1, g.t_gain);
}

TEST(SystemParams, Validation) {
  auto p = axon_params();
  p.rho = 0;
  EXPECT_THROW(alpha_beta(p), InvalidArgument);
  p = axon_params();
  p.P_z = 0.5;
  EXPECT_THROW(alpha_beta(p), InvalidArgument);
  p = axon_params();
  p.delta_n_bar = 31;
  EXPECT_THROW(alpha_beta(p), InvalidArgument);
  EXPECT_THROW(saturation_scales(GainPair{-1.0, 1.0}, 1.0, 1.0), InvalidArgument);
}

}  // namespace
