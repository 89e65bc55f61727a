#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "hydrofel/physcore.hpp"
#include "oracles.hpp"

using namespace hydrofel;

namespace {

TEST(Constants, AllPositive) { EXPECT_TRUE(codata2018.all_positive()); }

TEST(BuildRotor, DerivedFields) {
  const auto r = water_rotor();
  // 2 m_p d_g^2 with CODATA 2018 m_p, computed by hand: 2.2493419629783e-47.
  EXPECT_NEAR(r.I_ave, 2.2493419629783e-47, 1e-58);
  EXPECT_DOUBLE_EQ(r.I_ave, 2.0 * codata2018.m_p * r.d_g * r.d_g);
  EXPECT_DOUBLE_EQ(r.E_split, codata2018.hbar * codata2018.hbar / r.I_ave);
  EXPECT_DOUBLE_EQ(r.omega_c, r.E_split / codata2018.hbar);
  EXPECT_DOUBLE_EQ(r.d0, 2.0 * codata2018.e_charge * 0.2e-10);
  EXPECT_NEAR(r.d0_tilde / r.d0, 0.82, 0.005);
  EXPECT_NEAR(r.omega_c * r.l_c, 2.0 * pi * codata2018.c, 1e-15 * 2.0 * pi * codata2018.c);
}

TEST(BuildRotor, PublishedSpectroscopicValues) {
  const auto r = water_rotor();
  EXPECT_NEAR(split_wavenumber_per_cm(r), 160.0, 0.03 * 160.0);
  EXPECT_NEAR(r.l_c, 400e-6, 0.05 * 400e-6);
}

TEST(BuildRotor, RejectsNonPositiveLengths) {
  EXPECT_THROW(build_rotor(codata2018, 0.0, 0.2e-10), InvalidArgument);
  EXPECT_THROW(build_rotor(codata2018, 0.82e-10, -1.0), InvalidArgument);
}

TEST(RotationalLevels, Ladder) {
  const auto r = water_rotor();
  EXPECT_EQ(rotational_level_energy(r, 0), 0.0);
  EXPECT_DOUBLE_EQ(rotational_level_energy(r, 1), r.E_split);
  EXPECT_DOUBLE_EQ(rotational_level_energy(r, 3), 6.0 * r.E_split);
  for (int l = 0; l < 10; ++l)
    EXPECT_LT(rotational_level_energy(r, l), rotational_level_energy(r, l + 1));
  EXPECT_THROW(rotational_level_energy(r, -1), InvalidArgument);
}

TEST(PopulationRatio, RoomTemperatureTable) {
  const auto r = water_rotor();
  const double published[] = {1.0, 0.89, 0.70, 0.49, 0.30, 0.17};
  for (int l = 0; l <= 5; ++l) EXPECT_NEAR(population_ratio(r, l, 300.0), published[l], 0.01) << l;
  EXPECT_EQ(population_ratio(r, 0, 300.0), 1.0);
  EXPECT_THROW(population_ratio(r, 1, 0.0), InvalidArgument);
  EXPECT_THROW(population_ratio(r, 1, -5.0), InvalidArgument);
}

TEST(PopulationRatio, DegeneracyWeightedReadingFails) {
  // Weighting by 2l+1 gives R_1 = 3 * 0.89, nowhere near the table.
  const auto r = water_rotor();
  EXPECT_GT(3.0 * population_ratio(r, 1, 300.0), 1.3);
}

TEST(ThermalPopulation, StrictlyDecreasing) {
  const auto r = water_rotor();
  for (double T : {10.0, 77.0, 300.0, 1000.0}) {
    const auto p = thermal_population(r, 30, T, 8);
    ASSERT_EQ(p.ratios.size(), 9u);
    EXPECT_EQ(p.ratios[0], 1.0);
    for (std::size_t l = 1; l < p.ratios.size(); ++l) EXPECT_LT(p.ratios[l], p.ratios[l - 1]);
    EXPECT_GE(p.delta_n_thermal, 0.0);
    EXPECT_LE(p.delta_n_thermal, 15.0);
  }
}

TEST(ThermalInversion, PublishedValues) {
  const auto r = water_rotor();
  const auto t = thermal_inversion(r, 30, 300.0);
  EXPECT_NEAR(t.delta_n, 0.9, 0.05);
  EXPECT_NEAR(t.half_gap_kT, 0.06, 0.005);
  EXPECT_NEAR(thermal_inversion(r, 30, 1e9).delta_n, 0.0, 1e-6);
}

TEST(ThermalInversion, MonotoneInTemperatureLinearInN) {
  const auto r = water_rotor();
  double prev = 1e300;
  for (double T = 1.0; T < 5000.0; T *= 1.5) {
    const double v = thermal_inversion(r, 30, T).delta_n;
    EXPECT_LT(v, prev);
    prev = v;
  }
  for (double n : {1.0, 7.0, 35.0})
    EXPECT_NEAR(thermal_inversion(r, n, 300).delta_n, n * thermal_inversion(r, 1, 300).delta_n,
                1e-14 * n);
  EXPECT_THROW(thermal_inversion(r, 0.5, 300), InvalidArgument);
  EXPECT_THROW(thermal_inversion(r, 30, 0), InvalidArgument);
}

TEST(Quadrature, GaussLegendreIntegratesPolynomials) {
  const auto q = make_sphere_quadrature(12, 16);
  double s = 0;
  for (std::size_t i = 0; i < q.gl_nodes(); ++i) s += q.weight[i];
  EXPECT_NEAR(s, 2.0, 1e-14);
  // Integral of x^22 over [-1, 1] is 2/23.
  double m = 0;
  for (std::size_t i = 0; i < q.gl_nodes(); ++i) m += q.weight[i] * std::pow(q.mu[i], 22);
  EXPECT_NEAR(m, 2.0 / 23.0, 1e-14);
}

TEST(Quadrature, OrthonormalHarmonicsUpToL2) {
  const auto& q = default_sphere_quadrature();
  for (int l1 = 0; l1 <= 2; ++l1)
    for (int m1 = -l1; m1 <= l1; ++m1)
      for (int l2 = 0; l2 <= 2; ++l2)
        for (int m2 = -l2; m2 <= l2; ++m2) {
          const auto v = integrate_sphere(q, [&](double th, double ph) {
            return std::conj(spherical_harmonic(l1, m1, th, ph)) * spherical_harmonic(l2, m2, th, ph);
          });
          const double expect = (l1 == l2 && m1 == m2) ? 1.0 : 0.0;
          EXPECT_NEAR(std::abs(v - expect), 0.0, 1e-12) << l1 << m1 << l2 << m2;
        }
}

TEST(Quadrature, HarmonicsMatchHandWrittenForms) {
  for (int l = 0; l <= 1; ++l)
    for (int m = -l; m <= l; ++m)
      for (double th : {0.1, 1.0, 2.5})
        for (double ph : {0.0, 0.7, 4.0})
          EXPECT_NEAR(std::abs(spherical_harmonic(l, m, th, ph) - oracle::Y(l, m, th, ph)), 0.0,
                      1e-14);
}

TEST(DipoleMatrixElement, AnalyticValues) {
  const double r6 = 1.0 / std::sqrt(6.0), r3 = 1.0 / std::sqrt(3.0);
  auto near = [](std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9; };
  EXPECT_TRUE(near(dipole_matrix_element(1, 1, 0, 0, 1), {-r6, 0}));
  EXPECT_TRUE(near(dipole_matrix_element(1, 1, 0, 0, 2), {0, r6}));
  EXPECT_TRUE(near(dipole_matrix_element(1, 1, 0, 0, 3), {0, 0}));
  EXPECT_TRUE(near(dipole_matrix_element(1, -1, 0, 0, 1), {r6, 0}));
  EXPECT_TRUE(near(dipole_matrix_element(1, -1, 0, 0, 2), {0, r6}));
  EXPECT_TRUE(near(dipole_matrix_element(1, 0, 0, 0, 3), {r3, 0}));
  EXPECT_TRUE(near(dipole_matrix_element(1, 0, 0, 0, 1), {0, 0}));
  EXPECT_TRUE(near(dipole_matrix_element(0, 0, 0, 0, 3), {0, 0}));
  // Hermiticity: <g|d|e> = conj(<e|d|g>).
  for (int ax = 1; ax <= 3; ++ax)
    EXPECT_TRUE(near(dipole_matrix_element(0, 0, 1, 1, ax),
                     std::conj(dipole_matrix_element(1, 1, 0, 0, ax))));
}

TEST(DipoleMatrixElement, AgreesWithBruteForceMidpoint) {
  for (int l1 = 0; l1 <= 1; ++l1)
    for (int m1 = -l1; m1 <= l1; ++m1)
      for (int ax = 1; ax <= 3; ++ax) {
        const auto ref = oracle::midpoint_sphere([&](double th, double ph) {
          const double cosine = ax == 1   ? std::sin(th) * std::cos(ph)
                                : ax == 2 ? std::sin(th) * std::sin(ph)
                                          : std::cos(th);
          return std::conj(oracle::Y(l1, m1, th, ph)) * cosine * oracle::Y(0, 0, th, ph);
        });
        // Midpoint error ~ (pi/2000)^2 / 24 relative.
        EXPECT_NEAR(std::abs(dipole_matrix_element(l1, m1, 0, 0, ax) - ref), 0.0, 1e-6);
      }
}

TEST(DipoleMatrixElement, RejectsOutOfRange) {
  EXPECT_THROW(dipole_matrix_element(2, 0, 0, 0, 3), InvalidArgument);
  EXPECT_THROW(dipole_matrix_element(1, 2, 0, 0, 3), InvalidArgument);
  EXPECT_THROW(dipole_matrix_element(0, 1, 0, 0, 3), InvalidArgument);
  EXPECT_THROW(dipole_matrix_element(1, 0, 0, 0, 4), InvalidArgument);
}

}  // namespace
