#pragma once

// Self-checks of the two-level algebra and the quadrature oracle, run by the
// `verify` subcommand. Each check compares two independent evaluations.

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "hydrofel/mixing.hpp"
#include "hydrofel/physcore.hpp"
#include "hydrofel/spinstates.hpp"

namespace hydrofel {

struct CheckResult {
  std::string name;
  double deviation;
  double tolerance;
  bool passed() const { return deviation <= tolerance; }
};

inline std::vector<CheckResult> run_verification(std::uint64_t seed = 7) {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, double dev, double tol) {
    out.push_back({std::move(name), dev, tol});
  };

  // Dipole matrix elements.
  const double r6 = 1.0 / std::sqrt(6.0), r3 = 1.0 / std::sqrt(3.0);
  add("<1,1|e1|0,0> = -1/sqrt6",
      std::abs(dipole_matrix_element(1, 1, 0, 0, 1) - std::complex<double>(-r6, 0)), 1e-9);
  add("<1,1|e2|0,0> = i/sqrt6",
      std::abs(dipole_matrix_element(1, 1, 0, 0, 2) - std::complex<double>(0, r6)), 1e-9);
  add("<1,0|e3|0,0> = 1/sqrt3",
      std::abs(dipole_matrix_element(1, 0, 0, 0, 3) - std::complex<double>(r3, 0)), 1e-9);
  add("<1,1|e3|0,0> = 0", std::abs(dipole_matrix_element(1, 1, 0, 0, 3)), 1e-9);
  add("<1,0|e1|0,0> = 0", std::abs(dipole_matrix_element(1, 0, 0, 0, 1)), 1e-9);

  // su(2) algebra.
  const auto s = energy_spins();
  const std::complex<double> I{0, 1};
  auto max_diff = [](const Mat2& a, const Mat2& b) {
    double m = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
    return m;
  };
  double comm = 0;
  for (int a = 1; a <= 3; ++a) {
    const int b = a % 3 + 1, c = b % 3 + 1;
    comm = std::max(comm, max_diff(s[a] * s[b] - s[b] * s[a], I * s[c]));
  }
  add("[s^i, s^j] = i eps_ijk s^k", comm, 1e-14);

  // Superradiant pair norms and free energy.
  const auto rotor = water_rotor();
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * pi);
  double norm_dev = 0, overlap_dev = 0, energy_dev = 0;
  const auto h = truncated_free_hamiltonian(1.0);
  for (int k = 0; k < 100; ++k) {
    const auto p = superradiant_pair(ang(gen), ang(gen));
    norm_dev = std::max({norm_dev, std::abs(std::norm(p.psi_g[0]) + std::norm(p.psi_g[1]) - 2.0 / 3),
                         std::abs(std::norm(p.psi_e[0]) + std::norm(p.psi_e[1]) - 2.0 / 3)});
    overlap_dev = std::max(overlap_dev, std::abs(std::abs(inner(p.psi_g, p.psi_e)) - 1.0 / 3));
    energy_dev = std::max({energy_dev, std::abs(expectation(p.psi_g, h) + 1.0 / 6),
                           std::abs(expectation(p.psi_e, h) + 1.0 / 6)});
  }
  add("|psi|^2 = 2/3", norm_dev, 1e-14);
  add("|<psi_g|psi_e>| = 1/3", overlap_dev, 1e-14);
  add("<H_free> = -E/6 per state", energy_dev, 1e-14);

  // Ponderomotive term: frame construction vs closed form.
  std::uniform_real_distribution<double> amp(0.1, 10.0), xi1d(0.0, pi);
  double rel = 0, neg = 0, xi1_dev = 0;
  for (int k = 0; k < 1000; ++k) {
    const double A0 = amp(gen), phi0 = ang(gen), th = ang(gen), de = ang(gen);
    const double x1 = xi1d(gen), x2 = ang(gen);
    const auto f = make_frame(x1, x2);
    const double num = ponderomotive_term(A0, phi0, th, de, f, rotor, Branch::ground);
    const double ref = ponderomotive_closed_form(A0, phi0, th, de, x2, rotor, Branch::ground);
    const double scale = A0 * rotor.omega_c * rotor.d0_tilde;
    rel = std::max(rel, std::abs(num - ref) / scale);
    const double num_e = ponderomotive_term(A0, phi0, th, de, f, rotor, Branch::excited);
    neg = std::max(neg, std::abs(num_e + num) / scale);
    const double other = ponderomotive_term(A0, phi0, th, de, make_frame(xi1d(gen), x2), rotor,
                                            Branch::ground);
    xi1_dev = std::max(xi1_dev, std::abs(other - num) / scale);
  }
  add("ponderomotive term: frame vs closed form", rel, 1e-12);
  add("ponderomotive term: excited = -ground", neg, 1e-12);
  add("ponderomotive term: independent of xi1", xi1_dev, 1e-12);
  const auto f0 = make_frame(0.0, 0.0);
  const double unit = ponderomotive_term(1.0, pi / 2, 0.0, 0.0, f0, rotor, Branch::ground) /
                      (rotor.omega_c * rotor.d0_tilde);
  add("coupling factor 1/(2 sqrt3)", std::abs(unit - 1.0 / (2.0 * std::sqrt(3.0))), 1e-14);

  // Polarization: weighted form vs closed form.
  double pz = 0;
  std::uniform_real_distribution<double> al(-pi, pi), wd(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = al(gen), w_plus = wd(gen) / 3.0;
    pz = std::max(pz, std::abs(permanent_polarization(a, w_plus, 1.0 - 3.0 * w_plus) -
                               permanent_polarization_closed_form(a)));
  }
  add("P_z weighted form = sin(2a)/(3 sqrt3)", pz, 1e-12);
  return out;
}

}  // namespace hydrofel
