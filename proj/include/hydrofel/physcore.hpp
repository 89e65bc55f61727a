#pragma once

// Two-level rigid-rotor model of a water molecule: derived constants,
// rotational ladder, thermal populations, and a spherical quadrature used
// as an independent oracle for dipole matrix elements.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "hydrofel/constants.hpp"
#include "hydrofel/errors.hpp"

namespace hydrofel {

struct RigidRotor {
  double d_g;          // m, proton-axis geometry length
  double d_e;          // m, dipole length
  double I_ave;        // kg m^2
  double E_split;      // J, gap between l = 0 and l = 1
  double omega_c;      // rad / s
  double l_c;          // m, resonant wavelength
  double d0;           // C m
  double d0_tilde;     // C m, truncated dipole amplitude
};

inline RigidRotor build_rotor(const PhysicalConstants& k, double d_g, double d_e) {
  if (!(d_g > 0) || !(d_e > 0))
    throw InvalidArgument("build_rotor: d_g and d_e must be positive");
  if (!k.all_positive())
    throw InvalidArgument("build_rotor: physical constants must be positive");
  RigidRotor r{};
  r.d_g = d_g;
  r.d_e = d_e;
  r.I_ave = 2.0 * k.m_p * d_g * d_g;
  r.E_split = k.hbar * k.hbar / r.I_ave;
  r.omega_c = r.E_split / k.hbar;
  r.l_c = 2.0 * pi * k.c / r.omega_c;
  r.d0 = 2.0 * k.e_charge * d_e;
  r.d0_tilde = r.d0 * std::sqrt(2.0 / 3.0);
  return r;
}

// Rotor with the standard water geometry (0.82 A, 0.2 A).
inline RigidRotor water_rotor(const PhysicalConstants& k = codata2018) {
  return build_rotor(k, 0.82 * angstrom, 0.2 * angstrom);
}

// Splitting expressed as an angular wavenumber E/(hbar c), in cm^-1.
inline double split_wavenumber_per_cm(const RigidRotor& r,
                                      const PhysicalConstants& k = codata2018) {
  return r.E_split / (k.hbar * k.c) / 100.0;
}

// Rigid-rotor ladder E_l = E l(l+1)/2, so that E_1 - E_0 is the splitting.
inline double rotational_level_energy(const RigidRotor& r, int l) {
  if (l < 0) throw InvalidArgument("rotational_level_energy: l must be >= 0");
  return r.E_split * 0.5 * static_cast<double>(l) * static_cast<double>(l + 1);
}

// Per-state Boltzmann ratio relative to |0,0> (no 2l+1 degeneracy weight).
inline double population_ratio(const RigidRotor& r, int l, double T,
                               const PhysicalConstants& k = codata2018) {
  if (!(T > 0)) throw InvalidArgument("population_ratio: T must be > 0");
  return std::exp(-rotational_level_energy(r, l) / (k.k_B * T));
}

struct ThermalInversion {
  double delta_n;       // (n/2) tanh(E / 2 k_B T)
  double half_gap_kT;   // E / (2 k_B T)
};

inline ThermalInversion thermal_inversion(const RigidRotor& r, double n, double T,
                                          const PhysicalConstants& k = codata2018) {
  if (!(n >= 1)) throw InvalidArgument("thermal_inversion: n must be >= 1");
  if (!(T > 0)) throw InvalidArgument("thermal_inversion: T must be > 0");
  const double x = r.E_split / (2.0 * k.k_B * T);
  return {0.5 * n * std::tanh(x), x};
}

struct ThermalPopulation {
  double temperature;
  std::vector<double> ratios;  // R_l, l = 0..l_max
  double delta_n_thermal;
};

inline ThermalPopulation thermal_population(const RigidRotor& r, double n, double T,
                                            int l_max,
                                            const PhysicalConstants& k = codata2018) {
  if (l_max < 0) throw InvalidArgument("thermal_population: l_max must be >= 0");
  ThermalPopulation p{T, {}, thermal_inversion(r, n, T, k).delta_n};
  p.ratios.reserve(static_cast<std::size_t>(l_max) + 1);
  for (int l = 0; l <= l_max; ++l) p.ratios.push_back(population_ratio(r, l, T, k));
  return p;
}

// ---------------------------------------------------------------------------
// Spherical quadrature: Gauss-Legendre in cos(theta) times a uniform
// trapezoid in phi. The trapezoid is exact for trigonometric polynomials of
// degree < phi_points, Gauss-Legendre for polynomials of degree
// < 2 * gl_nodes; every l <= 2 matrix-element integrand is covered.

struct SphereQuadrature {
  std::vector<double> mu;       // cos(theta) nodes
  std::vector<double> weight;   // Gauss-Legendre weights on [-1, 1]
  std::size_t phi_points = 0;

  std::size_t gl_nodes() const { return mu.size(); }
};

namespace detail {

// Newton iteration on P_n with the Tricomi initial guess.
inline void gauss_legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double nn = static_cast<double>(n);
  // Returns P_n(z) and stores P_{n-1}(z) in prev.
  auto legendre = [n](double z, double& prev) {
    double p0 = 1.0, p1 = z;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    prev = p0;
    return p1;
  };
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    for (int it = 0; it < 100; ++it) {
      double prev = 0.0;
      const double p = legendre(z, prev);
      const double dz = p / (nn * (z * p - prev) / (z * z - 1.0));
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double prev = 0.0;
    const double p = legendre(z, prev);
    const double dp = nn * (z * p - prev) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace detail

inline SphereQuadrature make_sphere_quadrature(std::size_t gl_nodes = 24,
                                               std::size_t phi_points = 48) {
  if (gl_nodes < 2 || phi_points < 4)
    throw InvalidArgument("make_sphere_quadrature: orders too small");
  SphereQuadrature q;
  detail::gauss_legendre(gl_nodes, q.mu, q.weight);
  q.phi_points = phi_points;
  return q;
}

inline const SphereQuadrature& default_sphere_quadrature() {
  static const SphereQuadrature q = make_sphere_quadrature();
  return q;
}

// Integral over the unit sphere of f(theta, phi) dOmega.
template <class F>
auto integrate_sphere(const SphereQuadrature& q, F&& f) {
  using R = decltype(f(0.0, 0.0));
  R sum{};
  const double dphi = 2.0 * pi / static_cast<double>(q.phi_points);
  for (std::size_t i = 0; i < q.mu.size(); ++i) {
    const double theta = std::acos(q.mu[i]);
    R ring{};
    for (std::size_t j = 0; j < q.phi_points; ++j)
      ring += f(theta, dphi * static_cast<double>(j));
    sum += ring * (q.weight[i] * dphi);
  }
  return sum;
}

// Y_{l,m}(theta, phi) with the Condon-Shortley phase.
inline std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l)
    throw InvalidArgument("spherical_harmonic: need l >= 0 and |m| <= l");
  const int am = std::abs(m);
  const double y = std::sph_legendre(static_cast<unsigned>(l), static_cast<unsigned>(am), theta);
  std::complex<double> v = y * std::polar(1.0, am * phi);
  if (m < 0) v = ((am % 2) ? -1.0 : 1.0) * std::conj(v);
  return v;
}

// Direction cosine of the unit vector (theta, phi) along body axis 1, 2, 3.
inline double direction_cosine(int axis, double theta, double phi) {
  switch (axis) {
    case 1: return std::sin(theta) * std::cos(phi);
    case 2: return std::sin(theta) * std::sin(phi);
    case 3: return std::cos(theta);
    default: throw InvalidArgument("direction_cosine: axis must be 1, 2 or 3");
  }
}

// <l1,m1| axis cosine |l2,m2> in units of d0, by quadrature.
inline std::complex<double> dipole_matrix_element(int l1, int m1, int l2, int m2, int axis,
                                                  const SphereQuadrature& q =
                                                      default_sphere_quadrature()) {
  auto valid = [](int l, int m) { return (l == 0 || l == 1) && std::abs(m) <= l; };
  if (!valid(l1, m1) || !valid(l2, m2))
    throw InvalidArgument("dipole_matrix_element: need l in {0,1} and |m| <= l");
  if (axis < 1 || axis > 3)
    throw InvalidArgument("dipole_matrix_element: axis must be 1, 2 or 3");
  return integrate_sphere(q, [&](double th, double ph) {
    return std::conj(spherical_harmonic(l1, m1, th, ph)) * direction_cosine(axis, th, ph) *
           spherical_harmonic(l2, m2, th, ph);
  });
}

}  // namespace hydrofel
