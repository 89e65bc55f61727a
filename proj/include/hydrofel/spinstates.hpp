#pragma once

// Energy-spin algebra of the truncated two-level space and the per-molecule
// ponderomotive coupling it produces.
//
// Basis ordering is (|e>, |g>) throughout: index 0 is the excited state
// |1,1>, index 1 the ground state |0,0>.

#include <array>
#include <cmath>
#include <complex>

#include "hydrofel/errors.hpp"
#include "hydrofel/mixing.hpp"
#include "hydrofel/physcore.hpp"

namespace hydrofel {

using cdouble = std::complex<double>;
using Spinor = std::array<cdouble, 2>;
using Mat2 = std::array<std::array<cdouble, 2>, 2>;
using Vec3 = std::array<double, 3>;

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] - b[i][j];
  return r;
}

inline Mat2 operator*(cdouble s, const Mat2& a) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = s * a[i][j];
  return r;
}

inline cdouble inner(const Spinor& a, const Spinor& b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

// <a|M|a>, real part; amplitudes are not normalized.
inline double expectation(const Spinor& a, const Mat2& m) {
  Spinor ma{m[0][0] * a[0] + m[0][1] * a[1], m[1][0] * a[0] + m[1][1] * a[1]};
  return std::real(inner(a, ma));
}

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

struct SpinOperators {
  Mat2 s1, s2, s3;

  const Mat2& operator[](int axis) const {
    switch (axis) {
      case 1: return s1;
      case 2: return s2;
      case 3: return s3;
      default: throw InvalidArgument("SpinOperators: axis must be 1, 2 or 3");
    }
  }
};

inline SpinOperators energy_spins() {
  const cdouble i{0.0, 1.0};
  SpinOperators s;
  // s1 = (|e><g| + |g><e|)/2, s2 = (|e><g| - |g><e|)/(2i), s3 = (|e><e| - |g><g|)/2
  s.s1 = {{{0.0, 0.5}, {0.5, 0.0}}};
  s.s2 = {{{0.0, 0.5 / i}, {-0.5 / i, 0.0}}};
  s.s3 = {{{0.5, 0.0}, {0.0, -0.5}}};
  return s;
}

enum class Branch { ground, excited };

inline double branch_sign(Branch b) { return b == Branch::ground ? 1.0 : -1.0; }

// Truncated superradiant states of one molecule, kept unnormalized
// (|psi|^2 = 2/3) as the 1/(2 sqrt 3) coupling depends on it.
struct SuperradiantPair {
  double theta1, theta2;
  Spinor psi_g, psi_e;

  const Spinor& state(Branch b) const { return b == Branch::ground ? psi_g : psi_e; }
};

inline SuperradiantPair superradiant_pair(double theta1, double theta2) {
  const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);
  SuperradiantPair p{theta1, theta2, {}, {}};
  p.psi_g = {r2 * r3 * std::polar(1.0, theta1), -r2 * std::polar(1.0, theta2)};
  p.psi_e = {r2 * r3 * std::polar(1.0, -theta2), r2 * std::polar(1.0, -theta1)};
  return p;
}

inline double spin_expectation(const SuperradiantPair& pair, Branch which, int axis) {
  return expectation(pair.state(which), energy_spins()[axis]);
}

// Free Hamiltonian on the truncated space, diag(E/2, -E/2) over (|e>, |g>).
inline Mat2 truncated_free_hamiltonian(double E_split) {
  return {{{0.5 * E_split, 0.0}, {0.0, -0.5 * E_split}}};
}

// Molecular frame (e1, e2, e3) as rows of R_x(xi2) R_z(xi1) applied to the
// lab frame; e3.ez = cos xi2.
struct Frame {
  double xi1;
  double xi2;
  Vec3 e1, e2, e3;
  // Axes after the first rotation only: (e_x', e_y', e_z).
  Vec3 ex_p, ey_p, ez;
};

inline Frame make_frame(double xi1, double xi2) {
  using Mat3 = std::array<Vec3, 3>;
  const double c1 = std::cos(xi1), s1 = std::sin(xi1);
  const double c2 = std::cos(xi2), s2 = std::sin(xi2);
  const Mat3 rz{{{c1, -s1, 0.0}, {s1, c1, 0.0}, {0.0, 0.0, 1.0}}};
  const Mat3 rx{{{1.0, 0.0, 0.0}, {0.0, c2, -s2}, {0.0, s2, c2}}};
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m[i][j] += rx[i][k] * rz[k][j];
  return {xi1, xi2, m[0], m[1], m[2], rz[0], rz[1], rz[2]};
}

// Field vector A0 (cos phi0, -sin phi0, 0) plus an optional axial part.
inline Vec3 field_vector(double A0, double phi0, double A_z = 0.0) {
  return {A0 * std::cos(phi0), -A0 * std::sin(phi0), A_z};
}

namespace detail {

inline const SpinOperators& energy_spins_cached() {
  static const SpinOperators s = energy_spins();
  return s;
}

// Spin expectations along the frame axes e1, e2. The state phases are
// referred to the once-rotated axes (x', y'), which shifts the relative
// phase by xi1; the axial component carries no oscillating part.
inline std::array<double, 2> frame_spin(const Frame& f, double theta, double delta,
                                        Branch which) {
  const auto pair = superradiant_pair(0.0, theta + delta + f.xi1);
  const auto& s = energy_spins_cached();
  const Vec3 spin_p{expectation(pair.state(which), s.s1), expectation(pair.state(which), s.s2),
                    0.0};
  // Components of spin_p are along (x', y', z); express e1, e2 there.
  auto along = [&](const Vec3& axis) {
    const Vec3 in_primed{dot(axis, f.ex_p), dot(axis, f.ey_p), dot(axis, f.ez)};
    return dot(in_primed, spin_p);
  };
  return {along(f.e1), along(f.e2)};
}

}  // namespace detail

// -A . <psi| e1 d1' + e2 d2' |psi> for a single molecule, assembled from the
// explicit frame vectors, the spin precession d s1/dt = -w s2,
// d s2/dt = w s1, and 2x2 spin expectations. Energy units (J) when A0 is a
// vector potential in V s / m.
inline double ponderomotive_term(double A0, double phi0, double theta, double delta,
                                 const Frame& frame, const RigidRotor& rotor, Branch which,
                                 double A_z = 0.0) {
  if (!(A0 >= 0)) throw InvalidArgument("ponderomotive_term: A0 must be >= 0");
  const Vec3 A = field_vector(A0, phi0, A_z);
  const auto s = detail::frame_spin(frame, theta, delta, which);
  // d = -d0~ (e1 s1 + e2 s2)  =>  d1' = d0~ w s2, d2' = -d0~ w s1
  const double d1_dot = rotor.d0_tilde * rotor.omega_c * s[1];
  const double d2_dot = -rotor.d0_tilde * rotor.omega_c * s[0];
  return -(dot(A, frame.e1) * d1_dot + dot(A, frame.e2) * d2_dot);
}

inline double ponderomotive_closed_form(double A0, double phi0, double theta, double delta,
                                        double xi2, const RigidRotor& rotor, Branch which) {
  return branch_sign(which) * A0 * rotor.omega_c * rotor.d0_tilde * std::cos(xi2) *
         std::sin(theta + phi0 + delta) / (2.0 * std::sqrt(3.0));
}

// Averages the single-molecule term over the dipole orientation, weighted
// by the rotational density of a mixed level (0 -> |0~>, 1 -> |1~>). The
// orientation's polar angle is xi2 and its azimuth fixes xi1.
inline double orientation_averaged_term(double A0, double phi0, double theta, double delta,
                                        const RigidRotor& rotor, Branch which, double alpha,
                                        int level, double A_z = 0.0,
                                        const SphereQuadrature& q = default_sphere_quadrature()) {
  if (level != 0 && level != 1)
    throw InvalidArgument("orientation_averaged_term: level must be 0 or 1");
  const auto m = mixed_states(alpha);
  const auto& a = level == 0 ? m.amp_0 : m.amp_1;
  return integrate_sphere(q, [&](double pol, double az) {
    const cdouble amp = a[0] * spherical_harmonic(0, 0, pol, az) +
                        a[1] * spherical_harmonic(1, 0, pol, az);
    return std::norm(amp) *
           ponderomotive_term(A0, phi0, theta, delta, make_frame(az, pol), rotor, which, A_z);
  });
}

// Ion-level coupling: per-molecule coefficients summed to delta_n_bar with
// cos xi2 replaced by P_z.
inline double ion_ponderomotive_potential(double A0, double phi, double theta,
                                          const RigidRotor& rotor, double delta_n_bar,
                                          double P_z) {
  return A0 * rotor.omega_c * delta_n_bar * rotor.d0_tilde * P_z * std::sin(theta + phi) /
         (2.0 * std::sqrt(3.0));
}

}  // namespace hydrofel
