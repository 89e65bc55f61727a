#pragma once

// Electrostatic mixing of |0,0> and |1,0> by a static field along z, the
// resulting permanent polarization, and the solvation inversion.

#include <array>
#include <cmath>
#include <complex>

#include "hydrofel/errors.hpp"
#include "hydrofel/physcore.hpp"

namespace hydrofel {

// Amplitudes over the basis (|0,0>, |1,0>).
using LevelAmplitudes = std::array<std::complex<double>, 2>;

struct MixedStates {
  double alpha;
  LevelAmplitudes amp_0;  // |0~> =  cos a |0,0> + sin a |1,0>
  LevelAmplitudes amp_1;  // |1~> = -sin a |0,0> + cos a |1,0>
};

inline MixedStates mixed_states(double alpha) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  return {alpha, {{c, s}}, {{-s, c}}};
}

// Upper bound of P_z, reached at alpha = pi/4.
inline const double max_polarization = 1.0 / (3.0 * std::sqrt(3.0));

// Slope of P_z against E0z in the linear regime, V^-1 m.
inline constexpr double polarization_slope = 4.9e-9;
// Largest field for which the linear law holds, V / m.
inline constexpr double linear_field_limit = 1e7;
// Limit-cycle population difference w_- - w_+.
inline constexpr double default_delta_w = 0.62;

namespace detail {

// <a| e3.ez |a> for a state over (|0,0>, |1,0>); only the off-diagonal
// element <1,0|cos theta|0,0> survives.
inline double axial_expectation(const LevelAmplitudes& a, std::complex<double> z10) {
  return 2.0 * std::real(std::conj(a[1]) * a[0] * z10);
}

}  // namespace detail

// Weighted-expectation form over the two mixed levels, using the quadrature
// value of <1,0|e3.ez|0,0>. Requires w_- + 3 w_+ = 1.
inline double permanent_polarization(double alpha, double w_plus, double w_minus) {
  if (std::abs(w_minus + 3.0 * w_plus - 1.0) > 1e-12)
    throw InvalidArgument("permanent_polarization: weights must satisfy w_- + 3 w_+ = 1");
  const auto z10 = dipole_matrix_element(1, 0, 0, 0, 3);
  const auto m = mixed_states(alpha);
  const double norm = w_minus + 3.0 * w_plus;
  return norm / 2.0 * detail::axial_expectation(m.amp_0, z10) +
         norm / 6.0 * detail::axial_expectation(m.amp_1, z10);
}

inline double permanent_polarization_closed_form(double alpha) {
  return std::sin(2.0 * alpha) * max_polarization;
}

// P_z = c_P E0z, valid up to 1e7 V/m.
inline double linearized_polarization(double E0z) {
  if (!(E0z >= 0)) throw RangeError("linearized_polarization: E0z must be >= 0");
  if (E0z > linear_field_limit)
    throw RangeError("linearized_polarization: E0z above 1e7 V/m, outside the linear regime");
  return polarization_slope * E0z;
}

inline double solvation_inversion(double n, double delta_w) {
  if (!(n >= 1)) throw InvalidArgument("solvation_inversion: n must be >= 1");
  if (!(delta_w >= 0 && delta_w <= 1))
    throw InvalidArgument("solvation_inversion: delta_w must lie in [0, 1]");
  return n * delta_w;
}

struct PolarizationResult {
  double P_z;
  double w_plus;
  double w_minus;
  double delta_w;
  double delta_n_bar;
};

// Resolves the level weights from delta_w and the normalization
// w_- + 3 w_+ = 1.
inline PolarizationResult polarization_result(double alpha, double delta_w, double n) {
  const double w_plus = (1.0 - delta_w) / 4.0;
  const double w_minus = w_plus + delta_w;
  return {permanent_polarization(alpha, w_plus, w_minus), w_plus, w_minus, delta_w,
          solvation_inversion(n, delta_w)};
}

}  // namespace hydrofel
