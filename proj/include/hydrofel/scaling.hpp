#pragma once

// Gain coefficients of the collective instability and the conversion between
// physical and dimensionless units.
//
// Units: the field amplitude A0 is a vector potential in V s / m, so the
// saturation amplitude A_sat carries m kg s^-2 A^-1 and c_A carries
// m^3 kg s^-2 A^-1.

#include <cmath>
#include <limits>
#include <utility>

#include "hydrofel/constants.hpp"
#include "hydrofel/errors.hpp"
#include "hydrofel/mixing.hpp"
#include "hydrofel/physcore.hpp"

namespace hydrofel {

struct SystemParams {
  double n = 30;              // waters per ion
  double delta_n_bar = 18.6;  // solvation inversion
  double rho = 0;             // ions per m^3
  double P_z = 0;             // permanent polarization
  RigidRotor rotor{};
  double mu = codata2018.mu0;
  double c = codata2018.c;

  void validate() const {
    if (!(n >= 1)) throw InvalidArgument("SystemParams: n must be >= 1");
    if (!(rho > 0)) throw InvalidArgument("SystemParams: rho must be > 0");
    if (!(P_z >= 0 && P_z <= max_polarization))
      throw InvalidArgument("SystemParams: P_z must lie in [0, 1/(3 sqrt 3)]");
    if (!(delta_n_bar >= 0 && delta_n_bar <= n))
      throw InvalidArgument("SystemParams: delta_n_bar must lie in [0, n]");
    if (!(mu > 0) || !(c > 0)) throw InvalidArgument("SystemParams: mu and c must be > 0");
  }
};

struct GainPair {
  double alpha = 0;  // drives theta'' (per unit field, s^-2 scale)
  double beta = 0;   // drives dA0/dt (field per unit time)
  bool mechanism_off = false;
};

// alpha = sqrt3 dn w d0~ P_z / (n I),  beta = mu c^2 rho dn d0~ P_z / (2 sqrt3)
inline GainPair alpha_beta(const SystemParams& p) {
  p.validate();
  const double d_ave = p.rotor.d0_tilde * p.P_z;
  GainPair g;
  g.alpha = std::sqrt(3.0) * p.delta_n_bar * p.rotor.omega_c * d_ave / (p.n * p.rotor.I_ave);
  g.beta = p.mu * p.c * p.c * p.rho * p.delta_n_bar * d_ave / (2.0 * std::sqrt(3.0));
  g.mechanism_off = !(g.alpha > 0 && g.beta > 0);
  return g;
}

struct GainCoefficients {
  double alpha_coef = 0;
  double beta_coef = 0;
  double A_sat = 0;   // (alpha / 2 beta^2)^(-1/3)
  double t_gain = 0;  // (alpha beta / 2)^(-1/3), s
  double c_A = 0;     // A_sat / (rho^(2/3) P_z^(1/3))
  double c_t = 0;     // t_gain / (rho^(-1/3) P_z^(-2/3))
  bool mechanism_off = false;

  bool usable() const {
    return !mechanism_off && std::isfinite(A_sat) && std::isfinite(t_gain) && A_sat > 0 &&
           t_gain > 0;
  }
};

inline GainCoefficients saturation_scales(const GainPair& g, double rho, double P_z) {
  if (!(g.alpha >= 0) || !(g.beta >= 0))
    throw InvalidArgument("saturation_scales: alpha and beta must be >= 0");
  GainCoefficients out;
  out.alpha_coef = g.alpha;
  out.beta_coef = g.beta;
  if (g.alpha == 0 || g.beta == 0) {
    out.mechanism_off = true;
    out.A_sat = 0;
    out.t_gain = std::numeric_limits<double>::infinity();
    out.c_A = out.c_t = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.A_sat = std::cbrt(2.0 * g.beta * g.beta / g.alpha);
  out.t_gain = std::cbrt(2.0 / (g.alpha * g.beta));
  out.c_A = out.A_sat / (std::cbrt(rho * rho) * std::cbrt(P_z));
  out.c_t = out.t_gain * std::cbrt(rho) * std::cbrt(P_z * P_z);
  return out;
}

inline GainCoefficients gain_coefficients(const SystemParams& p) {
  return saturation_scales(alpha_beta(p), p.rho, p.P_z);
}

struct UniversalPrefactors {
  double c_A;
  double c_t;
};

// c_A and c_t straight from the constants: with alpha = K_a P_z and
// beta = K_b rho P_z, c_A = (2 K_b^2 / K_a)^(1/3), c_t = (2 / (K_a K_b))^(1/3).
inline UniversalPrefactors universal_prefactors(const RigidRotor& r, double n,
                                                double delta_n_bar,
                                                const PhysicalConstants& k = codata2018) {
  const double K_a = std::sqrt(3.0) * delta_n_bar * r.omega_c * r.d0_tilde / (n * r.I_ave);
  const double K_b = k.mu0 * k.c * k.c * delta_n_bar * r.d0_tilde / (2.0 * std::sqrt(3.0));
  return {std::cbrt(2.0 * K_b * K_b / K_a), std::cbrt(2.0 / (K_a * K_b))};
}

// (A0, t) -> (A0 / A_sat, t / t_gain)
inline std::pair<double, double> to_dimensionless(double A0, double t,
                                                  const GainCoefficients& g) {
  if (!g.usable())
    throw InvalidArgument("to_dimensionless: mechanism is off (P_z = 0), no finite scales");
  return {A0 / g.A_sat, t / g.t_gain};
}

inline std::pair<double, double> to_physical(double A_scaled, double tau,
                                             const GainCoefficients& g) {
  if (!g.usable())
    throw InvalidArgument("to_physical: mechanism is off (P_z = 0), no finite scales");
  return {A_scaled * g.A_sat, tau * g.t_gain};
}

}  // namespace hydrofel
