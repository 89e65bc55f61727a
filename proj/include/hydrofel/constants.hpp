#pragma once

// CODATA 2018 recommended values, SI units.
// Source: NIST Reference on Constants, Units, and Uncertainty (2019 release).
// hbar, c, k_B and e are exact under the 2019 SI redefinition.

#include <numbers>

namespace hydrofel {

struct PhysicalConstants {
  double hbar;      // J s
  double c;         // m / s
  double k_B;       // J / K
  double m_p;       // kg (proton mass)
  double e_charge;  // C
  double mu0;       // kg m / (A^2 s^2), vacuum permeability

  bool all_positive() const {
    return hbar > 0 && c > 0 && k_B > 0 && m_p > 0 && e_charge > 0 && mu0 > 0;
  }
};

inline constexpr PhysicalConstants codata2018{
    .hbar = 1.054571817e-34,
    .c = 299792458.0,
    .k_B = 1.380649e-23,
    .m_p = 1.67262192369e-27,
    .e_charge = 1.602176634e-19,
    .mu0 = 1.25663706212e-6,
};

inline constexpr double angstrom = 1e-10;
inline constexpr double micrometre = 1e-6;
inline constexpr double pi = std::numbers::pi;

}  // namespace hydrofel
