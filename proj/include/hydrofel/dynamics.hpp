#pragma once

// N-particle collective-instability dynamics in scaled units:
//
//   theta_I'' = -(A e^{-i theta_I} + c.c.),   A' = <e^{i theta_I}>_I,
//
// with A = A0 e^{-i phi}. This complex-field form is algebraically identical
// to the polar equations theta'' = -2 A0 cos(theta + phi),
// A0' = <cos(theta + phi)>, phi' = -<sin(theta + phi)>/A0 but regular at
// A0 = 0. First integral: <p> + |A|^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hydrofel/errors.hpp"
#include "hydrofel/pairwise_sum.hpp"
#include "hydrofel/physcore.hpp"
#include "hydrofel/scaling.hpp"

namespace hydrofel {

enum class InitMode { quiet_start, uniform_random };

inline std::string to_string(InitMode m) {
  return m == InitMode::quiet_start ? "quiet-start" : "uniform-random";
}

inline std::optional<InitMode> parse_init_mode(const std::string& s) {
  if (s == "quiet-start") return InitMode::quiet_start;
  if (s == "uniform-random") return InitMode::uniform_random;
  return std::nullopt;
}

struct SimConfig {
  std::size_t n_particles = 16384;
  double dt = 0.01;
  double tau_end = 30.0;
  double seed_amp = 1e-4;
  InitMode init_mode = InitMode::quiet_start;
  std::uint64_t rng_seed = 1;
  std::size_t record_stride = 10;
  unsigned threads = 1;

  void validate() const {
    if (n_particles < 2) throw InvalidArgument("SimConfig: n_particles must be >= 2");
    if (!(dt > 0) || !std::isfinite(dt)) throw InvalidArgument("SimConfig: dt must be > 0");
    if (!(tau_end >= 0) || !std::isfinite(tau_end))
      throw InvalidArgument("SimConfig: tau_end must be >= 0");
    if (!(seed_amp > 0) || !std::isfinite(seed_amp))
      throw InvalidArgument("SimConfig: seed_amp must be > 0");
    if (record_stride < 1) throw InvalidArgument("SimConfig: record_stride must be >= 1");
    if (threads < 1) throw InvalidArgument("SimConfig: threads must be >= 1");
  }
};

struct EnsembleState {
  std::vector<double> theta;
  std::vector<double> p;
  std::complex<double> field;  // A0 e^{-i phi}
  double tau = 0.0;

  std::size_t size() const { return theta.size(); }
  double amplitude() const { return std::abs(field); }
  double phase() const { return -std::arg(field); }
};

struct StateDerivative {
  std::vector<double> dtheta;
  std::vector<double> dp;
  std::complex<double> dfield;
};

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; fully specified, unlike
// std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Runs fn(begin, end) over [0, n) in contiguous chunks on `threads` workers.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n == 0 ? 1 : n);
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace detail

inline EnsembleState init_ensemble(const SimConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_particles;
  EnsembleState s;
  s.theta.resize(n);
  s.p.assign(n, 0.0);
  s.field = {cfg.seed_amp, 0.0};
  s.tau = 0.0;
  std::mt19937_64 gen(cfg.rng_seed);
  const double two_pi = 2.0 * pi;
  for (std::size_t i = 0; i < n; ++i) {
    if (cfg.init_mode == InitMode::quiet_start) {
      const double jitter = 1e-6 * (2.0 * detail::unit_uniform(gen) - 1.0);
      s.theta[i] = two_pi * static_cast<double>(i) / static_cast<double>(n) + jitter;
    } else {
      s.theta[i] = two_pi * detail::unit_uniform(gen);
    }
  }
  return s;
}

// <e^{i theta}> over the ensemble.
inline std::complex<double> bunching(std::span<const double> theta) {
  std::vector<double> c(theta.size()), s(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    c[i] = std::cos(theta[i]);
    s[i] = std::sin(theta[i]);
  }
  return {pairwise_mean<double>(c), pairwise_mean<double>(s)};
}

inline double mean_momentum(std::span<const double> p) { return pairwise_mean(p); }

inline double first_integral(const EnsembleState& s) {
  return mean_momentum(s.p) + std::norm(s.field);
}

// Rate of change of phi implied by a field derivative: phi' = -Im(A'/A).
inline double phase_rate(std::complex<double> field, std::complex<double> dfield) {
  return -std::imag(dfield / field);
}

// Classical RK4 on the complex-field equations. Owns scratch buffers; the
// per-particle work may be split across threads, the ensemble reduction is
// always the same fixed-order pairwise sum.
class Rk4Integrator {
 public:
  explicit Rk4Integrator(std::size_t n, unsigned threads = 1) : threads_(threads) {
    cos_.resize(n);
    sin_.resize(n);
    for (auto* k : {&k1_, &k2_, &k3_, &k4_}) {
      k->dtheta.resize(n);
      k->dp.resize(n);
    }
    tmp_.theta.resize(n);
    tmp_.p.resize(n);
  }

  void derivative(const EnsembleState& s, StateDerivative& out) {
    const std::size_t n = s.size();
    const double fr = s.field.real(), fi = s.field.imag();
    detail::parallel_chunks(n, threads_, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const double c = std::cos(s.theta[i]), sn = std::sin(s.theta[i]);
        cos_[i] = c;
        sin_[i] = sn;
        out.dtheta[i] = s.p[i];
        // -(A e^{-i theta} + c.c.) = -2 (Re A cos theta + Im A sin theta)
        out.dp[i] = -2.0 * (fr * c + fi * sn);
      }
    });
    out.dfield = {pairwise_mean<double>(cos_), pairwise_mean<double>(sin_)};
  }

  void step(EnsembleState& s, double dt) {
    if (!(dt > 0)) throw InvalidArgument("step: dt must be > 0");
    const std::size_t n = s.size();
    derivative(s, k1_);
    stage(s, k1_, 0.5 * dt);
    derivative(tmp_, k2_);
    stage(s, k2_, 0.5 * dt);
    derivative(tmp_, k3_);
    stage(s, k3_, dt);
    derivative(tmp_, k4_);
    const double w = dt / 6.0;
    detail::parallel_chunks(n, threads_, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        s.theta[i] += w * (k1_.dtheta[i] + 2.0 * k2_.dtheta[i] + 2.0 * k3_.dtheta[i] +
                           k4_.dtheta[i]);
        s.p[i] += w * (k1_.dp[i] + 2.0 * k2_.dp[i] + 2.0 * k3_.dp[i] + k4_.dp[i]);
      }
    });
    s.field += w * (k1_.dfield + 2.0 * k2_.dfield + 2.0 * k3_.dfield + k4_.dfield);
    s.tau += dt;
    if (!std::isfinite(s.field.real()) || !std::isfinite(s.field.imag()))
      throw NumericalBlowup("non-finite field amplitude at tau = " + std::to_string(s.tau));
  }

  // Cosine / sine of the phases from the most recent k1 evaluation.
  std::span<const double> last_cos() const { return cos_; }
  std::span<const double> last_sin() const { return sin_; }

 private:
  void stage(const EnsembleState& s, const StateDerivative& k, double h) {
    const std::size_t n = s.size();
    detail::parallel_chunks(n, threads_, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        tmp_.theta[i] = s.theta[i] + h * k.dtheta[i];
        tmp_.p[i] = s.p[i] + h * k.dp[i];
      }
    });
    tmp_.field = s.field + h * k.dfield;
    tmp_.tau = s.tau + h;
  }

  unsigned threads_;
  std::vector<double> cos_, sin_;
  StateDerivative k1_, k2_, k3_, k4_;
  EnsembleState tmp_;
};

inline StateDerivative derivative(const EnsembleState& s) {
  Rk4Integrator integ(s.size());
  StateDerivative d;
  d.dtheta.resize(s.size());
  d.dp.resize(s.size());
  integ.derivative(s, d);
  return d;
}

inline EnsembleState step(EnsembleState s, double dt, unsigned threads = 1) {
  Rk4Integrator integ(s.size(), threads);
  integ.step(s, dt);
  return s;
}

struct TrajectoryRow {
  double tau;
  double A0_scaled;
  double phi;
  double bunch_re;
  double bunch_im;
  double p_mean;
  double conserved;
};

struct Diagnostics {
  std::complex<double> bunching;  // at the end of the run
  double p_mean = 0;
  double conserved = 0;
  double conserved_drift = 0;     // max |C(tau) - C(0)| over all steps
  double growth_rate_fit = std::numeric_limits<double>::quiet_NaN();
  std::size_t growth_fit_points = 0;
  double sat_peak = std::numeric_limits<double>::quiet_NaN();
  double sat_tau = std::numeric_limits<double>::quiet_NaN();
  double bunching_at_sat = std::numeric_limits<double>::quiet_NaN();
  bool saturated = false;
};

struct RunResult {
  std::vector<TrajectoryRow> trajectory;
  Diagnostics diagnostics;
  EnsembleState final_state;
  std::optional<EnsembleState> peak_state;  // state at the saturation peak
};

namespace detail {

inline TrajectoryRow make_row(const EnsembleState& s) {
  const auto b = bunching(s.theta);
  const double pm = mean_momentum(s.p);
  return {s.tau, s.amplitude(), s.phase(), b.real(), b.imag(), pm, pm + std::norm(s.field)};
}

// Least-squares slope of ln A0 against tau over the exponential window:
// from the last entry into A0 >= 10 seed until A0 first exceeds 0.1.
inline std::pair<double, std::size_t> fit_growth_rate(std::span<const double> tau,
                                                      std::span<const double> amp,
                                                      double seed_amp) {
  const double lo = 10.0 * seed_amp, hi = 0.1;
  std::size_t end = amp.size();
  for (std::size_t i = 0; i < amp.size(); ++i)
    if (amp[i] > hi) {
      end = i;
      break;
    }
  if (end == amp.size()) return {std::numeric_limits<double>::quiet_NaN(), 0};
  std::size_t begin = end;
  while (begin > 0 && amp[begin - 1] >= lo) --begin;
  const std::size_t m = end - begin;
  if (m < 3) return {std::numeric_limits<double>::quiet_NaN(), m};
  double st = 0, sy = 0;
  for (std::size_t i = begin; i < end; ++i) {
    st += tau[i];
    sy += std::log(amp[i]);
  }
  const double mt = st / static_cast<double>(m), my = sy / static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const double dx = tau[i] - mt;
    sxx += dx * dx;
    sxy += dx * (std::log(amp[i]) - my);
  }
  return {sxy / sxx, m};
}

}  // namespace detail

// Integrates from init_ensemble(cfg) to tau_end, recording every
// record_stride steps (plus the final state). The saturation peak is the
// first 3-point local maximum of A0 once A0 has left the seed region
// (A0 > 10 seed_amp).
inline RunResult run(const SimConfig& cfg) {
  cfg.validate();
  RunResult out;
  EnsembleState s = init_ensemble(cfg);
  Rk4Integrator integ(s.size(), cfg.threads);
  const auto steps = static_cast<std::size_t>(std::llround(cfg.tau_end / cfg.dt));

  std::vector<double> taus, amps;
  taus.reserve(steps + 1);
  amps.reserve(steps + 1);
  taus.push_back(s.tau);
  amps.push_back(s.amplitude());

  out.trajectory.push_back(detail::make_row(s));
  const double c0 = first_integral(s);
  double drift = 0.0;
  const double growth_floor = 10.0 * cfg.seed_amp;
  std::optional<EnsembleState> prev;  // state one step back, kept during growth

  for (std::size_t k = 1; k <= steps; ++k) {
    const bool track = !out.diagnostics.saturated && s.amplitude() > growth_floor;
    if (track) prev = s;
    integ.step(s, cfg.dt);
    s.tau = static_cast<double>(k) * cfg.dt;
    taus.push_back(s.tau);
    amps.push_back(s.amplitude());
    drift = std::max(drift, std::abs(first_integral(s) - c0));

    const std::size_t j = amps.size() - 2;  // candidate peak index
    if (!out.diagnostics.saturated && j >= 1 && amps[j] > growth_floor &&
        amps[j - 1] < amps[j] && amps[j] >= amps[j + 1] && prev) {
      auto& d = out.diagnostics;
      d.saturated = true;
      d.sat_peak = amps[j];
      d.sat_tau = taus[j];
      d.bunching_at_sat = std::abs(bunching(prev->theta));
      out.peak_state = std::move(prev);
      prev.reset();
    }
    if (k % cfg.record_stride == 0 || k == steps) out.trajectory.push_back(detail::make_row(s));
  }

  auto& d = out.diagnostics;
  d.bunching = bunching(s.theta);
  d.p_mean = mean_momentum(s.p);
  d.conserved = first_integral(s);
  d.conserved_drift = drift;
  const auto [rate, pts] = detail::fit_growth_rate(taus, amps, cfg.seed_amp);
  d.growth_rate_fit = rate;
  d.growth_fit_points = pts;
  out.final_state = std::move(s);
  return out;
}

// ---------------------------------------------------------------------------
// Literal polar form, kept to cross-check the complex formulation.

struct PolarState {
  std::vector<double> theta, p;
  double A0 = 0, phi = 0, tau = 0;
};

struct PolarDerivative {
  std::vector<double> dtheta, dp;
  double dA0 = 0, dphi = 0;
};

inline constexpr double polar_singularity_floor = 1e-9;

inline PolarDerivative polar_derivative(const PolarState& s) {
  if (!(s.A0 >= polar_singularity_floor))
    throw RangeError("polar form is singular: A0 = " + std::to_string(s.A0) + " < 1e-9");
  const std::size_t n = s.theta.size();
  PolarDerivative d;
  d.dtheta = s.p;
  d.dp.resize(n);
  std::vector<double> c(n), sn(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = std::cos(s.theta[i] + s.phi);
    sn[i] = std::sin(s.theta[i] + s.phi);
    d.dp[i] = -2.0 * s.A0 * c[i];
  }
  d.dA0 = pairwise_mean<double>(c);
  d.dphi = -pairwise_mean<double>(sn) / s.A0;
  return d;
}

inline void polar_step(PolarState& s, double dt) {
  auto shifted = [](const PolarState& base, const PolarDerivative& k, double h) {
    PolarState t = base;
    for (std::size_t i = 0; i < t.theta.size(); ++i) {
      t.theta[i] += h * k.dtheta[i];
      t.p[i] += h * k.dp[i];
    }
    t.A0 += h * k.dA0;
    t.phi += h * k.dphi;
    t.tau += h;
    return t;
  };
  const auto k1 = polar_derivative(s);
  const auto k2 = polar_derivative(shifted(s, k1, 0.5 * dt));
  const auto k3 = polar_derivative(shifted(s, k2, 0.5 * dt));
  const auto k4 = polar_derivative(shifted(s, k3, dt));
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < s.theta.size(); ++i) {
    s.theta[i] += w * (k1.dtheta[i] + 2 * k2.dtheta[i] + 2 * k3.dtheta[i] + k4.dtheta[i]);
    s.p[i] += w * (k1.dp[i] + 2 * k2.dp[i] + 2 * k3.dp[i] + k4.dp[i]);
  }
  s.A0 += w * (k1.dA0 + 2 * k2.dA0 + 2 * k3.dA0 + k4.dA0);
  s.phi += w * (k1.dphi + 2 * k2.dphi + 2 * k3.dphi + k4.dphi);
  s.tau += dt;
}

inline PolarState to_polar(const EnsembleState& s) {
  return {s.theta, s.p, s.amplitude(), s.phase(), s.tau};
}

// Integrates both formulations from identical initial data and returns
// max |A_polar - A_complex| over all steps.
inline double polar_equivalence(const SimConfig& cfg) {
  cfg.validate();
  EnsembleState c = init_ensemble(cfg);
  PolarState p = to_polar(c);
  Rk4Integrator integ(c.size(), cfg.threads);
  const auto steps = static_cast<std::size_t>(std::llround(cfg.tau_end / cfg.dt));
  double worst = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    integ.step(c, cfg.dt);
    polar_step(p, cfg.dt);
    worst = std::max(worst, std::abs(std::polar(p.A0, -p.phi) - c.field));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Mapping back to physical units.

struct PhysicalRecord {
  double A0;                // V s / m
  double t;                 // s
  double theta_dot_max;     // rad / s, max |d theta_I / dt|
  double L_min, L_max;      // angular momentum range, J s
  double validity_ratio;    // theta_dot_max / omega_c
  bool validity_warning;    // ratio above 1e-2
};

inline constexpr double slow_phase_limit = 1e-2;

// L_I = I (n/6) (omega_c + theta_dot_I), theta_dot_I = p_I / t_gain.
inline double angular_momentum(double theta_dot, const RigidRotor& r, double n) {
  return r.I_ave * n / 6.0 * (r.omega_c + theta_dot);
}

inline PhysicalRecord physical_readout(const EnsembleState& s, const GainCoefficients& g,
                                       const RigidRotor& rotor, double n) {
  if (!g.usable()) throw InvalidArgument("physical_readout: mechanism is off");
  PhysicalRecord r{};
  const auto [A0, t] = to_physical(s.amplitude(), s.tau, g);
  r.A0 = A0;
  r.t = t;
  double pmin = 0, pmax = 0, amax = 0;
  if (!s.p.empty()) {
    const auto [lo, hi] = std::minmax_element(s.p.begin(), s.p.end());
    pmin = *lo;
    pmax = *hi;
    amax = std::max(std::abs(pmin), std::abs(pmax));
  }
  r.theta_dot_max = amax / g.t_gain;
  r.L_min = angular_momentum(pmin / g.t_gain, rotor, n);
  r.L_max = angular_momentum(pmax / g.t_gain, rotor, n);
  r.validity_ratio = r.theta_dot_max / rotor.omega_c;
  r.validity_warning = r.validity_ratio > slow_phase_limit;
  return r;
}

}  // namespace hydrofel
