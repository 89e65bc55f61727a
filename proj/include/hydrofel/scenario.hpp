#pragma once

// Scenario configuration, the axon preset, end-to-end execution and file
// output (summary.json, trajectory.csv, trajectory.svg, sweep.csv).

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "hydrofel/constants.hpp"
#include "hydrofel/dynamics.hpp"
#include "hydrofel/errors.hpp"
#include "hydrofel/mixing.hpp"
#include "hydrofel/physcore.hpp"
#include "hydrofel/scaling.hpp"

namespace hydrofel {

enum class ExitCode : int {
  ok = 0,
  failure = 1,
  config_error = 2,
  numerical_blowup = 3,
  mechanism_off = 4,
};

struct ScenarioConfig {
  double temperature = 300.0;
  double n_waters = 30.0;
  std::optional<double> field_E0z;
  std::optional<double> P_z_override;
  std::optional<double> rho;
  std::optional<double> N_ions;
  std::optional<double> V_volume;
  double delta_w = default_delta_w;
  SimConfig sim{};
  std::string output_dir = "out";
  // Optional kinematics for the timescale and slippage diagnostics.
  std::optional<double> velocity;
  std::optional<double> run_length;
  std::optional<double> bunch_length;
  std::optional<double> gain_length;

  std::vector<std::string> defaults_applied;

  double resolved_rho() const { return rho ? *rho : *N_ions / *V_volume; }

  double resolved_P_z() const {
    return P_z_override ? *P_z_override : linearized_polarization(*field_E0z);
  }

  void validate() const;
};

inline void ScenarioConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& msg) {
    throw ConfigError(key + ": " + msg, key);
  };
  if (!(temperature > 0)) fail("temperature", "must be > 0 K");
  if (!(n_waters >= 1)) fail("n_waters", "must be >= 1");
  if (!(delta_w >= 0 && delta_w <= 1)) fail("delta_w", "must lie in [0, 1]");

  const bool have_pair = N_ions || V_volume;
  if (rho && have_pair) fail("rho", "give either rho or (N_ions, V_volume), not both");
  if (!rho && !have_pair) fail("rho", "one of rho or (N_ions, V_volume) is required");
  if (have_pair && !(N_ions && V_volume))
    fail(N_ions ? "V_volume" : "N_ions", "N_ions and V_volume must be given together");
  if (rho && !(*rho > 0)) fail("rho", "must be > 0");
  if (N_ions && !(*N_ions > 0)) fail("N_ions", "must be > 0");
  if (V_volume && !(*V_volume > 0)) fail("V_volume", "must be > 0");

  if (field_E0z && P_z_override)
    fail("field_E0z", "give either field_E0z or P_z_override, not both");
  if (!field_E0z && !P_z_override)
    fail("field_E0z", "one of field_E0z or P_z_override is required");
  if (field_E0z) {
    try {
      linearized_polarization(*field_E0z);
    } catch (const RangeError& e) {
      fail("field_E0z", e.what());
    }
  }
  if (P_z_override && !(*P_z_override >= 0 && *P_z_override <= max_polarization))
    fail("P_z_override", "must lie in [0, 1/(3 sqrt 3)]");

  if (velocity && !(*velocity > 0 && *velocity < codata2018.c))
    fail("velocity", "must lie in (0, c)");
  for (auto [key, v] : {std::pair{"run_length", run_length}, {"bunch_length", bunch_length},
                        {"gain_length", gain_length}})
    if (v && !(*v > 0)) fail(key, "must be > 0");

  try {
    sim.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (output_dir.empty()) fail("output_dir", "must not be empty");
}

// ---------------------------------------------------------------------------
// Axon preset: sodium-ion current in a myelinated axon segment.

struct AxonPreset {
  double l_a = 10.0 * micrometre;  // axon diameter
  double l_r = 1e-3;               // run length per sheath, m
  double total_ions = 1e6;
  double n_sheaths = 100;
  double E0z = 100.0;              // V / m
  double v = 150.0;                // m / s
  double T = 300.0;
  double n_waters = 30;

  double volume() const { return pi * l_a * l_a * l_r / 4.0; }
  double ions() const { return total_ions / n_sheaths; }
  double rho() const { return ions() / volume(); }
};

inline ScenarioConfig axon_config(const AxonPreset& a = {}) {
  ScenarioConfig c;
  c.temperature = a.T;
  c.n_waters = a.n_waters;
  c.field_E0z = a.E0z;
  c.N_ions = a.ions();
  c.V_volume = a.volume();
  c.velocity = a.v;
  c.run_length = a.l_r;
  c.output_dir = "out/axon";
  return c;
}

// ---------------------------------------------------------------------------
// Config text: one `key = value` per line, '#' starts a comment. Unknown or
// repeated keys are errors.

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view v, const std::string& key, const std::string& where) {
  double out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out))
    throw ConfigError(where + key + ": expected a finite number, got '" + std::string(v) + "'",
                      key);
  return out;
}

inline std::uint64_t parse_uint(std::string_view v, const std::string& key,
                                const std::string& where) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(
        where + key + ": expected a non-negative integer, got '" + std::string(v) + "'", key);
  return out;
}

inline void apply_entry(ScenarioConfig& c, const std::string& key, std::string_view v,
                        const std::string& where) {
  auto num = [&] { return parse_double(v, key, where); };
  auto uint = [&] { return parse_uint(v, key, where); };
  if (key == "temperature") c.temperature = num();
  else if (key == "n_waters") c.n_waters = num();
  else if (key == "field_E0z") c.field_E0z = num();
  else if (key == "P_z_override") c.P_z_override = num();
  else if (key == "rho") c.rho = num();
  else if (key == "N_ions") c.N_ions = num();
  else if (key == "V_volume") c.V_volume = num();
  else if (key == "delta_w") c.delta_w = num();
  else if (key == "n_particles") c.sim.n_particles = uint();
  else if (key == "dt") c.sim.dt = num();
  else if (key == "tau_end") c.sim.tau_end = num();
  else if (key == "seed_amp") c.sim.seed_amp = num();
  else if (key == "rng_seed") c.sim.rng_seed = uint();
  else if (key == "record_stride") c.sim.record_stride = uint();
  else if (key == "threads") c.sim.threads = static_cast<unsigned>(uint());
  else if (key == "init_mode") {
    const auto m = parse_init_mode(std::string(v));
    if (!m)
      throw ConfigError(where + "init_mode: expected quiet-start or uniform-random", key);
    c.sim.init_mode = *m;
  } else if (key == "output_dir") c.output_dir = std::string(v);
  else if (key == "velocity") c.velocity = num();
  else if (key == "run_length") c.run_length = num();
  else if (key == "bunch_length") c.bunch_length = num();
  else if (key == "gain_length") c.gain_length = num();
  else throw ConfigError(where + "unknown key '" + key + "'", key);
}

// Keys that carry a default and are echoed when the file omits them.
inline const std::vector<std::string>& defaulted_keys() {
  static const std::vector<std::string> keys{
      "temperature", "n_waters",  "delta_w",  "n_particles", "dt",     "tau_end",
      "seed_amp",    "init_mode", "rng_seed", "record_stride", "output_dir"};
  return keys;
}

inline ScenarioConfig finish(ScenarioConfig c, const std::vector<std::string>& seen) {
  for (const auto& k : defaulted_keys())
    if (std::find(seen.begin(), seen.end(), k) == seen.end()) c.defaults_applied.push_back(k);
  c.validate();
  return c;
}

}  // namespace detail

inline ScenarioConfig parse_config_text(std::string_view text, const std::string& origin = "config") {
  ScenarioConfig c;
  std::vector<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (value.empty()) throw ConfigError(where + key + ": missing value", key);
    if (std::find(seen.begin(), seen.end(), key) != seen.end())
      throw ConfigError(where + "duplicate key '" + key + "'", key);
    detail::apply_entry(c, key, value, where);
    seen.push_back(key);
  }
  return detail::finish(std::move(c), seen);
}

// Accepts either key = value text or a summary.json produced by a previous
// run, in which case its "resolved_config" object is used.
inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{')
    return parse_config_text(text, path.string());

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  if (!j.contains("resolved_config") || !j["resolved_config"].is_object())
    throw ConfigError(path.string() + ": JSON input lacks a resolved_config object");
  ScenarioConfig c;
  std::vector<std::string> seen;
  for (const auto& [key, val] : j["resolved_config"].items()) {
    const std::string v = val.is_string() ? val.get<std::string>() : val.dump();
    detail::apply_entry(c, key, v, path.string() + ": ");
    seen.push_back(key);
  }
  return detail::finish(std::move(c), seen);
}

// Omits the worker count.
inline nlohmann::ordered_json config_to_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["temperature"] = c.temperature;
  j["n_waters"] = c.n_waters;
  if (c.field_E0z) j["field_E0z"] = *c.field_E0z;
  if (c.P_z_override) j["P_z_override"] = *c.P_z_override;
  if (c.rho) j["rho"] = *c.rho;
  if (c.N_ions) j["N_ions"] = *c.N_ions;
  if (c.V_volume) j["V_volume"] = *c.V_volume;
  j["delta_w"] = c.delta_w;
  j["n_particles"] = c.sim.n_particles;
  j["dt"] = c.sim.dt;
  j["tau_end"] = c.sim.tau_end;
  j["seed_amp"] = c.sim.seed_amp;
  j["init_mode"] = to_string(c.sim.init_mode);
  j["rng_seed"] = c.sim.rng_seed;
  j["record_stride"] = c.sim.record_stride;
  j["output_dir"] = c.output_dir;
  if (c.velocity) j["velocity"] = *c.velocity;
  if (c.run_length) j["run_length"] = *c.run_length;
  if (c.bunch_length) j["bunch_length"] = *c.bunch_length;
  if (c.gain_length) j["gain_length"] = *c.gain_length;
  return j;
}

// ---------------------------------------------------------------------------
// Slippage of the radiation past slow particles over one gain length.

struct SlippageDiagnostic {
  double l_b;
  double l_g;
  double v;
  double l_s;    // (c - v) l_g / v
  double ratio;  // l_s / l_b
  bool slippage_dominated;
};

// Ratio above which l_b << l_s is taken to hold.
inline constexpr double slippage_dominance_ratio = 100.0;

inline SlippageDiagnostic slippage_check(double l_b, double l_g, double v,
                                         double c = codata2018.c) {
  if (!(v > 0) || !(v < c)) throw InvalidArgument("slippage_check: need 0 < v < c");
  if (!(l_b > 0) || !(l_g > 0)) throw InvalidArgument("slippage_check: lengths must be > 0");
  SlippageDiagnostic d{l_b, l_g, v, (c - v) * l_g / v, 0.0, false};
  d.ratio = d.l_s / l_b;
  d.slippage_dominated = d.ratio > slippage_dominance_ratio;
  return d;
}

// ---------------------------------------------------------------------------
// Derivation chain and full scenario.

struct DerivedChain {
  RigidRotor rotor;
  ThermalPopulation thermal;
  double half_gap_kT;
  double P_z;
  bool P_z_from_field;
  PolarizationResult polarization;  // weights from delta_w; P_z field unused
  double rho;
  SystemParams params;
  GainCoefficients gain;
};

inline DerivedChain derive_chain(const ScenarioConfig& cfg) {
  cfg.validate();
  DerivedChain d{};
  d.rotor = water_rotor();
  d.thermal = thermal_population(d.rotor, cfg.n_waters, cfg.temperature, 5);
  d.half_gap_kT = thermal_inversion(d.rotor, cfg.n_waters, cfg.temperature).half_gap_kT;
  d.P_z_from_field = cfg.field_E0z.has_value();
  d.P_z = cfg.resolved_P_z();
  d.polarization = polarization_result(0.0, cfg.delta_w, cfg.n_waters);
  d.polarization.P_z = d.P_z;
  d.rho = cfg.resolved_rho();
  d.params.n = cfg.n_waters;
  d.params.delta_n_bar = d.polarization.delta_n_bar;
  d.params.rho = d.rho;
  d.params.P_z = d.P_z;
  d.params.rotor = d.rotor;
  d.gain = gain_coefficients(d.params);
  return d;
}

struct ScenarioReport {
  ScenarioConfig config;
  DerivedChain chain;
  std::optional<RunResult> run;
  std::optional<PhysicalRecord> at_peak;
  std::optional<PhysicalRecord> at_end;
  std::optional<SlippageDiagnostic> slippage;
  nlohmann::ordered_json summary;
  ExitCode status = ExitCode::ok;
};

namespace detail {

inline nlohmann::ordered_json physical_json(const PhysicalRecord& r) {
  nlohmann::ordered_json j;
  j["A0"] = r.A0;
  j["t"] = r.t;
  j["theta_dot_max"] = r.theta_dot_max;
  j["L_min"] = r.L_min;
  j["L_max"] = r.L_max;
  j["validity_ratio"] = r.validity_ratio;
  j["validity_warning"] = r.validity_warning;
  return j;
}

inline nlohmann::ordered_json build_summary(const ScenarioReport& rep) {
  const auto& d = rep.chain;
  const auto& g = d.gain;
  nlohmann::ordered_json s;
  s["status"] = rep.status == ExitCode::mechanism_off ? "mechanism-off" : "ok";
  s["I_ave"] = d.rotor.I_ave;
  s["E_split"] = d.rotor.E_split;
  s["E_split_wavenumber_per_cm"] = split_wavenumber_per_cm(d.rotor);
  s["omega_c"] = d.rotor.omega_c;
  s["l_c"] = d.rotor.l_c;
  s["d0"] = d.rotor.d0;
  s["d0_tilde"] = d.rotor.d0_tilde;
  s["half_gap_kT"] = d.half_gap_kT;
  s["delta_n_thermal"] = d.thermal.delta_n_thermal;
  s["population_ratios"] = d.thermal.ratios;
  s["P_z"] = d.P_z;
  s["P_z_source"] = d.P_z_from_field ? "linearized-field" : "override";
  s["w_plus"] = d.polarization.w_plus;
  s["w_minus"] = d.polarization.w_minus;
  s["delta_n_bar"] = d.polarization.delta_n_bar;
  s["rho"] = d.rho;
  s["rho_per_um3"] = d.rho * 1e-18;
  s["alpha"] = g.alpha_coef;
  s["beta"] = g.beta_coef;
  const auto pref = universal_prefactors(d.rotor, d.params.n, d.params.delta_n_bar);
  s["c_A"] = g.mechanism_off ? pref.c_A : g.c_A;
  s["c_t"] = g.mechanism_off ? pref.c_t : g.c_t;
  if (g.mechanism_off) {
    s["A_sat"] = 0.0;
    s["t_gain"] = nullptr;
    s["gain_time"] = "infinite";
  } else {
    s["A_sat"] = g.A_sat;
    s["t_gain"] = g.t_gain;
  }

  if (rep.run) {
    const auto& diag = rep.run->diagnostics;
    s["growth_rate"] = diag.growth_rate_fit;
    s["growth_fit_points"] = diag.growth_fit_points;
    s["sat_peak"] = diag.sat_peak;
    s["sat_tau"] = diag.sat_tau;
    s["bunching_at_sat"] = diag.bunching_at_sat;
    s["saturated"] = diag.saturated;
    s["final_bunching_abs"] = std::abs(diag.bunching);
    s["final_p_mean"] = diag.p_mean;
    s["final_conserved"] = diag.conserved;
    s["conserved_drift"] = diag.conserved_drift;
    s["trajectory_rows"] = rep.run->trajectory.size();
  }
  if (rep.at_peak) s["physical_at_peak"] = physical_json(*rep.at_peak);
  if (rep.at_end) s["physical_at_end"] = physical_json(*rep.at_end);

  if (rep.config.run_length && rep.config.velocity && !g.mechanism_off) {
    const double transit = *rep.config.run_length / *rep.config.velocity;
    s["transit_time"] = transit;
    s["t_gain_over_transit"] = g.t_gain / transit;
  }
  if (rep.slippage) {
    nlohmann::ordered_json j;
    j["l_b"] = rep.slippage->l_b;
    j["l_g"] = rep.slippage->l_g;
    j["v"] = rep.slippage->v;
    j["l_s"] = rep.slippage->l_s;
    j["ratio"] = rep.slippage->ratio;
    j["slippage_dominated"] = rep.slippage->slippage_dominated;
    s["slippage"] = j;
  }
  const auto& q = default_sphere_quadrature();
  s["quadrature"] = {{"gauss_legendre_nodes", q.gl_nodes()}, {"phi_points", q.phi_points}};
  s["defaults_applied"] = rep.config.defaults_applied;
  s["resolved_config"] = config_to_json(rep.config);
  return s;
}

}  // namespace detail

// build_rotor -> polarization -> solvation inversion -> alpha, beta ->
// saturation scales -> dynamics -> physical readout. Throws
// NumericalBlowup from the integrator; a switched-off mechanism is reported
// through `status`.
inline ScenarioReport evaluate_scenario(const ScenarioConfig& cfg) {
  ScenarioReport rep;
  rep.config = cfg;
  rep.chain = derive_chain(cfg);
  if (cfg.bunch_length && cfg.gain_length && cfg.velocity)
    rep.slippage = slippage_check(*cfg.bunch_length, *cfg.gain_length, *cfg.velocity);
  if (rep.chain.gain.mechanism_off) {
    rep.status = ExitCode::mechanism_off;
  } else {
    rep.run = run(cfg.sim);
    const auto& g = rep.chain.gain;
    if (rep.run->peak_state)
      rep.at_peak = physical_readout(*rep.run->peak_state, g, rep.chain.rotor, cfg.n_waters);
    rep.at_end = physical_readout(rep.run->final_state, g, rep.chain.rotor, cfg.n_waters);
  }
  rep.summary = detail::build_summary(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Output.

inline const char* trajectory_header = "tau,A0_scaled,phi,bunch_re,bunch_im,p_mean,conserved";

inline std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::string out = trajectory_header;
  out += '\n';
  for (const auto& r : rows)
    out += fmt::format("{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n", r.tau,
                       r.A0_scaled, r.phi, r.bunch_re, r.bunch_im, r.p_mean, r.conserved);
  return out;
}

inline std::vector<TrajectoryRow> parse_trajectory_csv(std::string_view text) {
  std::vector<TrajectoryRow> rows;
  std::size_t pos = 0, line_no = 0;
  bool header = true;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = detail::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      if (line != trajectory_header)
        throw InvalidArgument("trajectory csv: unexpected header on line " +
                              std::to_string(line_no));
      header = false;
      continue;
    }
    std::array<double, 7> v{};
    std::size_t field = 0;
    while (field < v.size()) {
      const auto comma = line.find(',');
      const auto tok = line.substr(0, comma);
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v[field]);
      if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw InvalidArgument("trajectory csv: bad number on line " + std::to_string(line_no));
      ++field;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (field != v.size())
      throw InvalidArgument("trajectory csv: expected 7 columns on line " +
                            std::to_string(line_no));
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return rows;
}

// Line chart of A0(tau) and |b|(tau). With log_scale the y axis is log10,
// floored at 1e-8.
inline std::string emit_plot(const std::vector<TrajectoryRow>& rows, bool log_scale = false) {
  if (rows.empty()) throw InvalidArgument("emit_plot: empty trajectory");
  constexpr double W = 800, H = 480, ml = 70, mr = 20, mt = 30, mb = 50;
  constexpr double floor_val = 1e-8;
  auto yval = [&](double v) { return log_scale ? std::log10(std::max(v, floor_val)) : v; };

  double t0 = rows.front().tau, t1 = rows.back().tau;
  if (t1 <= t0) t1 = t0 + 1.0;
  double ymin = log_scale ? std::log10(floor_val) : 0.0, ymax = ymin + 1.0;
  for (const auto& r : rows) {
    ymax = std::max({ymax, yval(r.A0_scaled), yval(std::hypot(r.bunch_re, r.bunch_im))});
    if (log_scale) ymin = std::min({ymin, yval(r.A0_scaled)});
  }
  if (!log_scale) ymax *= 1.05;
  auto px = [&](double t) { return ml + (t - t0) / (t1 - t0) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  auto polyline = [&](auto&& value, const char* colour) {
    std::string pts;
    for (const auto& r : rows) pts += fmt::format("{:.2f},{:.2f} ", px(r.tau), py(yval(value(r))));
    if (!pts.empty()) pts.pop_back();
    return fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", colour,
        pts);
  };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      W, H);
  svg += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{3}\" stroke=\"black\"/>\n",
      ml, H - mb, W - mr, mt);
  constexpr int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double t = t0 + (t1 - t0) * i / ticks;
    const double y = ymin + (ymax - ymin) * i / ticks;
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"middle\">{:.3g}</text>\n",
        px(t), H - mb + 18, t);
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
        ml - 6, py(y) + 4,
        log_scale ? fmt::format("1e{:.1f}", y) : fmt::format("{:.3g}", y));
  }
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"14\" text-anchor=\"middle\">tau</text>\n",
      (ml + W - mr) / 2, H - 10);
  svg += polyline([](const TrajectoryRow& r) { return r.A0_scaled; }, "#1f77b4");
  svg += polyline([](const TrajectoryRow& r) { return std::hypot(r.bunch_re, r.bunch_im); },
                  "#d62728");
  svg += fmt::format(
      "<text x=\"{0}\" y=\"20\" font-size=\"13\" fill=\"#1f77b4\">A0 (scaled)</text>\n"
      "<text x=\"{1}\" y=\"20\" font-size=\"13\" fill=\"#d62728\">|b|</text>\n",
      ml + 10, ml + 120);
  svg += "</svg>\n";
  return svg;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

// Writes summary.json and, when a simulation ran, trajectory.csv (plus
// trajectory.svg if requested) under `dir`.
inline void write_outputs(const ScenarioReport& rep, const std::filesystem::path& dir,
                          bool with_plot = false, bool log_scale = false) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "summary.json", rep.summary.dump(2) + "\n");
  if (rep.run) {
    write_text_file(dir / "trajectory.csv", trajectory_csv(rep.run->trajectory));
    if (with_plot)
      write_text_file(dir / "trajectory.svg", emit_plot(rep.run->trajectory, log_scale));
  }
}

// ---------------------------------------------------------------------------
// Grid over (rho, P_z) of the saturation scales.

struct SweepRow {
  double rho;
  double P_z;
  double A_sat;
  double t_gain;
};

// Rows ordered rho-major, P_z-minor; grid points may be evaluated on several
// threads, each into its own slot.
inline std::vector<SweepRow> sweep(const RigidRotor& rotor, double n, double delta_n_bar,
                                   const std::vector<double>& rho_values,
                                   const std::vector<double>& pz_values, unsigned threads = 1) {
  for (double r : rho_values)
    if (!(r > 0)) throw InvalidArgument("sweep: rho values must be > 0");
  for (double p : pz_values)
    if (!(p > 0)) throw InvalidArgument("sweep: P_z values must be > 0");
  std::vector<SweepRow> rows(rho_values.size() * pz_values.size());
  detail::parallel_chunks(rows.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      SystemParams p;
      p.n = n;
      p.delta_n_bar = delta_n_bar;
      p.rho = rho_values[k / pz_values.size()];
      p.P_z = pz_values[k % pz_values.size()];
      p.rotor = rotor;
      const auto g = gain_coefficients(p);
      rows[k] = {p.rho, p.P_z, g.A_sat, g.t_gain};
    }
  });
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "rho,P_z,A_sat,t_gain\n";
  for (const auto& r : rows)
    out += fmt::format("{:.17e},{:.17e},{:.17e},{:.17e}\n", r.rho, r.P_z, r.A_sat, r.t_gain);
  return out;
}

}  // namespace hydrofel
