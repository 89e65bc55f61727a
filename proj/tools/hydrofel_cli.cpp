// hydrofel: derive, verify, simulate and sweep the collective-instability
// model of ion-solvated water.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hydrofel/hydrofel.hpp"

namespace fs = std::filesystem;
using namespace hydrofel;

namespace {

struct RunFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> particles;
  std::optional<double> dt;
  std::optional<double> tau_end;
  std::optional<unsigned> threads;
  bool plot = false;
  bool log_scale = false;
};

void add_run_flags(CLI::App* app, RunFlags& f, bool config_required) {
  auto* opt = app->add_option("--config", f.config, "scenario config (key = value text or summary.json)");
  if (config_required) opt->required();
  app->add_option("--out", f.out, "output directory (overrides output_dir)");
  app->add_option("--seed", f.seed, "rng seed");
  app->add_option("--particles", f.particles, "number of particles");
  app->add_option("--dt", f.dt, "scaled time step");
  app->add_option("--tau-end", f.tau_end, "scaled end time");
  app->add_option("--threads", f.threads, "worker threads for the particle update");
  app->add_flag("--plot", f.plot, "also write trajectory.svg");
  app->add_flag("--log-scale", f.log_scale, "log-scale y axis in the plot");
}

ScenarioConfig resolve(ScenarioConfig c, const RunFlags& f) {
  if (f.seed) c.sim.rng_seed = *f.seed;
  if (f.particles) c.sim.n_particles = *f.particles;
  if (f.dt) c.sim.dt = *f.dt;
  if (f.tau_end) c.sim.tau_end = *f.tau_end;
  if (f.threads) c.sim.threads = *f.threads;
  if (!f.out.empty()) c.output_dir = f.out;
  c.validate();
  return c;
}

void print_chain(const DerivedChain& d) {
  const auto& r = d.rotor;
  fmt::print("rotor\n");
  fmt::print("  I_ave            {:.6e} kg m^2\n", r.I_ave);
  fmt::print("  E_split          {:.6e} J  ({:.2f} cm^-1 as E/hbar c)\n", r.E_split,
             split_wavenumber_per_cm(r));
  fmt::print("  omega_c          {:.6e} rad/s\n", r.omega_c);
  fmt::print("  l_c              {:.2f} um\n", r.l_c / micrometre);
  fmt::print("  d0, d0~          {:.6e}, {:.6e} C m\n", r.d0, r.d0_tilde);
  fmt::print("thermal (T = {} K)\n", d.thermal.temperature);
  for (std::size_t l = 0; l < d.thermal.ratios.size(); ++l)
    fmt::print("  R_{}              {:.4f}\n", l, d.thermal.ratios[l]);
  fmt::print("  E/2kT            {:.4f}\n", d.half_gap_kT);
  fmt::print("  dn (thermal)     {:.4f}\n", d.thermal.delta_n_thermal);
  fmt::print("polarization\n");
  fmt::print("  P_z              {:.6e} ({})\n", d.P_z,
             d.P_z_from_field ? "linearized field" : "override");
  fmt::print("  w_+, w_-         {:.4f}, {:.4f}\n", d.polarization.w_plus, d.polarization.w_minus);
  fmt::print("  dn (solvation)   {:.4f}\n", d.polarization.delta_n_bar);
  fmt::print("gain\n");
  fmt::print("  rho              {:.6e} m^-3 ({:.4f} um^-3)\n", d.rho, d.rho * 1e-18);
  fmt::print("  alpha, beta      {:.6e}, {:.6e}\n", d.gain.alpha_coef, d.gain.beta_coef);
  const auto pref = universal_prefactors(r, d.params.n, d.params.delta_n_bar);
  fmt::print("  c_A              {:.6e} m^3 kg s^-2 A^-1\n", pref.c_A);
  fmt::print("  c_t              {:.6e} m^-1 s\n", pref.c_t);
  if (d.gain.mechanism_off) {
    fmt::print("  mechanism off (P_z = 0): A_sat = 0, gain time infinite\n");
  } else {
    fmt::print("  A_sat            {:.6e} m kg s^-2 A^-1\n", d.gain.A_sat);
    fmt::print("  t_gain           {:.6e} s\n", d.gain.t_gain);
  }
  const auto& q = default_sphere_quadrature();
  fmt::print("quadrature         {} Gauss-Legendre x {} phi points\n", q.gl_nodes(),
             q.phi_points);
}

int execute(const ScenarioConfig& cfg, const RunFlags& f) {
  const auto rep = evaluate_scenario(cfg);
  write_outputs(rep, cfg.output_dir, f.plot, f.log_scale);
  const auto& s = rep.summary;
  if (rep.status == ExitCode::mechanism_off) {
    fmt::print("mechanism off: P_z = 0, gain time infinite; summary written to {}\n",
               (fs::path(cfg.output_dir) / "summary.json").string());
    return static_cast<int>(ExitCode::mechanism_off);
  }
  fmt::print("A_sat            {:.4e}\n", s["A_sat"].get<double>());
  fmt::print("t_gain           {:.4e} s\n", s["t_gain"].get<double>());
  const auto& d = rep.run->diagnostics;
  fmt::print("growth rate      {:.5f} (per unit tau)\n", d.growth_rate_fit);
  fmt::print("saturation peak  {:.4f} at tau = {:.2f}, |b| = {:.3f}\n", d.sat_peak, d.sat_tau,
             d.bunching_at_sat);
  fmt::print("first-integral drift {:.3e}\n", d.conserved_drift);
  if (rep.at_peak && rep.at_peak->validity_warning)
    std::cerr << "warning: max |theta_dot| / omega_c = " << rep.at_peak->validity_ratio
              << " exceeds 1e-2; slow-phase approximation questionable\n";
  if (rep.slippage && rep.slippage->slippage_dominated)
    fmt::print("slippage-dominated (superradiance scenario abandoned): l_s / l_b = {:.3e}\n",
               rep.slippage->ratio);
  fmt::print("outputs in {}\n", cfg.output_dir);
  return 0;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": bad number '" + tok + "'", what);
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": empty list", what);
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open '" + p.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective-instability model of radiation coherence in ion-solvated water"};
  app.require_subcommand(1);

  RunFlags derive_f, sim_f, axon_f, sweep_f;
  auto* derive = app.add_subcommand("derive", "print the physical derivation chain");
  derive->add_option("--config", derive_f.config, "scenario config (default: axon preset)");

  auto* verify = app.add_subcommand("verify", "run the algebra and quadrature self-checks");

  auto* simulate = app.add_subcommand("simulate", "run a scenario from a config file");
  add_run_flags(simulate, sim_f, true);

  auto* axon = app.add_subcommand("axon", "run the myelinated-axon preset");
  add_run_flags(axon, axon_f, false);
  axon->remove_option(axon->get_option("--config"));

  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate A_sat and t_gain over a rho x P_z grid");
  std::string rho_list, pz_list;
  sweep_cmd->add_option("--config", sweep_f.config, "scenario config for n_waters, delta_w (default: axon preset)");
  sweep_cmd->add_option("--rho", rho_list, "comma-separated ion concentrations, m^-3")->required();
  sweep_cmd->add_option("--pz", pz_list, "comma-separated polarizations")->required();
  sweep_cmd->add_option("--out", sweep_f.out, "output directory");
  sweep_cmd->add_option("--threads", sweep_f.threads, "worker threads");

  auto* plot = app.add_subcommand("plot", "render trajectory.csv as an SVG line chart");
  std::string plot_in, plot_out;
  bool plot_log = false;
  plot->add_option("--input", plot_in, "trajectory csv (default: <out>/trajectory.csv)");
  plot->add_option("--out", plot_out, "output directory")->required();
  plot->add_flag("--log-scale", plot_log, "log-scale y axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::config_error);
  }

  try {
    if (*derive) {
      const auto cfg = derive_f.config.empty() ? axon_config() : load_config(derive_f.config);
      print_chain(derive_chain(cfg));
      return 0;
    }
    if (*verify) {
      bool ok = true;
      for (const auto& c : run_verification()) {
        fmt::print("[{}] {:<45} deviation {:.3e} (tol {:.0e})\n", c.passed() ? "PASS" : "FAIL",
                   c.name, c.deviation, c.tolerance);
        ok = ok && c.passed();
      }
      return ok ? 0 : 1;
    }
    if (*simulate) return execute(resolve(load_config(sim_f.config), sim_f), sim_f);
    if (*axon) return execute(resolve(axon_config(), axon_f), axon_f);
    if (*sweep_cmd) {
      const auto cfg = sweep_f.config.empty() ? axon_config() : load_config(sweep_f.config);
      const auto rows =
          sweep(water_rotor(), cfg.n_waters, solvation_inversion(cfg.n_waters, cfg.delta_w),
                parse_list(rho_list, "rho"), parse_list(pz_list, "pz"),
                sweep_f.threads.value_or(1));
      const fs::path dir = sweep_f.out.empty() ? fs::path(cfg.output_dir) : fs::path(sweep_f.out);
      write_text_file(dir / "sweep.csv", sweep_csv(rows));
      for (const auto& r : rows)
        fmt::print("rho {:.4e}  P_z {:.4e}  A_sat {:.4e}  t_gain {:.4e}\n", r.rho, r.P_z, r.A_sat,
                   r.t_gain);
      return 0;
    }
    if (*plot) {
      const fs::path in = plot_in.empty() ? fs::path(plot_out) / "trajectory.csv" : fs::path(plot_in);
      const auto rows = parse_trajectory_csv(read_file(in));
      write_text_file(fs::path(plot_out) / "trajectory.svg", emit_plot(rows, plot_log));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config_error);
  } catch (const RangeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config_error);
  } catch (const NumericalBlowup& e) {
    std::cerr << "numerical blowup: " << e.what() << "\n";
    return static_cast<int>(ExitCode::numerical_blowup);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::failure);
  }
  return 0;
}
