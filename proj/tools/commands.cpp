#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include <json.hpp>

#include "shuttle/config.hpp"
#include "shuttle/constants.hpp"
#include "shuttle/csv.hpp"
#include "shuttle/optimizer.hpp"
#include "shuttle/spectrum.hpp"
#include "shuttle/spin_sim.hpp"

namespace shuttle::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Adiabatic-transfer guideline: omega_max * t_max / pi ~ 3.75.
constexpr double adiabatic_guideline = 3.75;

ordered_json echo_config(const RunConfig& cfg) {
  ordered_json j;
  ordered_json& sys = j["system"];
  sys["model"] = cfg.system == ModelKind::DonorChain ? "donor_chain" : "triple_dot";
  if (cfg.system == ModelKind::DonorChain) {
    sys["delta_mev"] = cfg.delta_mev;
  } else {
    sys["j1_mev"] = cfg.j1_mev;
    sys["j2_mev"] = cfg.j2_mev;
  }
  sys["transfer_time_ns"] = cfg.transfer_time_ns;
  sys["slices"] = cfg.slices;
  sys["initial_site"] = cfg.initial_site;
  sys["target_site"] = cfg.target_site;
  ordered_json& opt = j["optimizer"];
  opt["epsilon0"] = cfg.optimizer.epsilon0;
  opt["max_iters"] = cfg.optimizer.max_iters;
  opt["fidelity_target"] = cfg.optimizer.fidelity_target;
  opt["grad_tol"] = cfg.optimizer.grad_tol;
  opt["restarts"] = cfg.optimizer.restarts;
  opt["seed"] = cfg.optimizer.seed;
  opt["init_scale_mev"] = cfg.optimizer.init_scale;
  opt["threads"] = cfg.optimizer.threads;
  opt["substeps"] = cfg.integration.substeps;
  opt["slice_frozen_controls"] = cfg.integration.slice_frozen_controls;
  if (cfg.spin.present) {
    ordered_json& spin = j["spin"];
    spin["hyperfine_mhz"] = cfg.spin.hyperfine_mhz;
    spin["hyperfine_raw_coefficient"] = cfg.spin.hyperfine_raw_coefficient;
    spin["gamma_e_mhz_per_gauss"] = cfg.spin.gamma_e_mhz_per_g;
    spin["gamma_n_mhz_per_gauss"] = cfg.spin.gamma_n_mhz_per_g;
    spin["b_fields_gauss"] = cfg.spin.b_fields_gauss;
  }
  ordered_json& out = j["output"];
  out["directory"] = cfg.output.directory.string();
  std::vector<std::string> formats;
  if (cfg.output.csv) formats.push_back("csv");
  if (cfg.output.json) formats.push_back("json");
  out["formats"] = formats;
  return j;
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

struct LoadedPulses {
  PiecewiseControls controls;
};

// Reads a pulses.csv written by cmd_optimize: a t_ns column followed by
// one column per physical control.
LoadedPulses load_pulses(const fs::path& path) {
  const CsvTable table = read_csv(path);
  if (table.columns.size() < 2 || table.columns[0] != "t_ns")
    throw std::runtime_error(path.string() +
                             ": expected columns t_ns,<control>_mev,...");
  if (table.data.rows() < 2)
    throw std::runtime_error(path.string() + ": need at least two slices");
  LoadedPulses lp;
  const Eigen::Index n = table.data.rows();
  const Eigen::Index p = table.data.cols() - 1;
  const double dt = table.data(1, 0) - table.data(0, 0);
  if (!(dt > 0.0)) throw std::runtime_error(path.string() + ": non-increasing time grid");
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double step = table.data(k + 1, 0) - table.data(k, 0);
    if (std::abs(step - dt) > 1e-9 * dt)
      throw std::runtime_error(path.string() + ": time grid is not uniform");
  }
  lp.controls.dt = dt;
  lp.controls.values = table.data.rightCols(p);
  for (Eigen::Index c = 1; c < table.data.cols(); ++c) {
    std::string name = table.columns[c];
    if (name.size() > 4 && name.substr(name.size() - 4) == "_mev")
      name = name.substr(0, name.size() - 4);
    lp.controls.control_names.push_back(name);
  }
  return lp;
}

std::string format_gauss(double b) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", b);
  return buf;
}

}  // namespace

int cmd_optimize(const fs::path& config_path,
                 const std::optional<fs::path>& out_override,
                 const std::optional<std::uint64_t>& seed_override) {
  RunConfig cfg;
  try {
    cfg = parse_run_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  if (out_override) cfg.output.directory = *out_override;
  if (seed_override) cfg.optimizer.seed = *seed_override;

  const TransferProblem problem = cfg.make_problem();
  OptimizationResult result;
  try {
    result = optimize(problem, cfg.optimizer);
  } catch (const OptimizationFailed& e) {
    std::cerr << "optimization failed: " << e.what() << "\n";
    return 2;
  }

  fs::create_directories(cfg.output.directory);
  const int n = result.controls.slices();
  const double dt = result.controls.dt;

  if (cfg.output.csv) {
    Eigen::MatrixXd pulse_table(n, problem.model.p() + 1);
    for (int k = 0; k < n; ++k) pulse_table(k, 0) = k * dt;
    pulse_table.rightCols(problem.model.p()) = result.controls.values;
    std::vector<std::string> cols = {"t_ns"};
    for (const auto& name : problem.model.control_names) cols.push_back(name + "_mev");
    write_csv(cfg.output.directory / "pulses.csv", cols, pulse_table);

    const auto rho = propagate(problem.rho0, problem.model, result.controls);
    Eigen::MatrixXd pop_table(n + 1, 4);
    for (int k = 0; k <= n; ++k) {
      pop_table(k, 0) = k * dt;
      for (int s = 0; s < 3; ++s) pop_table(k, s + 1) = rho[k](s, s).real();
    }
    write_csv(cfg.output.directory / "populations.csv",
              {"t_ns", "rho11", "rho22", "rho33"}, pop_table);
  }

  if (cfg.output.json) {
    ordered_json j;
    j["fidelity"] = result.fidelity;
    j["fluence_mev2_ns"] = result.fluence;
    j["phi0_star_mev"] = std::vector<double>(
        result.phi0_star.data(), result.phi0_star.data() + 8);
    j["converged"] = result.converged;
    j["stop_reason"] = to_string(result.reason);
    j["restart_index"] = result.restart_index;
    j["seed"] = cfg.optimizer.seed;
    ordered_json hist = ordered_json::array();
    for (const auto& rec : result.history) {
      ordered_json h;
      h["iteration"] = rec.iteration;
      h["fidelity"] = rec.fidelity;
      h["gradient_norm"] = rec.gradient_norm;
      h["step_size"] = rec.step_size;
      hist.push_back(std::move(h));
    }
    j["history"] = std::move(hist);
    ordered_json restarts = ordered_json::array();
    for (const auto& r : result.restarts) {
      ordered_json h;
      h["restart_index"] = r.restart_index;
      h["fidelity"] = r.fidelity;
      h["stop_reason"] = to_string(r.reason);
      h["iterations"] = r.history.size();
      if (!r.error.empty()) h["error"] = r.error;
      restarts.push_back(std::move(h));
    }
    j["restarts"] = std::move(restarts);
    j["config"] = echo_config(cfg);
    write_json(cfg.output.directory / "summary.json", j);
  }

  std::cout << "fidelity " << result.fidelity << ", fluence " << result.fluence
            << " meV^2 ns, " << to_string(result.reason) << " (restart "
            << result.restart_index << ")\n";
  return result.converged ? 0 : 2;
}

int cmd_spectrum(const fs::path& pulses_path,
                 const std::optional<fs::path>& out_override) {
  LoadedPulses lp;
  try {
    lp = load_pulses(pulses_path);
  } catch (const std::exception& e) {
    std::cerr << "spectrum: " << e.what() << "\n";
    return 1;
  }
  const Spectrum spec = control_spectrum(lp.controls);
  const int bins = static_cast<int>(spec.freq_ghz.size());
  const int p = static_cast<int>(spec.magnitude.cols());

  Eigen::MatrixXd table(bins, 1 + 2 * p);
  table.col(0) = spec.freq_ghz;
  std::vector<std::string> cols = {"freq_ghz"};
  for (int m = 0; m < p; ++m) {
    table.col(1 + m) = spec.magnitude.col(m);
    cols.push_back("mag_" + lp.controls.control_names[m]);
  }
  for (int m = 0; m < p; ++m) {
    table.col(1 + p + m) = spec.phase.col(m);
    cols.push_back("phase_" + lp.controls.control_names[m] + "_rad");
  }

  std::vector<std::string> comments;
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "dominant_bin = %d (%.*g GHz)",
                  spec.dominant_bin, 17, spec.freq_ghz[spec.dominant_bin]);
    comments.push_back(buf);
    for (int m = 1; m < p; ++m) {
      std::snprintf(buf, sizeof(buf),
                    "relative_phase_rad(%s vs %s) at dominant bin = %.*g",
                    lp.controls.control_names[m].c_str(),
                    lp.controls.control_names[0].c_str(), 17,
                    spec.relative_phase[m]);
      comments.push_back(buf);
    }
  }

  const fs::path out_dir =
      out_override ? *out_override : pulses_path.parent_path();
  fs::create_directories(out_dir.empty() ? "." : out_dir);
  write_csv((out_dir.empty() ? "." : out_dir) / "spectrum.csv", cols, table,
            comments);
  for (const auto& c : comments) std::cout << c << "\n";
  return 0;
}

int cmd_spin_transfer(const fs::path& config_path, const fs::path& pulses_path,
                      const std::optional<fs::path>& out_override) {
  RunConfig cfg;
  try {
    cfg = parse_run_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  if (!cfg.spin.present) {
    std::cerr << "spin transfer requires a [spin] section in the config\n";
    return 1;
  }
  if (cfg.system != ModelKind::DonorChain) {
    std::cerr << "spin transfer is defined for the donor chain model\n";
    return 1;
  }
  LoadedPulses lp;
  try {
    lp = load_pulses(pulses_path);
  } catch (const std::exception& e) {
    std::cerr << "spin-transfer: " << e.what() << "\n";
    return 1;
  }
  if (lp.controls.values.cols() != 2) {
    std::cerr << "spin-transfer: expected two control columns\n";
    return 1;
  }
  if (out_override) cfg.output.directory = *out_override;
  fs::create_directories(cfg.output.directory);

  ordered_json table;
  table["hyperfine_mhz"] = cfg.spin.hyperfine_mhz;
  table["entries"] = ordered_json::array();

  for (const double b : cfg.spin.b_fields_gauss) {
    const SpinConfig spin_cfg = cfg.spin.make(b);
    const auto eigenstates = single_site_hyperfine_eigenstates(spin_cfg);
    for (const auto& state : eigenstates) {
      const Eigen::VectorXcd psi0 = make_initial_site1_state(state.state);
      const SpinTrajectory traj =
          propagate_spin(psi0, lp.controls, spin_cfg, cfg.delta_mev);
      const Eigen::Matrix4cd rho_hf =
          state.state * state.state.adjoint();

      const int n = lp.controls.slices();
      Eigen::MatrixXd out(n + 1, 4);
      for (int k = 0; k <= n; ++k) {
        out(k, 0) = traj.times[k];
        out(k, 1) = site_population(traj.states[k], 1);
        out(k, 2) = site_population(traj.states[k], 3);
        out(k, 3) = distance_measure(site3_reduced(traj.states[k]), rho_hf);
      }
      const std::string file_name =
          "spin_" + state.label + "_" + format_gauss(b) + ".csv";
      if (cfg.output.csv)
        write_csv(cfg.output.directory / file_name,
                  {"t_ns", "site1_pop", "site3_pop", "distance"}, out);

      ordered_json entry;
      entry["b_gauss"] = b;
      entry["label"] = state.label;
      entry["energy_mev"] = state.energy;
      std::vector<double> coeffs;
      for (int i = 0; i < 4; ++i) coeffs.push_back(state.state[i].real());
      entry["coefficients"] = coeffs;
      entry["spatial_fidelity"] = spatial_fidelity(traj.states.back());
      entry["final_distance"] = out(n, 3);
      table["entries"].push_back(std::move(entry));
      std::cout << "B = " << b << " G, " << state.label
                << ": spatial fidelity "
                << table["entries"].back()["spatial_fidelity"].get<double>()
                << ", final D " << out(n, 3) << "\n";
    }
  }
  if (cfg.output.json)
    write_json(cfg.output.directory / "table1.json", table);
  return 0;
}

int cmd_adiabatic_compare(const fs::path& pulses_path) {
  LoadedPulses lp;
  try {
    lp = load_pulses(pulses_path);
  } catch (const std::exception& e) {
    std::cerr << "adiabatic-compare: " << e.what() << "\n";
    return 1;
  }
  const double omega_max = lp.controls.values.cwiseAbs().maxCoeff();
  const double total_time = lp.controls.duration();
  std::cout << "omega_max_mev = " << omega_max << "\n";
  std::cout << "optimal_time_ns = " << total_time << "\n";
  if (omega_max == 0.0) {
    std::cerr << "warning: zero pulse, implied adiabatic time is infinite\n";
    std::cout << "adiabatic_time_ns = inf\nratio = inf\n";
    return 0;
  }
  const double t_adiabatic =
      adiabatic_guideline * std::numbers::pi * hbar_mev_ns / omega_max;
  std::cout << "adiabatic_time_ns = " << t_adiabatic << "\n";
  std::cout << "ratio = " << t_adiabatic / total_time << "\n";
  return 0;
}

}  // namespace shuttle::cli
