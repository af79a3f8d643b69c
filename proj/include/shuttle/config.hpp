#ifndef SHUTTLE_CONFIG_HPP
#define SHUTTLE_CONFIG_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "shuttle/optimizer.hpp"
#include "shuttle/spin_sim.hpp"

namespace shuttle {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, int line_number)
      : std::runtime_error(msg), line(line_number) {}
  int line;  // 0 when not tied to a specific line
};

struct SpinSection {
  bool present = false;
  double hyperfine_mhz = 117.5;
  bool hyperfine_raw_coefficient = false;
  double gamma_e_mhz_per_g = 2.8024952;   // free electron
  double gamma_n_mhz_per_g = 0.0017235;   // 31P nucleus
  std::vector<double> b_fields_gauss = {0.0, 500.0};

  SpinConfig make(double b_gauss) const {
    return make_spin_config(hyperfine_mhz, hyperfine_raw_coefficient,
                            gamma_e_mhz_per_g, gamma_n_mhz_per_g, b_gauss);
  }
};

struct OutputSection {
  std::filesystem::path directory = "out";
  bool csv = true;
  bool json = true;
};

// Parsed, validated run configuration (flat key-value file with one
// section per module; unknown keys are rejected).
struct RunConfig {
  ModelKind system = ModelKind::DonorChain;
  double delta_mev = 0.0;
  double j1_mev = 0.0;
  double j2_mev = 0.0;
  double transfer_time_ns = 1.0;
  int slices = 1;
  int initial_site = 1;
  int target_site = 3;

  OptimizerConfig optimizer;
  IntegrationOptions integration;
  SpinSection spin;
  OutputSection output;

  SystemModel make_model() const;
  TransferProblem make_problem() const;
};

RunConfig parse_run_config(const std::filesystem::path& path);

}  // namespace shuttle

#endif
