#include <doctest.h>

#include <filesystem>
#include <map>
#include <fstream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "shuttle/config.hpp"
#include "shuttle/csv.hpp"

using namespace shuttle;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_test_tmp" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* small_dot_config =
    "[system]\n"
    "model = triple_dot\n"
    "j1_mev = -0.07\n"
    "j2_mev = -0.14\n"
    "transfer_time_ns = 1.0\n"
    "slices = 64\n"
    "\n"
    "[optimizer]\n"
    "fidelity_target = 0.8\n"
    "max_iters = 300\n"
    "restarts = 2\n"
    "seed = 5\n"
    "substeps = 16\n"
    "threads = 2\n";

}  // namespace

TEST_CASE("config parsing: valid file") {
  const fs::path dir = fresh_dir("config_ok");
  const fs::path path = dir / "run.ini";
  write_file(path,
             "# donor run\n"
             "[system]\n"
             "model = donor_chain\n"
             "delta_mev = 2.7\n"
             "transfer_time_ns = 1.0\n"
             "slices = 8000\n"
             "\n"
             "[optimizer]\n"
             "seed = 42\n"
             "restarts = 8\n"
             "\n"
             "[spin]\n"
             "b_fields_gauss = 0, 500\n"
             "\n"
             "[output]\n"
             "directory = results\n"
             "formats = csv, json\n");
  const RunConfig cfg = parse_run_config(path);
  CHECK(cfg.system == ModelKind::DonorChain);
  CHECK(cfg.delta_mev == 2.7);
  CHECK(cfg.slices == 8000);
  CHECK(cfg.optimizer.seed == 42);
  CHECK(cfg.optimizer.fidelity_target == 0.999);
  CHECK(cfg.optimizer.init_scale == 1e-4);  // donor default
  CHECK(cfg.integration.substeps == 64);
  CHECK(cfg.spin.present);
  CHECK(cfg.spin.b_fields_gauss == std::vector<double>{0.0, 500.0});
  CHECK(cfg.spin.hyperfine_mhz == 117.5);
  CHECK(cfg.output.directory == fs::path("results"));
  CHECK(cfg.output.csv);
  CHECK(cfg.output.json);

  const TransferProblem pb = cfg.make_problem();
  CHECK(pb.model.name == "donor_chain");
  CHECK(pb.rho0(0, 0).real() == 1.0);
  CHECK(pb.rho_target(2, 2).real() == 1.0);
}

TEST_CASE("config parsing: errors are line-anchored and strict") {
  const fs::path dir = fresh_dir("config_bad");

  const fs::path unknown = dir / "unknown.ini";
  write_file(unknown,
             "[system]\n"
             "model = donor_chain\n"
             "delta_mev = 2.7\n"
             "transfer_time_ns = 1.0\n"
             "slices = 100\n"
             "typo_key = 3\n");
  try {
    parse_run_config(unknown);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":6:") != std::string::npos);
    CHECK(std::string(e.what()).find("typo_key") != std::string::npos);
  }

  const fs::path missing = dir / "missing.ini";
  write_file(missing,
             "[system]\n"
             "model = donor_chain\n"
             "transfer_time_ns = 1.0\n"
             "slices = 100\n");
  CHECK_THROWS_AS(parse_run_config(missing), ConfigError);

  const fs::path badmodel = dir / "badmodel.ini";
  write_file(badmodel,
             "[system]\n"
             "model = pentuple_dot\n"
             "transfer_time_ns = 1.0\n"
             "slices = 100\n");
  CHECK_THROWS_AS(parse_run_config(badmodel), ConfigError);

  const fs::path badsection = dir / "badsection.ini";
  write_file(badsection, "[warp_drive]\nx = 1\n");
  CHECK_THROWS_AS(parse_run_config(badsection), ConfigError);

  const fs::path dup = dir / "dup.ini";
  write_file(dup,
             "[system]\n"
             "model = donor_chain\n"
             "model = donor_chain\n");
  CHECK_THROWS_AS(parse_run_config(dup), ConfigError);

  CHECK_THROWS_AS(parse_run_config(dir / "does_not_exist.ini"), ConfigError);
}

TEST_CASE("csv round trip is exact") {
  const fs::path dir = fresh_dir("csv");
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd data(37, 3);
  for (int r = 0; r < data.rows(); ++r)
    for (int c = 0; c < data.cols(); ++c)
      data(r, c) = dist(rng) * std::pow(10.0, (r % 13) - 6);

  const fs::path path = dir / "table.csv";
  write_csv(path, {"a", "b", "c"}, data, {"a comment"});
  const CsvTable back = read_csv(path);
  CHECK(back.columns == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(back.data.rows() == data.rows());
  for (int r = 0; r < data.rows(); ++r)
    for (int c = 0; c < data.cols(); ++c)
      CHECK(back.data(r, c) == data(r, c));
}

TEST_CASE("cmd_optimize writes outputs and is byte-deterministic") {
  const fs::path dir = fresh_dir("optimize");
  const fs::path cfg_path = dir / "run.ini";
  write_file(cfg_path, small_dot_config);

  const fs::path out1 = dir / "out1";
  CHECK(shuttle::cli::cmd_optimize(cfg_path, out1, std::nullopt) == 0);
  std::map<std::string, std::string> first_run;
  for (const char* name : {"pulses.csv", "populations.csv", "summary.json"}) {
    CHECK(fs::exists(out1 / name));
    first_run[name] = slurp(out1 / name);
  }
  // Re-running with the same config and seed reproduces every byte.
  CHECK(shuttle::cli::cmd_optimize(cfg_path, out1, std::nullopt) == 0);
  for (const auto& [name, bytes] : first_run) CHECK(slurp(out1 / name) == bytes);

  // A different seed changes the summary.
  const fs::path out3 = dir / "out3";
  CHECK(shuttle::cli::cmd_optimize(cfg_path, out3, 99) == 0);
  CHECK(slurp(out1 / "summary.json") != slurp(out3 / "summary.json"));

  // Round trip through the CSV reader sees the same pulse values.
  const CsvTable pulses = read_csv(out1 / "pulses.csv");
  CHECK(pulses.columns ==
        std::vector<std::string>{"t_ns", "mu_l_mev", "mu_r_mev"});
  CHECK(pulses.data.rows() == 64);

  // Spectrum runs on the produced pulses.
  CHECK(shuttle::cli::cmd_spectrum(out1 / "pulses.csv", std::nullopt) == 0);
  CHECK(fs::exists(out1 / "spectrum.csv"));

  CHECK(shuttle::cli::cmd_adiabatic_compare(out1 / "pulses.csv") == 0);
}

TEST_CASE("cmd_optimize rejects bad configs with exit 1") {
  const fs::path dir = fresh_dir("optimize_bad");
  const fs::path cfg_path = dir / "run.ini";
  write_file(cfg_path, "[system]\nmodel = donor_chain\nbogus = 1\n");
  CHECK(shuttle::cli::cmd_optimize(cfg_path, std::nullopt, std::nullopt) == 1);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("cmd_spin_transfer requires a spin section and donor pulses") {
  const fs::path dir = fresh_dir("spin_cli");
  const fs::path cfg_path = dir / "run.ini";
  write_file(cfg_path, small_dot_config);
  const fs::path pulses = dir / "pulses.csv";
  write_file(pulses,
             "t_ns,omega12_mev,omega23_mev\n"
             "0,0.1,0\n"
             "0.5,0,0.1\n");
  CHECK(shuttle::cli::cmd_spin_transfer(cfg_path, pulses, dir / "O") == 1);

  const fs::path donor_cfg = dir / "donor.ini";
  write_file(donor_cfg,
             "[system]\n"
             "model = donor_chain\n"
             "delta_mev = 2.7\n"
             "transfer_time_ns = 1.0\n"
             "slices = 2\n"
             "[spin]\n"
             "b_fields_gauss = 0\n");
  CHECK(shuttle::cli::cmd_spin_transfer(donor_cfg, pulses, dir / "O") == 0);
  CHECK(fs::exists(dir / "O" / "spin_up_up_0.csv"));
  CHECK(fs::exists(dir / "O" / "table1.json"));
}

TEST_CASE("cmd_spectrum rejects malformed input") {
  const fs::path dir = fresh_dir("spectrum_bad");
  const fs::path bad = dir / "pulses.csv";
  write_file(bad, "x,y\n1,2\n");
  CHECK(shuttle::cli::cmd_spectrum(bad, std::nullopt) == 1);
  CHECK(shuttle::cli::cmd_spectrum(dir / "absent.csv", std::nullopt) == 1);
}
