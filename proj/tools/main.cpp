#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Minimum-fluence control pulses for three-site electron shuttling"};
  app.require_subcommand(1);

  std::string config_path, pulses_path, out_dir;
  std::uint64_t seed = 0;

  auto* opt = app.add_subcommand("optimize",
                                 "Synthesize pulses and write pulses.csv, "
                                 "populations.csv and summary.json");
  opt->add_option("--config", config_path, "run configuration file")->required();
  opt->add_option("--out", out_dir, "output directory (overrides config)");
  auto* seed_opt = opt->add_option("--seed", seed, "seed override");

  auto* spec = app.add_subcommand("spectrum",
                                  "Discrete Fourier transform of a pulse file");
  spec->add_option("--pulses", pulses_path, "pulses.csv to analyze")->required();
  spec->add_option("--out", out_dir, "output directory (default: alongside input)");

  auto* spin = app.add_subcommand(
      "spin-transfer", "Propagate hyperfine eigenstates under spatial pulses");
  spin->add_option("--config", config_path, "run configuration file")->required();
  spin->add_option("--pulses", pulses_path, "pulses.csv from optimize")->required();
  spin->add_option("--out", out_dir, "output directory (overrides config)");

  auto* adia = app.add_subcommand(
      "adiabatic-compare", "Compare pulse magnitude against the adiabatic guideline");
  adia->add_option("--pulses", pulses_path, "pulses.csv to analyze")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  std::optional<std::filesystem::path> out =
      out_dir.empty() ? std::nullopt
                      : std::optional<std::filesystem::path>(out_dir);

  if (app.got_subcommand(opt)) {
    std::optional<std::uint64_t> seed_override;
    if (seed_opt->count() > 0) seed_override = seed;
    return shuttle::cli::cmd_optimize(config_path, out, seed_override);
  }
  if (app.got_subcommand(spec)) return shuttle::cli::cmd_spectrum(pulses_path, out);
  if (app.got_subcommand(spin))
    return shuttle::cli::cmd_spin_transfer(config_path, pulses_path, out);
  if (app.got_subcommand(adia))
    return shuttle::cli::cmd_adiabatic_compare(pulses_path);
  return 1;
}
