#ifndef SHUTTLE_CLI_COMMANDS_HPP
#define SHUTTLE_CLI_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>

namespace shuttle::cli {

// Exit codes: 0 success, 1 usage/config error, 2 computation failure.

int cmd_optimize(const std::filesystem::path& config_path,
                 const std::optional<std::filesystem::path>& out_override,
                 const std::optional<std::uint64_t>& seed_override);

int cmd_spectrum(const std::filesystem::path& pulses_path,
                 const std::optional<std::filesystem::path>& out_override);

int cmd_spin_transfer(const std::filesystem::path& config_path,
                      const std::filesystem::path& pulses_path,
                      const std::optional<std::filesystem::path>& out_override);

int cmd_adiabatic_compare(const std::filesystem::path& pulses_path);

}  // namespace shuttle::cli

#endif
