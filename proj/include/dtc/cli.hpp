#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dtc/model.hpp"
#include "dtc/output.hpp"

namespace dtc::cli {

/// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "DTC_OUTPUT_ROOT";

/// Entry point of the `dtc` tool; `args` excludes the program name.
/// Returns 0 on success, 2 for usage/config errors, 3 for run failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fills the per-subcommand defaults into `config` (existing keys win).
KeyValueMap resolve_config(const std::string& subcommand, KeyValueMap config,
                           const std::string& engine = {});

/// Executes a config-driven subcommand into `directory`; returns the manifest
/// that was written next to the outputs.
io::RunManifest execute(const std::string& subcommand, const KeyValueMap& config,
                        const std::string& engine, const std::filesystem::path& directory,
                        bool with_spectrum = false, const std::string& stem = {});

}  // namespace dtc::cli
