#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dtc/model.hpp"
#include "dtc/scan.hpp"

namespace dtc::cli {

/// Parses flat `key = value` text (a TOML subset): one pair per line, `#`
/// starts a comment, values may be quoted or a bracketed list. Duplicate keys
/// and malformed lines are errors that name the key or line.
KeyValueMap parse_config(std::string_view text);

KeyValueMap read_config_file(const std::filesystem::path& path);

/// Every key any subcommand understands.
const std::vector<std::string>& known_keys();

/// Throws ConfigError naming the first unrecognized key.
void reject_unknown_keys(const KeyValueMap& config);

/// Adds `value` under `key` only when the key is absent.
void set_default(KeyValueMap& config, const std::string& key, const std::string& value);

double get_real(const KeyValueMap& config, const std::string& key);
int get_int(const KeyValueMap& config, const std::string& key);
std::vector<double> get_list(const KeyValueMap& config, const std::string& key);

/// Numerical options read from n_periods, steps_per_period, dt_over_T, M and
/// truncation_budget (all must be present).
EngineOptions engine_options(const KeyValueMap& config);

/// Delta values from `deltas`, or from delta_min/delta_max/delta_step.
std::vector<double> delta_values(const KeyValueMap& config);

}  // namespace dtc::cli
