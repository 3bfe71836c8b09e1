#include "dtc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dtc/error.hpp"

namespace dtc::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

bool valid_key(const std::string& key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

KeyValueMap parse_config(std::string_view text) {
  KeyValueMap out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const std::string line = trim(strip_comment(raw));
    if (line.empty() || line.front() == '[') {
      // blank, comment or a TOML table header (tables are flattened)
      if (!line.empty() && line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_number), "malformed table header");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(trim(line), "expected 'key = value' on line " +
                                        std::to_string(line_number));
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!valid_key(key)) {
      throw ConfigError(key, "invalid key name on line " + std::to_string(line_number));
    }
    if (value.empty()) {
      throw ConfigError(key, "missing value on line " + std::to_string(line_number));
    }
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') {
        throw ConfigError(key, "unterminated string on line " + std::to_string(line_number));
      }
      value = value.substr(1, value.size() - 2);
    }
    if (!out.emplace(key, value).second) {
      throw ConfigError(key, "duplicate key on line " + std::to_string(line_number));
    }
  }
  return out;
}

KeyValueMap read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot read config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      // model
      "T", "N", "h", "epsilonT", "JT", "lambdaT", "phi", "sign",
      // numerics
      "n_periods", "steps_per_period", "dt_over_T", "M", "truncation_budget",
      // mean-field initial condition and phase-space sampling
      "P0", "Q0", "seeds_per_axis",
      // delta scans
      "deltas", "delta_min", "delta_max", "delta_step"};
  return keys;
}

void reject_unknown_keys(const KeyValueMap& config) {
  const auto& keys = known_keys();
  for (const auto& [key, value] : config) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(key, "unknown key");
    }
  }
}

void set_default(KeyValueMap& config, const std::string& key, const std::string& value) {
  config.emplace(key, value);
}

double get_real(const KeyValueMap& config, const std::string& key) {
  const auto it = config.find(key);
  if (it == config.end()) {
    throw ConfigError(key, "required key is missing");
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size() || !std::isfinite(value)) {
    throw ConfigError(key, "expected a real number, got '" + it->second + "'");
  }
  return value;
}

int get_int(const KeyValueMap& config, const std::string& key) {
  const double value = get_real(config, key);
  if (value != std::floor(value) || std::abs(value) > 1e9) {
    throw ConfigError(key, "expected an integer, got '" + config.at(key) + "'");
  }
  return static_cast<int>(value);
}

std::vector<double> get_list(const KeyValueMap& config, const std::string& key) {
  const auto it = config.find(key);
  if (it == config.end()) {
    throw ConfigError(key, "required key is missing");
  }
  std::string body = trim(it->second);
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') {
      throw ConfigError(key, "unterminated list");
    }
    body = body.substr(1, body.size() - 2);
  }
  std::vector<double> values;
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string token = trim(item);
    if (token.empty()) {
      continue;
    }
    KeyValueMap single{{key, token}};
    values.push_back(get_real(single, key));
  }
  if (values.empty()) {
    throw ConfigError(key, "empty list");
  }
  return values;
}

EngineOptions engine_options(const KeyValueMap& config) {
  EngineOptions options;
  options.n_periods = get_int(config, "n_periods");
  options.steps_per_period = get_int(config, "steps_per_period");
  options.dt_over_T = get_real(config, "dt_over_T");
  options.max_bond = get_int(config, "M");
  options.truncation_budget = get_real(config, "truncation_budget");
  if (options.n_periods < 1) {
    throw ConfigError("n_periods", "must be at least 1");
  }
  if (options.steps_per_period < 100) {
    throw ConfigError("steps_per_period", "must be at least 100");
  }
  if (!(options.dt_over_T > 0.0 && options.dt_over_T < 1.0)) {
    throw ConfigError("dt_over_T", "must lie in (0, 1)");
  }
  if (options.max_bond < 1) {
    throw ConfigError("M", "must be at least 1");
  }
  if (!(options.truncation_budget > 0.0)) {
    throw ConfigError("truncation_budget", "must be positive");
  }
  return options;
}

std::vector<double> delta_values(const KeyValueMap& config) {
  if (config.contains("deltas")) {
    return get_list(config, "deltas");
  }
  const double lo = get_real(config, "delta_min");
  const double hi = get_real(config, "delta_max");
  const double step = get_real(config, "delta_step");
  if (!(step > 0.0)) {
    throw ConfigError("delta_step", "must be positive");
  }
  if (hi < lo) {
    throw ConfigError("delta_max", "must not be below delta_min");
  }
  std::vector<double> values;
  const auto count = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= count; ++i) {
    values.push_back(lo + i * step);
  }
  return values;
}

}  // namespace dtc::cli
