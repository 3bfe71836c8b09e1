#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtc/meanfield.hpp"
#include "dtc/model.hpp"
#include "dtc/scan.hpp"
#include "dtc/series.hpp"
#include "dtc/spectrum.hpp"

namespace dtc::io {

/// 17 significant digits, enough to round-trip a double.
std::string format_real(double value);

std::string psos_csv(const meanfield::PsosCloud& cloud);
std::string stroboscopic_csv(const meanfield::StroboscopicSamples& samples);
std::string spectrum_csv(const PowerSpectrum& spectrum);
std::string scan_csv(const std::vector<ScanPoint>& points);
/// `n,magnetization,cumulative_truncation_weight`; an empty weight vector writes zeros.
std::string evolution_csv(const StroboscopicSeries& series,
                          const std::vector<double>& cumulative_truncation);

/// Reads a series back from any of the CSVs above (or a plain `n,value` file).
/// `column` selects the value column; empty picks sigma_y, magnetization or value.
StroboscopicSeries read_series_csv(const std::filesystem::path& path,
                                   const std::string& column = {}, double period = 1.0);

/// Writes through a temporary file and a rename so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> arguments;  // positional arguments (figure id, input file)
  KeyValueMap config;                  // fully resolved key/value set
  std::string engine;
  std::vector<std::string> outputs;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

std::string tool_version();

/// Adds version and timestamp and writes `manifest.json` into `directory`.
void write_manifest(const std::filesystem::path& directory, const RunManifest& manifest);

}  // namespace dtc::io
