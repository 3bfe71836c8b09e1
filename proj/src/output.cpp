#include "dtc/output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "dtc/error.hpp"

namespace dtc::io {

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string psos_csv(const meanfield::PsosCloud& cloud) {
  std::ostringstream out;
  out << "seed_P,seed_Q,n,P,Q\n";
  for (const auto& p : cloud.points) {
    const auto seed = cloud.seeds[p.seed].wrapped();
    out << format_real(seed.P) << ',' << format_real(seed.Q) << ',' << p.n << ','
        << format_real(p.state.P) << ',' << format_real(p.state.Q) << '\n';
  }
  return out.str();
}

std::string stroboscopic_csv(const meanfield::StroboscopicSamples& samples) {
  std::ostringstream out;
  out << "n,P,Q,sigma_y\n";
  for (std::size_t n = 0; n < samples.states.size(); ++n) {
    out << n << ',' << format_real(samples.states[n].P) << ','
        << format_real(samples.states[n].Q) << ',' << format_real(samples.sigma_y[n]) << '\n';
  }
  return out.str();
}

std::string spectrum_csv(const PowerSpectrum& spectrum) {
  std::ostringstream out;
  out << "omega_over_omega_drive,magnitude_sq\n";
  const double drive = spectrum.omega_drive();
  for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
    out << format_real(spectrum.omegas[k] / drive) << ','
        << format_real(spectrum.magnitudes[k]) << '\n';
  }
  return out.str();
}

std::string scan_csv(const std::vector<ScanPoint>& points) {
  std::ostringstream out;
  out << "delta,peak\n";
  for (const auto& p : points) {
    out << format_real(p.delta) << ',' << (p.error ? std::string("nan") : format_real(p.peak))
        << '\n';
  }
  return out.str();
}

std::string evolution_csv(const StroboscopicSeries& series,
                          const std::vector<double>& cumulative_truncation) {
  std::ostringstream out;
  out << "n,magnetization,cumulative_truncation_weight\n";
  auto weight = [&](std::size_t n) {
    return n < cumulative_truncation.size() ? cumulative_truncation[n] : 0.0;
  };
  out << 0 << ',' << format_real(series.initial) << ',' << format_real(weight(0)) << '\n';
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    out << i + 1 << ',' << format_real(series.values[i]) << ',' << format_real(weight(i + 1))
        << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
      cell.pop_back();
    }
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace

StroboscopicSeries read_series_csv(const std::filesystem::path& path, const std::string& column,
                                   double period) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot read series file " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DomainError("series file " + path.string() + " is empty");
  }
  const auto header = split_row(line);
  auto find = [&](const std::string& name) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) {
        return static_cast<std::ptrdiff_t>(i);
      }
    }
    return -1;
  };
  const std::ptrdiff_t n_col = find("n");
  if (n_col < 0) {
    throw DomainError("series file " + path.string() + " has no 'n' column");
  }
  std::ptrdiff_t v_col = -1;
  if (!column.empty()) {
    v_col = find(column);
  } else {
    for (const char* name : {"sigma_y", "magnetization", "value"}) {
      if ((v_col = find(name)) >= 0) {
        break;
      }
    }
  }
  if (v_col < 0) {
    throw DomainError("series file " + path.string() + " has no usable value column");
  }
  StroboscopicSeries series;
  series.period = period;
  series.label = path.filename().string();
  long expected = -1;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    const auto cells = split_row(line);
    const auto needed = static_cast<std::size_t>(std::max(n_col, v_col));
    if (cells.size() <= needed) {
      throw DomainError(path.string() + ":" + std::to_string(line_number) + ": short row");
    }
    long n = 0;
    double v = 0.0;
    try {
      n = std::stol(cells[static_cast<std::size_t>(n_col)]);
      v = std::stod(cells[static_cast<std::size_t>(v_col)]);
    } catch (const std::exception&) {
      throw DomainError(path.string() + ":" + std::to_string(line_number) + ": not a number");
    }
    if (expected < 0) {
      expected = n;
      if (n != 0 && n != 1) {
        throw DomainError(path.string() + ": series must start at n = 0 or n = 1");
      }
    }
    if (n != expected) {
      throw DomainError(path.string() + ":" + std::to_string(line_number) +
                        ": samples must be consecutive in n");
    }
    ++expected;
    if (n == 0) {
      series.initial = v;
    } else {
      series.values.push_back(v);
    }
  }
  series.validate();
  return series;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto temporary = path;
  temporary += ".tmp";
  {
    std::ofstream out(temporary, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("cannot write " + temporary.string());
    }
    out << content;
    out.flush();
    if (!out) {
      throw Error("short write to " + temporary.string());
    }
  }
  std::filesystem::rename(temporary, path);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["arguments"] = arguments;
  j["config"] = config;
  j["engine"] = engine;
  j["outputs"] = outputs;
  j["details"] = details;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.arguments = j.value("arguments", std::vector<std::string>{});
  m.config = j.at("config").get<KeyValueMap>();
  m.engine = j.value("engine", std::string{});
  m.outputs = j.value("outputs", std::vector<std::string>{});
  m.details = j.value("details", nlohmann::json::object());
  return m;
}

std::string tool_version() { return "0.1.0"; }

void write_manifest(const std::filesystem::path& directory, const RunManifest& manifest) {
  nlohmann::json j = manifest.to_json();
  j["tool_version"] = tool_version();
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  j["timestamp"] = stamp;
  write_atomic(directory / "manifest.json", j.dump(2) + "\n");
}

}  // namespace dtc::io
