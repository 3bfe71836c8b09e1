#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dtc/model.hpp"
#include "dtc/series.hpp"

namespace dtc {

enum class Engine { MeanField, Mps, Ed };

Engine engine_from_string(const std::string& name);
const char* to_string(Engine engine);

/// Numerical knobs shared by every engine; each engine reads only its own.
struct EngineOptions {
  int n_periods = 1200;
  int steps_per_period = 1000;  // mean-field RK4
  double dt_over_T = 0.001;     // mps / ed
  int max_bond = 30;            // mps
  double truncation_budget = 1e-2;
};

/// Runs `engine` from the standard initial state (all spins along +y) and
/// returns the y magnetization (or <sigma_y>) at t = nT.
StroboscopicSeries run_engine(Engine engine, const ModelParams& params,
                              const EngineOptions& options);

struct ScanPoint {
  double delta = 0.0;
  double peak = 0.0;
  std::optional<std::string> error;  // set when the engine failed at this point
};

/// Subharmonic peak as epsilon T = lambda T = delta is varied at fixed coupling.
/// A failing point is recorded and the scan continues.
std::vector<ScanPoint> scan_delta(const ModelParams& base, const std::vector<double>& deltas,
                                  Engine engine, const EngineOptions& options);

}  // namespace dtc
