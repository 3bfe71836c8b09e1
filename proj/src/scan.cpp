#include "dtc/scan.hpp"

#include <cmath>

#include "dtc/ed.hpp"
#include "dtc/error.hpp"
#include "dtc/meanfield.hpp"
#include "dtc/mps.hpp"
#include "dtc/spectrum.hpp"

namespace dtc {

Engine engine_from_string(const std::string& name) {
  if (name == "meanfield") {
    return Engine::MeanField;
  }
  if (name == "mps") {
    return Engine::Mps;
  }
  if (name == "ed") {
    return Engine::Ed;
  }
  throw DomainError("unknown engine '" + name + "' (expected meanfield, mps or ed)");
}

const char* to_string(Engine engine) {
  switch (engine) {
    case Engine::MeanField:
      return "meanfield";
    case Engine::Mps:
      return "mps";
    case Engine::Ed:
      return "ed";
  }
  return "unknown";
}

StroboscopicSeries run_engine(Engine engine, const ModelParams& params,
                              const EngineOptions& options) {
  const MagnetizationAxis y_axis(0.0);
  const double dt = options.dt_over_T * params.period();
  switch (engine) {
    case Engine::MeanField: {
      meanfield::IntegratorOptions mf;
      mf.steps_per_period = options.steps_per_period;
      return meanfield::stroboscopic(meanfield::standard_initial_state(), options.n_periods,
                                     params, mf)
          .sigma_y_series();
    }
    case Engine::Mps: {
      auto state = mps::MpsState::product(ProductStateSpec(0.0, +1, params.sites()),
                                          options.max_bond);
      mps::EvolveOptions evolve;
      evolve.truncation_budget = options.truncation_budget;
      return mps::evolve_periods(state, params, dt, options.n_periods, y_axis, evolve)
          .magnetization;
    }
    case Engine::Ed: {
      const auto state = ed::DenseState::product(ProductStateSpec(0.0, +1, params.sites()));
      return ed::ed_evolve(state, params, dt, options.n_periods, y_axis);
    }
  }
  throw DomainError("unknown engine");
}

std::vector<ScanPoint> scan_delta(const ModelParams& base, const std::vector<double>& deltas,
                                  Engine engine, const EngineOptions& options) {
  std::vector<ScanPoint> curve;
  curve.reserve(deltas.size());
  for (double delta : deltas) {
    ScanPoint point;
    point.delta = delta;
    try {
      if (!std::isfinite(delta)) {
        throw DomainError("delta must be finite");
      }
      const auto series = run_engine(engine, base.with_imperfection(delta), options);
      point.peak = subharmonic_peak(power_spectrum(series));
    } catch (const Error& e) {
      point.peak = std::nan("");
      point.error = e.what();
    }
    curve.push_back(std::move(point));
  }
  return curve;
}

}  // namespace dtc
