#pragma once

#include <array>
#include <string>
#include <vector>

#include "dtc/model.hpp"
#include "dtc/series.hpp"

namespace dtc::meanfield {

/// Canonical pair of the site-uniform product ansatz: Q = |psi1|^2 - |psi2|^2,
/// P = arg psi2 - arg psi1. P may be unwrapped; use wrapped() to observe.
struct State {
  double Q = 0.0;
  double P = 0.0;

  State wrapped() const;
  /// <sigma_y> = sqrt(1 - Q^2) sin P.
  double sigma_y() const;
};

/// Harmonic uses cos^2(wt/2); Frozen replaces it by its period average 1/2.
enum class DriveEnvelope { Harmonic, Frozen };

struct IntegratorOptions {
  int steps_per_period = 1000;
  DriveEnvelope envelope = DriveEnvelope::Harmonic;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  ModelParams params;
};

struct Derivative {
  double dQ = 0.0;
  double dP = 0.0;
};

/// Mean-field energy per site
///   H = -h sqrt(1-Q^2) cos P env(t) - J (1 + Q^2) + lambda (sqrt(1-Q^2) sin P + Q).
double energy(const State& state, double t, const ModelParams& params,
              DriveEnvelope envelope = DriveEnvelope::Harmonic);

/// Hamilton equations in the canonical chart: dQ/dt = -2 dH/dP, dP/dt = 2 dH/dQ.
/// Throws PoleError when |Q| >= 1 - 1e-12 and a term that couples to P is active.
Derivative eom_rhs(const State& state, double t, const ModelParams& params,
                   DriveEnvelope envelope = DriveEnvelope::Harmonic);

/// RK4 from t0 to t1 (t1 > t0) with step T / steps_per_period; every step is
/// recorded and the last step is shortened to land on t1.
Trajectory integrate(const State& initial, double t0, double t1, const ModelParams& params,
                     const IntegratorOptions& options = {});

/// Endpoint of the same RK4 flow; t1 < t0 integrates backward in time.
State propagate(const State& initial, double t0, double t1, const ModelParams& params,
                const IntegratorOptions& options = {});

/// Stroboscopic samples at t = nT, n = 0..n_periods.
struct StroboscopicSamples {
  std::vector<State> states;  // wrapped
  std::vector<double> sigma_y;
  double period = 1.0;

  /// <sigma_y>(nT) for n >= 1 as a spectral input.
  StroboscopicSeries sigma_y_series() const;
};

StroboscopicSamples stroboscopic(const State& initial, int n_periods, const ModelParams& params,
                                 const IntegratorOptions& options = {});

struct PsosPoint {
  std::size_t seed = 0;  // index into PsosCloud::seeds
  int n = 0;
  State state;
};

struct PsosCloud {
  std::vector<PsosPoint> points;  // seed-major, time-minor
  std::vector<State> seeds;
  int n_periods = 0;
  std::vector<std::string> warnings;
};

/// Union of the stroboscopic orbits of every seed. Seeds with |Q| at a pole
/// are skipped and reported in `warnings`.
PsosCloud psos(const std::vector<State>& seeds, int n_periods, const ModelParams& params,
               const IntegratorOptions& options = {});

/// Uniform grid: P in (-pi, pi], Q in [-0.95, 0.95].
std::vector<State> default_seed_grid(int per_axis = 24);

/// The ideal period-doubling point (P, Q) = (pi/2, 0), i.e. the +y spinor.
State standard_initial_state();

/// Canonical coordinates of a spinor and back; psi_1 is taken real.
State from_spinor(const Spinor& spinor);
Spinor to_spinor(const State& state);

}  // namespace dtc::meanfield
