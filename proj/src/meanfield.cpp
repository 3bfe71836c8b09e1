#include "dtc/meanfield.hpp"

#include <cmath>
#include <numbers>

#include "dtc/error.hpp"

namespace dtc::meanfield {

namespace {

constexpr double kPoleMargin = 1e-12;
constexpr double kPi = std::numbers::pi;

// The canonical chart is singular at |Q| = 1, and the orbits of interest
// (pi rotations about x starting on the equator) cross it every period.
// The flow is therefore integrated on the Bloch sphere r = <sigma>, where
// dr/dt = 2 grad(H) x r is regular, and mapped back to (Q, P) on output.
using Vec3 = std::array<double, 3>;

double envelope_at(double t, const ModelParams& params, DriveEnvelope envelope) {
  return envelope == DriveEnvelope::Frozen ? 0.5 : params.drive_envelope(t);
}

Vec3 bloch_rhs(const Vec3& r, double t, const ModelParams& params, DriveEnvelope envelope) {
  const double lambda = params.static_field();
  const Vec3 g{-params.field() * envelope_at(t, params, envelope), lambda,
               lambda - 2.0 * params.coupling() * r[2]};
  return {2.0 * (g[1] * r[2] - g[2] * r[1]), 2.0 * (g[2] * r[0] - g[0] * r[2]),
          2.0 * (g[0] * r[1] - g[1] * r[0])};
}

Vec3 axpy(const Vec3& r, double a, const Vec3& k) {
  return {r[0] + a * k[0], r[1] + a * k[1], r[2] + a * k[2]};
}

Vec3 rk4_step(const Vec3& r, double t, double h, const ModelParams& params,
              DriveEnvelope envelope) {
  const Vec3 k1 = bloch_rhs(r, t, params, envelope);
  const Vec3 k2 = bloch_rhs(axpy(r, 0.5 * h, k1), t + 0.5 * h, params, envelope);
  const Vec3 k3 = bloch_rhs(axpy(r, 0.5 * h, k2), t + 0.5 * h, params, envelope);
  const Vec3 k4 = bloch_rhs(axpy(r, h, k3), t + h, params, envelope);
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    out[i] = r[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

Vec3 to_bloch(const State& s) {
  const double rho = std::sqrt(std::max(0.0, 1.0 - s.Q * s.Q));
  return {rho * std::cos(s.P), rho * std::sin(s.P), s.Q};
}

// Keeps P continuous with `previous` (no 2 pi jumps).
State to_canonical(const Vec3& r, double previous_P) {
  const double norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  State s;
  s.Q = std::clamp(r[2] / norm, -1.0, 1.0);
  const double angle = std::atan2(r[1], r[0]);
  s.P = angle + 2.0 * kPi * std::round((previous_P - angle) / (2.0 * kPi));
  return s;
}

void check_state(const State& s) {
  if (!std::isfinite(s.Q) || !std::isfinite(s.P) || std::abs(s.Q) > 1.0 + kPoleMargin) {
    throw DomainError("mean-field state needs finite P and |Q| <= 1");
  }
}

template <typename Visit>
Vec3 run_rk4(const State& initial, double t0, double t1, const ModelParams& params,
             const IntegratorOptions& options, Visit&& visit) {
  if (options.steps_per_period < 1) {
    throw DomainError("steps_per_period must be positive");
  }
  check_state(initial);
  const double span = t1 - t0;
  const double direction = span < 0.0 ? -1.0 : 1.0;
  const double step = params.period() / options.steps_per_period;
  const double full = std::floor(std::abs(span) / step * (1.0 + 1e-12));
  const auto n_full = static_cast<long long>(full);
  Vec3 r = to_bloch(initial);
  for (long long k = 0; k < n_full; ++k) {
    const double t = t0 + direction * static_cast<double>(k) * step;
    r = rk4_step(r, t, direction * step, params, options.envelope);
    visit(t0 + direction * static_cast<double>(k + 1) * step, r);
  }
  const double reached = t0 + direction * static_cast<double>(n_full) * step;
  const double rest = t1 - reached;
  if (std::abs(rest) > 1e-12 * params.period()) {
    r = rk4_step(r, reached, rest, params, options.envelope);
    visit(t1, r);
  }
  return r;
}

}  // namespace

State State::wrapped() const {
  double p = std::remainder(P, 2.0 * kPi);  // [-pi, pi]
  if (p <= -kPi) {
    p += 2.0 * kPi;
  }
  return {Q, p};
}

double State::sigma_y() const {
  return std::sqrt(std::max(0.0, 1.0 - Q * Q)) * std::sin(P);
}

double energy(const State& state, double t, const ModelParams& params, DriveEnvelope envelope) {
  if (!(std::abs(state.Q) <= 1.0 + kPoleMargin)) {
    throw DomainError("mean-field energy needs |Q| <= 1");
  }
  const double Q = std::clamp(state.Q, -1.0, 1.0);
  const double rho = std::sqrt(1.0 - Q * Q);
  return -params.field() * rho * std::cos(state.P) * envelope_at(t, params, envelope) -
         params.coupling() * (1.0 + Q * Q) +
         params.static_field() * (rho * std::sin(state.P) + Q);
}

Derivative eom_rhs(const State& state, double t, const ModelParams& params,
                   DriveEnvelope envelope) {
  const double drive = params.field() * envelope_at(t, params, envelope);
  const double lambda = params.static_field();
  if (std::abs(state.Q) >= 1.0 - kPoleMargin && (drive != 0.0 || lambda != 0.0)) {
    throw PoleError("canonical equations are singular at |Q| = 1");
  }
  const double Q = state.Q;
  const double rho = std::sqrt(1.0 - Q * Q);
  const double sinP = std::sin(state.P);
  const double cosP = std::cos(state.P);
  // dH/dP and dH/dQ of the mean-field energy
  const double dH_dP = drive * rho * sinP + lambda * rho * cosP;
  double dH_dQ = -2.0 * params.coupling() * Q + lambda;
  if (rho > 0.0) {
    dH_dQ += drive * Q / rho * cosP - lambda * Q / rho * sinP;
  }
  return {-2.0 * dH_dP, 2.0 * dH_dQ};
}

Trajectory integrate(const State& initial, double t0, double t1, const ModelParams& params,
                     const IntegratorOptions& options) {
  if (!(t1 > t0)) {
    throw DomainError("integrate needs t1 > t0");
  }
  if (options.steps_per_period < 100) {
    throw DomainError("steps_per_period must be at least 100");
  }
  Trajectory out{{t0}, {initial}, params};
  const auto steps = static_cast<std::size_t>(
      std::ceil((t1 - t0) / params.period() * options.steps_per_period)) + 1;
  out.times.reserve(steps + 1);
  out.states.reserve(steps + 1);
  run_rk4(initial, t0, t1, params, options, [&](double t, const Vec3& r) {
    out.times.push_back(t);
    out.states.push_back(to_canonical(r, out.states.back().P));
  });
  return out;
}

State propagate(const State& initial, double t0, double t1, const ModelParams& params,
                const IntegratorOptions& options) {
  double last_P = initial.P;
  const Vec3 r = run_rk4(initial, t0, t1, params, options, [&](double, const Vec3& v) {
    last_P = to_canonical(v, last_P).P;
  });
  return to_canonical(r, last_P);
}

StroboscopicSeries StroboscopicSamples::sigma_y_series() const {
  StroboscopicSeries series;
  series.period = period;
  series.label = "meanfield sigma_y";
  if (!sigma_y.empty()) {
    series.initial = sigma_y.front();
    series.values.assign(sigma_y.begin() + 1, sigma_y.end());
  }
  return series;
}

StroboscopicSamples stroboscopic(const State& initial, int n_periods, const ModelParams& params,
                                 const IntegratorOptions& options) {
  if (n_periods < 1) {
    throw DomainError("stroboscopic sampling needs n_periods >= 1");
  }
  StroboscopicSamples out;
  out.period = params.period();
  out.states.reserve(static_cast<std::size_t>(n_periods) + 1);
  out.sigma_y.reserve(static_cast<std::size_t>(n_periods) + 1);
  auto record = [&](const State& s) {
    const State w = s.wrapped();
    out.states.push_back(w);
    out.sigma_y.push_back(w.sigma_y());
  };
  record(initial);
  State current = initial;
  const double T = params.period();
  for (int n = 0; n < n_periods; ++n) {
    current = propagate(current, n * T, (n + 1) * T, params, options);
    record(current);
  }
  return out;
}

PsosCloud psos(const std::vector<State>& seeds, int n_periods, const ModelParams& params,
               const IntegratorOptions& options) {
  PsosCloud cloud;
  cloud.seeds = seeds;
  cloud.n_periods = n_periods;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const State& seed = seeds[i];
    if (!(std::abs(seed.Q) < 1.0 - kPoleMargin)) {
      cloud.warnings.push_back("seed " + std::to_string(i) + " at Q=" + std::to_string(seed.Q) +
                               " lies on a pole of the (Q, P) chart; skipped");
      continue;
    }
    const auto samples = stroboscopic(seed, n_periods, params, options);
    for (std::size_t n = 0; n < samples.states.size(); ++n) {
      cloud.points.push_back({i, static_cast<int>(n), samples.states[n]});
    }
  }
  return cloud;
}

std::vector<State> default_seed_grid(int per_axis) {
  if (per_axis < 2) {
    throw DomainError("seed grid needs at least 2 points per axis");
  }
  std::vector<State> grid;
  grid.reserve(static_cast<std::size_t>(per_axis) * per_axis);
  for (int i = 0; i < per_axis; ++i) {
    const double P = -kPi + 2.0 * kPi * (i + 1) / per_axis;
    for (int j = 0; j < per_axis; ++j) {
      const double Q = -0.95 + 1.9 * j / (per_axis - 1);
      grid.push_back({Q, P});
    }
  }
  return grid;
}

State standard_initial_state() { return {0.0, 0.5 * kPi}; }

State from_spinor(const Spinor& spinor) {
  State s;
  s.Q = std::norm(spinor[0]) - std::norm(spinor[1]);
  s.P = std::arg(spinor[1]) - std::arg(spinor[0]);
  return s.wrapped();
}

Spinor to_spinor(const State& state) {
  const double Q = std::clamp(state.Q, -1.0, 1.0);
  return {Complex(std::sqrt(0.5 * (1.0 + Q)), 0.0),
          std::polar(std::sqrt(0.5 * (1.0 - Q)), state.P)};
}

}  // namespace dtc::meanfield
