#include "dtc/model.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "dtc/error.hpp"

namespace dtc {

namespace {

void check_common(double period, int sites) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw DomainError("drive period T must be positive and finite");
  }
  if (sites < 1) {
    throw DomainError("site count N must be at least 1");
  }
}

std::optional<double> read_real(const KeyValueMap& config, const std::string& key) {
  auto it = config.find(key);
  if (it == config.end()) {
    return std::nullopt;
  }
  const std::string& text = it->second;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a real number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw ConfigError(key, "expected a real number, got '" + text + "'");
  }
  return value;
}

std::optional<int> read_int(const KeyValueMap& config, const std::string& key) {
  auto it = config.find(key);
  if (it == config.end()) {
    return std::nullopt;
  }
  const std::string& text = it->second;
  int value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return value;
}

}  // namespace

ModelParams::ModelParams(double field, double period, double coupling, double static_field,
                         double detuning, int sites, double axis_angle)
    : field_(field),
      period_(period),
      omega_(2.0 * std::numbers::pi / period),
      coupling_(coupling),
      static_field_(static_field),
      detuning_(detuning),
      sites_(sites),
      axis_angle_(axis_angle) {}

ModelParams ModelParams::from_detuning(double detuning, double period, double coupling,
                                       double static_field, int sites, double axis_angle) {
  check_common(period, sites);
  const double field = (std::numbers::pi + 2.0 * detuning * period) / period;
  return ModelParams(field, period, coupling, static_field, detuning, sites, axis_angle);
}

ModelParams ModelParams::from_field(double field, double period, double coupling,
                                    double static_field, int sites, double axis_angle) {
  check_common(period, sites);
  const double detuning = (field * period - std::numbers::pi) / (2.0 * period);
  return ModelParams(field, period, coupling, static_field, detuning, sites, axis_angle);
}

double ModelParams::drive_envelope(double t) const {
  const double c = std::cos(0.5 * omega_ * t);
  return c * c;
}

ModelParams ModelParams::with_sites(int sites) const {
  check_common(period_, sites);
  ModelParams copy = *this;
  copy.sites_ = sites;
  return copy;
}

ModelParams ModelParams::with_coupling(double coupling) const {
  ModelParams copy = *this;
  copy.coupling_ = coupling;
  return copy;
}

ModelParams ModelParams::with_imperfection(double delta) const {
  return from_detuning(delta / period_, period_, coupling_, delta / period_, sites_, axis_angle_);
}

ModelParams build_params(const KeyValueMap& config) {
  const auto period = read_real(config, "T");
  if (!period) {
    throw ConfigError("T", "required key is missing");
  }
  if (!(*period > 0.0)) {
    throw ConfigError("T", "must be positive");
  }
  const auto sites = read_int(config, "N");
  if (!sites) {
    throw ConfigError("N", "required key is missing");
  }
  if (*sites < 1) {
    throw ConfigError("N", "must be at least 1");
  }
  const auto field = read_real(config, "h");
  const auto detuning_t = read_real(config, "epsilonT");
  const double coupling_t = read_real(config, "JT").value_or(0.0);
  const double static_t = read_real(config, "lambdaT").value_or(0.0);
  const double angle = read_real(config, "phi").value_or(0.0);

  const double T = *period;
  if (!field && !detuning_t) {
    throw ConfigError("epsilonT", "one of 'h' or 'epsilonT' must be given");
  }
  if (detuning_t) {
    auto params = ModelParams::from_detuning(*detuning_t / T, T, coupling_t / T, static_t / T,
                                             *sites, angle);
    if (field) {
      const double tolerance = 1e-12 * std::max(1.0, std::abs(*field));
      if (std::abs(params.field() - *field) > tolerance) {
        throw ConfigError("h", "inconsistent with epsilonT (hT/2 = pi/2 + epsilonT)");
      }
    }
    return params;
  }
  return ModelParams::from_field(*field, T, coupling_t / T, static_t / T, *sites, angle);
}

ProductStateSpec::ProductStateSpec(double angle_, int sign_, int sites_)
    : angle(angle_), sign(sign_), sites(sites_) {
  if (sign != 1 && sign != -1) {
    throw DomainError("product state sign must be +1 or -1");
  }
  if (sites < 1) {
    throw DomainError("product state needs at least one site");
  }
}

MagnetizationAxis::MagnetizationAxis(double angle)
    : angle_(angle), components_{0.0, std::cos(angle), std::sin(angle)} {}

Eigen::Matrix2cd MagnetizationAxis::operator_matrix() const {
  return components_[1] * pauli::y() + components_[2] * pauli::z();
}

Spinor local_spinor(const ProductStateSpec& spec) {
  const double s = std::sin(spec.angle);
  const double c = std::cos(spec.angle);
  const double sign = spec.sign;
  // Magnitudes sqrt((1 +- sin)/2); the relative phase +-i sgn(cos) makes the
  // spinor an eigenvector of cos(phi) Y + sin(phi) Z.
  const double first = std::sqrt(std::max(0.0, 0.5 * (1.0 + sign * s)));
  const double second = std::sqrt(std::max(0.0, 0.5 * (1.0 - sign * s)));
  const double orientation = c < 0.0 ? -1.0 : 1.0;
  return {Complex(first, 0.0), Complex(0.0, sign * orientation * second)};
}

double magnetization_single(const Spinor& spinor, const MagnetizationAxis& axis) {
  const double norm = std::norm(spinor[0]) + std::norm(spinor[1]);
  if (std::abs(norm - 1.0) > 1e-10) {
    throw DomainError("spinor is not normalized");
  }
  const Eigen::Vector2cd v(spinor[0], spinor[1]);
  const double value = v.dot(axis.operator_matrix() * v).real();
  return std::clamp(value, -1.0, 1.0);
}

namespace pauli {

Eigen::Matrix2cd x() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Eigen::Matrix2cd y() {
  Eigen::Matrix2cd m;
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

Eigen::Matrix2cd z() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace pauli

}  // namespace dtc
