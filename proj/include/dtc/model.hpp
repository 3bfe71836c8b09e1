#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>

#include <Eigen/Dense>

namespace dtc {

using Complex = std::complex<double>;
using Spinor = std::array<Complex, 2>;
using KeyValueMap = std::map<std::string, std::string>;

/// Parameters of the harmonically driven Ising chain
///
///   H(t) = -h cos^2(wt/2) sum_j X_j - J sum_j Z_j Z_{j+1} + lambda sum_j (Y_j + Z_j)
///
/// with open boundaries. The detuning epsilon is tied to the field through
/// hT/2 = pi/2 + epsilon T, so exactly one of (field, detuning) is free.
/// Instances are immutable.
class ModelParams {
public:
  static ModelParams from_detuning(double detuning, double period, double coupling,
                                   double static_field, int sites, double axis_angle = 0.0);
  static ModelParams from_field(double field, double period, double coupling,
                                double static_field, int sites, double axis_angle = 0.0);

  double field() const noexcept { return field_; }
  double period() const noexcept { return period_; }
  double omega() const noexcept { return omega_; }
  double coupling() const noexcept { return coupling_; }
  double static_field() const noexcept { return static_field_; }
  double detuning() const noexcept { return detuning_; }
  int sites() const noexcept { return sites_; }
  double axis_angle() const noexcept { return axis_angle_; }

  /// cos^2(omega t / 2), the drive envelope.
  double drive_envelope(double t) const;

  ModelParams with_sites(int sites) const;
  ModelParams with_coupling(double coupling) const;
  /// epsilon T = lambda T = delta at fixed period and coupling.
  ModelParams with_imperfection(double delta) const;

private:
  ModelParams(double field, double period, double coupling, double static_field,
              double detuning, int sites, double axis_angle);

  double field_;
  double period_;
  double omega_;
  double coupling_;
  double static_field_;
  double detuning_;
  int sites_;
  double axis_angle_;
};

/// Builds validated parameters from a flat key/value map.
///
/// Recognized keys: T, N, h, epsilonT, JT, lambdaT, phi. T and N are required,
/// at least one of h / epsilonT must be present (both is accepted only when
/// they agree). Unrecognized keys are ignored here; the CLI layer rejects them.
ModelParams build_params(const KeyValueMap& config);

/// Uniform product state |psi_sign(phi)> on `sites` spins.
struct ProductStateSpec {
  double angle = 0.0;
  int sign = +1;
  int sites = 1;

  ProductStateSpec() = default;
  ProductStateSpec(double angle, int sign, int sites);
};

/// Unit vector n = cos(phi) y + sin(phi) z.
class MagnetizationAxis {
public:
  explicit MagnetizationAxis(double angle = 0.0);

  double angle() const noexcept { return angle_; }
  const std::array<double, 3>& components() const noexcept { return components_; }
  /// n . sigma as a 2x2 matrix.
  Eigen::Matrix2cd operator_matrix() const;

private:
  double angle_;
  std::array<double, 3> components_;
};

/// Per-site spinor of |psi_sign(phi)>; psi_1 is real and non-negative.
Spinor local_spinor(const ProductStateSpec& spec);

/// <s| n . sigma |s> for a normalized spinor.
double magnetization_single(const Spinor& spinor, const MagnetizationAxis& axis);

namespace pauli {
Eigen::Matrix2cd x();
Eigen::Matrix2cd y();
Eigen::Matrix2cd z();
}  // namespace pauli

}  // namespace dtc
