#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dtc/model.hpp"
#include "dtc/series.hpp"

namespace dtc::ed {

inline constexpr int kMaxSites = 14;

/// Full 2^N state vector; site 0 is the most significant bit and bit value 0
/// is spin up (sigma_z = +1).
struct DenseState {
  Eigen::VectorXcd amplitudes;
  int sites = 0;

  static DenseState product(const ProductStateSpec& spec);
  double norm() const { return amplitudes.norm(); }
};

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// H(t) on `sites` spins with open boundaries, assembled from its bit-level
/// matrix elements.
SparseMatrix dense_hamiltonian(double t, const ModelParams& params, int sites);

/// Matrix-free H(t) = f(t) D + S with D = sum_j X_j and f(t) = -h cos^2(wt/2).
class Hamiltonian {
public:
  Hamiltonian(const ModelParams& params, int sites);

  int sites() const noexcept { return sites_; }
  /// f(t), the coefficient of D.
  double drive_coefficient(double t) const;
  /// out = (a D + b S) in
  void apply(double a, double b, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  /// Upper bound on the spectral norm of (a D + b S).
  double norm_bound(double a, double b) const;

private:
  ModelParams params_;
  int sites_;
  Eigen::VectorXd diagonal_;  // -J sum zz + lambda sum z
};

enum class Stepper {
  /// Fourth-order commutator-free Magnus: two exact exponentials of frozen
  /// Hamiltonians built from the Gauss-point samples.
  Magnus4,
  /// Classical RK4 on the Schroedinger equation.
  RungeKutta4,
};

struct EvolveOptions {
  Stepper stepper = Stepper::Magnus4;
  double norm_tolerance = 1e-8;  // per period
};

/// (1/N) sum_j <n . sigma_j>.
double measure_magnetization(const DenseState& state, const MagnetizationAxis& axis);

/// Advances `state` by n_periods periods in place.
void propagate_periods(DenseState& state, const ModelParams& params, double dt, int n_periods,
                       const EvolveOptions& options = {});

/// Evolves a copy of state0 and samples the magnetization after each period.
/// Requires dt <= T/100 dividing T. Throws AccuracyError when the norm drifts
/// by more than the tolerance within one period.
StroboscopicSeries ed_evolve(const DenseState& state0, const ModelParams& params, double dt,
                             int n_periods, const MagnetizationAxis& axis,
                             const EvolveOptions& options = {});

}  // namespace dtc::ed
