#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "dtc/model.hpp"
#include "dtc/series.hpp"
#include "dtc/trotter.hpp"

namespace dtc::mps {

/// Rank-3 site tensor stored as one (left x right) matrix per physical state.
using SiteTensor = std::array<Eigen::MatrixXcd, 2>;

struct TruncationLog {
  double cumulative_weight = 0.0;  // sum of discarded squared singular values
  double largest_weight = 0.0;     // worst single gate
  std::size_t gates = 0;
  std::size_t truncating_gates = 0;
};

struct GateReport {
  double discarded_weight = 0.0;
  double norm_before = 1.0;  // squared norm of the gated tensor before truncation
  int kept = 0;
};

/// Singular values below this fraction of the largest one are always dropped.
inline constexpr double kRelativeCutoff = 1e-14;

/// Open-boundary MPS of spin-1/2 sites in mixed canonical form.
class MpsState {
public:
  static MpsState product(const ProductStateSpec& spec, int max_bond);

  int sites() const noexcept { return static_cast<int>(tensors_.size()); }
  int max_bond() const noexcept { return max_bond_; }
  int center() const noexcept { return center_; }
  std::vector<int> bond_dims() const;
  const SiteTensor& site(int j) const { return tensors_.at(static_cast<std::size_t>(j)); }
  const TruncationLog& truncation() const noexcept { return log_; }

  /// Exact; keeps the canonical form.
  void apply_single(int site, const Eigen::Matrix2cd& gate);

  /// Contract sites (bond, bond + 1), apply the gate, SVD, keep at most
  /// max_bond singular values, renormalize. The center ends on the side
  /// given by `center_right`.
  GateReport apply_two_site(int bond, const Eigen::Matrix4cd& gate, bool center_right = true);

  void move_center(int target);

  double norm_squared() const;
  /// <O_j> for every site.
  std::vector<double> local_expectations(const Eigen::Matrix2cd& op) const;
  /// (1/N) sum_j <n . sigma_j>.
  double magnetization(const MagnetizationAxis& axis) const;

  /// Full 2^N amplitude vector, site 0 as most significant bit (N <= 20).
  Eigen::VectorXcd to_dense() const;

private:
  MpsState(std::vector<SiteTensor> tensors, int max_bond);

  void move_center_right();
  void move_center_left();

  std::vector<SiteTensor> tensors_;
  int max_bond_;
  int center_ = 0;
  TruncationLog log_;
};

/// Applies one schedule entry, moving the canonical center as needed.
GateReport apply_gate(MpsState& state, const GateEntry& entry, const ModelParams& params,
                      double dt);

/// A gate schedule compiled into layers of commuting gates. Single-site terms
/// are folded into the bond gate that covers their site within the same stage.
class PeriodPropagator {
public:
  explicit PeriodPropagator(const GateSchedule& schedule, const ModelParams& params);

  struct Report {
    double discarded_weight = 0.0;
    double unitarity_drift = 0.0;  // sum over gates of |norm^2 before truncation - 1|
  };

  /// Evolves by one period.
  Report apply(MpsState& state) const;

  std::size_t layer_count() const noexcept { return layers_.size(); }

private:
  struct Layer {
    std::vector<std::pair<int, Eigen::Matrix4cd>> bonds;
    std::vector<std::pair<int, Eigen::Matrix2cd>> singles;
  };
  std::vector<Layer> layers_;
};

struct EvolveOptions {
  double truncation_budget = 1e-2;  // per period
};

struct Evolution {
  StroboscopicSeries magnetization;
  std::vector<double> cumulative_truncation;  // n = 0..n_periods
  std::vector<double> norm_drift;             // |1 - norm^2| before renormalization, per period
};

/// Evolves `state` in place for n_periods drive periods and measures the
/// magnetization along `axis` after each one. Throws AccuracyError when a
/// single period discards more than the truncation budget.
Evolution evolve_periods(MpsState& state, const ModelParams& params, double dt, int n_periods,
                         const MagnetizationAxis& axis, const EvolveOptions& options = {});

double measure_magnetization(const MpsState& state, const MagnetizationAxis& axis);

}  // namespace dtc::mps
