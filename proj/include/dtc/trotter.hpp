#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dtc/model.hpp"

namespace dtc::mps {

enum class Generator { DriveX, FieldYZ, IsingZZ };

const char* to_string(Generator g);

/// One exponential exp(-i coefficient * dt * h_local(time)) of the splitting.
struct GateEntry {
  int substep = 0;           // substep index within the period
  int stage = 0;             // exponential index within the substep
  double time = 0.0;         // offset within the period where the generator is evaluated
  double coefficient = 0.0;  // fraction of the substep
  int site = 0;              // target site, or left site of the bond (site, site + 1)
  bool two_site = false;
  Generator generator = Generator::DriveX;
};

/// Two-group splitting exp(dt(A + B)) ~ prod_i exp(a_i dt A) exp(b_i dt B),
/// applied left to right (a_1 first).
struct SplittingCoefficients {
  std::string name;
  std::vector<double> a;
  std::vector<double> b;
};

/// Ruth's third-order scheme (local error O(dt^4)).
const SplittingCoefficients& third_order_coefficients();

/// Ordered gates realizing one drive period.
///
/// Group A holds the drive and static-field terms on every site plus the
/// Ising terms on bonds (0,1), (2,3), ...; group B holds the remaining bonds.
/// B is time independent, so it carries the clock: the A exponentials are
/// evaluated at the time reached by the preceding B fractions, which keeps the
/// splitting third order for the time-dependent drive.
struct GateSchedule {
  std::vector<GateEntry> entries;
  double substep = 0.0;
  int substeps = 0;
  int sites = 0;
  std::string scheme;

  /// max over substeps, generators and targets of |sum of coefficients - 1|.
  double consistency_error() const;
};

/// Rejects dt >= T and dt that do not divide T to 1e-12.
GateSchedule trotter_schedule(const ModelParams& params, double dt);

/// Hermitian local generator of an entry (2x2 for one site, 4x4 for a bond;
/// the 4x4 basis index is 2 * s_left + s_right with s = 0 for spin up).
Eigen::MatrixXcd local_generator(const GateEntry& entry, const ModelParams& params);

/// exp(-i tau H) for Hermitian H.
Eigen::MatrixXcd unitary_exponential(const Eigen::MatrixXcd& hermitian, double tau);

/// Unitary of one entry, exp(-i coefficient dt h_local).
Eigen::MatrixXcd gate_unitary(const GateEntry& entry, const ModelParams& params, double dt);

}  // namespace dtc::mps
