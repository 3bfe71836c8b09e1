#include "dtc/trotter.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "dtc/error.hpp"

namespace dtc::mps {

const char* to_string(Generator g) {
  switch (g) {
    case Generator::DriveX:
      return "drive-x";
    case Generator::FieldYZ:
      return "field-yz";
    case Generator::IsingZZ:
      return "ising-zz";
  }
  return "unknown";
}

const SplittingCoefficients& third_order_coefficients() {
  static const SplittingCoefficients ruth{
      "ruth3",
      {7.0 / 24.0, 3.0 / 4.0, -1.0 / 24.0},
      {2.0 / 3.0, -2.0 / 3.0, 1.0},
  };
  return ruth;
}

double GateSchedule::consistency_error() const {
  // (substep, generator, site, two_site) -> sum of coefficients
  std::map<std::tuple<int, int, int, bool>, double> sums;
  for (const auto& e : entries) {
    sums[{e.substep, static_cast<int>(e.generator), e.site, e.two_site}] += e.coefficient;
  }
  double worst = 0.0;
  for (const auto& [key, sum] : sums) {
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

GateSchedule trotter_schedule(const ModelParams& params, double dt) {
  const double T = params.period();
  if (!(dt > 0.0) || dt >= T) {
    throw DomainError("Trotter step must satisfy 0 < dt < T");
  }
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-12 * std::max(1.0, ratio)) {
    throw DomainError("Trotter step must divide the drive period");
  }
  const int substeps = static_cast<int>(rounded);
  const int N = params.sites();
  const bool has_bonds = params.coupling() != 0.0 && N > 1;
  const auto& scheme = third_order_coefficients();

  GateSchedule schedule;
  schedule.substep = T / substeps;
  schedule.substeps = substeps;
  schedule.sites = N;
  schedule.scheme = scheme.name;
  const double h = schedule.substep;

  for (int k = 0; k < substeps; ++k) {
    const double start = k * h;
    double clock = 0.0;  // advanced only by the B fractions
    int stage = 0;
    for (std::size_t i = 0; i < scheme.a.size(); ++i) {
      const double a = scheme.a[i];
      const double at = start + clock * h;
      for (int j = 0; j < N; ++j) {
        schedule.entries.push_back({k, stage, at, a, j, false, Generator::DriveX});
        schedule.entries.push_back({k, stage, at, a, j, false, Generator::FieldYZ});
      }
      if (has_bonds) {
        for (int j = 0; j + 1 < N; j += 2) {
          schedule.entries.push_back({k, stage, at, a, j, true, Generator::IsingZZ});
        }
      }
      ++stage;

      const double b = scheme.b[i];
      const double mid = start + (clock + 0.5 * b) * h;
      if (has_bonds) {
        for (int j = 1; j + 1 < N; j += 2) {
          schedule.entries.push_back({k, stage, mid, b, j, true, Generator::IsingZZ});
        }
      }
      clock += b;
      ++stage;
    }
  }
  return schedule;
}

Eigen::MatrixXcd local_generator(const GateEntry& entry, const ModelParams& params) {
  switch (entry.generator) {
    case Generator::DriveX:
      return -params.field() * params.drive_envelope(entry.time) * pauli::x();
    case Generator::FieldYZ:
      return params.static_field() * (pauli::y() + pauli::z());
    case Generator::IsingZZ: {
      const Eigen::Matrix2cd z = pauli::z();
      Eigen::Matrix4cd zz = Eigen::kroneckerProduct(z, z);
      return -params.coupling() * zz;
    }
  }
  throw DomainError("unknown generator");
}

Eigen::MatrixXcd unitary_exponential(const Eigen::MatrixXcd& hermitian, double tau) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of a local generator failed");
  }
  const Eigen::VectorXd& w = solver.eigenvalues();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    phases[i] = std::polar(1.0, -tau * w[i]);
  }
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

Eigen::MatrixXcd gate_unitary(const GateEntry& entry, const ModelParams& params, double dt) {
  return unitary_exponential(local_generator(entry, params), entry.coefficient * dt);
}

}  // namespace dtc::mps
