#include "dtc/ed.hpp"

#include <cmath>
#include <vector>

#include "dtc/error.hpp"

namespace dtc::ed {

namespace {

void check_sites(int sites) {
  if (sites < 1 || sites > kMaxSites) {
    throw DomainError("dense evolution supports 1.." + std::to_string(kMaxSites) +
                      " sites, got " + std::to_string(sites));
  }
}

inline int bit_of(int sites, int site) { return sites - 1 - site; }

// <s ^ bit| Y |s> for the flipped partner: -i if the site is up in s' ... written
// from the row's point of view: row state up -> -i, row state down -> +i.
inline Complex y_element(std::size_t row, int bit) {
  return ((row >> bit) & 1U) == 0 ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
}

int substeps_for(const ModelParams& params, double dt) {
  const double T = params.period();
  if (!(dt > 0.0) || dt > T / 100.0 * (1.0 + 1e-12)) {
    throw DomainError("dense evolution needs 0 < dt <= T/100");
  }
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw DomainError("dense evolution needs dt to divide the period");
  }
  return static_cast<int>(rounded);
}

// psi <- exp(-i tau (a D + b S)) psi by a Taylor series, split into chunks
// with tau * ||a D + b S|| <= 1/2.
void exp_apply(const Hamiltonian& H, double a, double b, double tau, Eigen::VectorXcd& psi,
               Eigen::VectorXcd& term, Eigen::VectorXcd& scratch) {
  const double bound = H.norm_bound(a, b) * std::abs(tau);
  const int chunks = std::max(1, static_cast<int>(std::ceil(bound / 0.5)));
  const double sub = tau / chunks;
  for (int c = 0; c < chunks; ++c) {
    term = psi;
    const double scale = psi.norm();
    for (int k = 1; k < 60; ++k) {
      H.apply(a, b, term, scratch);
      term = scratch * Complex(0.0, -sub / k);
      psi += term;
      if (term.norm() <= 1e-17 * scale) {
        break;
      }
    }
  }
}

}  // namespace

DenseState DenseState::product(const ProductStateSpec& spec) {
  check_sites(spec.sites);
  const Spinor s = local_spinor(spec);
  const std::size_t dim = std::size_t{1} << spec.sites;
  DenseState out;
  out.sites = spec.sites;
  out.amplitudes.resize(static_cast<Eigen::Index>(dim));
  for (std::size_t idx = 0; idx < dim; ++idx) {
    Complex amp = 1.0;
    for (int j = 0; j < spec.sites; ++j) {
      amp *= s[(idx >> bit_of(spec.sites, j)) & 1U];
    }
    out.amplitudes[static_cast<Eigen::Index>(idx)] = amp;
  }
  return out;
}

SparseMatrix dense_hamiltonian(double t, const ModelParams& params, int sites) {
  check_sites(sites);
  const Hamiltonian H(params, sites);
  const double f = H.drive_coefficient(t);
  const std::size_t dim = std::size_t{1} << sites;
  // Column-by-column action on basis vectors.
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(dim * static_cast<std::size_t>(sites + 1));
  Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  Eigen::VectorXcd column(static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    basis[static_cast<Eigen::Index>(col)] = 1.0;
    H.apply(f, 1.0, basis, column);
    basis[static_cast<Eigen::Index>(col)] = 0.0;
    for (Eigen::Index row = 0; row < column.size(); ++row) {
      if (column[row] != Complex(0.0, 0.0)) {
        triplets.emplace_back(row, static_cast<Eigen::Index>(col), column[row]);
      }
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Hamiltonian::Hamiltonian(const ModelParams& params, int sites) : params_(params), sites_(sites) {
  check_sites(sites);
  const std::size_t dim = std::size_t{1} << sites;
  diagonal_.resize(static_cast<Eigen::Index>(dim));
  for (std::size_t idx = 0; idx < dim; ++idx) {
    double zz = 0.0;
    double z = 0.0;
    for (int j = 0; j < sites; ++j) {
      const double zj = ((idx >> bit_of(sites, j)) & 1U) ? -1.0 : 1.0;
      z += zj;
      if (j + 1 < sites) {
        const double zn = ((idx >> bit_of(sites, j + 1)) & 1U) ? -1.0 : 1.0;
        zz += zj * zn;
      }
    }
    diagonal_[static_cast<Eigen::Index>(idx)] =
        -params.coupling() * zz + params.static_field() * z;
  }
}

double Hamiltonian::drive_coefficient(double t) const {
  return -params_.field() * params_.drive_envelope(t);
}

void Hamiltonian::apply(double a, double b, const Eigen::VectorXcd& in,
                        Eigen::VectorXcd& out) const {
  const Eigen::Index dim = in.size();
  out.resize(dim);
  const double lambda = b * params_.static_field();
  for (Eigen::Index row = 0; row < dim; ++row) {
    Complex acc = b * diagonal_[row] * in[row];
    const auto r = static_cast<std::size_t>(row);
    for (int bit = 0; bit < sites_; ++bit) {
      const auto partner = static_cast<Eigen::Index>(r ^ (std::size_t{1} << bit));
      acc += (a + lambda * y_element(r, bit)) * in[partner];
    }
    out[row] = acc;
  }
}

double Hamiltonian::norm_bound(double a, double b) const {
  return std::abs(b) * diagonal_.cwiseAbs().maxCoeff() +
         sites_ * (std::abs(a) + std::abs(b * params_.static_field()));
}

double measure_magnetization(const DenseState& state, const MagnetizationAxis& axis) {
  const int N = state.sites;
  const auto& psi = state.amplitudes;
  const double cy = axis.components()[1];
  const double cz = axis.components()[2];
  double total = 0.0;
  for (Eigen::Index row = 0; row < psi.size(); ++row) {
    const auto r = static_cast<std::size_t>(row);
    const double weight = std::norm(psi[row]);
    for (int j = 0; j < N; ++j) {
      const int bit = bit_of(N, j);
      const double z = ((r >> bit) & 1U) ? -1.0 : 1.0;
      const auto partner = static_cast<Eigen::Index>(r ^ (std::size_t{1} << bit));
      const Complex y = std::conj(psi[row]) * y_element(r, bit) * psi[partner];
      total += cz * z * weight + cy * y.real();
    }
  }
  return total / N;
}

void propagate_periods(DenseState& state, const ModelParams& params, double dt, int n_periods,
                       const EvolveOptions& options) {
  check_sites(state.sites);
  const int steps = substeps_for(params, dt);
  const double T = params.period();
  const double h = T / steps;
  const Hamiltonian H(params, state.sites);
  Eigen::VectorXcd& psi = state.amplitudes;
  Eigen::VectorXcd k1, k2, k3, k4, tmp, scratch;

  // Gauss-Legendre nodes and commutator-free weights
  const double root = std::sqrt(3.0) / 6.0;
  const double c1 = 0.5 - root;
  const double c2 = 0.5 + root;
  const double w_major = 0.25 + root;
  const double w_minor = 0.25 - root;

  for (int n = 0; n < n_periods; ++n) {
    const double before = psi.norm();
    for (int k = 0; k < steps; ++k) {
      const double t = k * h;  // H is T-periodic
      if (options.stepper == Stepper::Magnus4) {
        const double f1 = H.drive_coefficient(t + c1 * h);
        const double f2 = H.drive_coefficient(t + c2 * h);
        exp_apply(H, w_major * f1 + w_minor * f2, 0.5, h, psi, tmp, scratch);
        exp_apply(H, w_minor * f1 + w_major * f2, 0.5, h, psi, tmp, scratch);
      } else {
        const Complex mi(0.0, -1.0);
        H.apply(H.drive_coefficient(t), 1.0, psi, k1);
        k1 *= mi;
        tmp = psi + 0.5 * h * k1;
        H.apply(H.drive_coefficient(t + 0.5 * h), 1.0, tmp, k2);
        k2 *= mi;
        tmp = psi + 0.5 * h * k2;
        H.apply(H.drive_coefficient(t + 0.5 * h), 1.0, tmp, k3);
        k3 *= mi;
        tmp = psi + h * k3;
        H.apply(H.drive_coefficient(t + h), 1.0, tmp, k4);
        k4 *= mi;
        psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    const double after = psi.norm();
    if (!std::isfinite(after) || std::abs(after - before) > options.norm_tolerance) {
      throw AccuracyError("dense evolution norm drifted by " + std::to_string(after - before) +
                          " in one period; reduce dt");
    }
  }
}

StroboscopicSeries ed_evolve(const DenseState& state0, const ModelParams& params, double dt,
                             int n_periods, const MagnetizationAxis& axis,
                             const EvolveOptions& options) {
  if (n_periods < 1) {
    throw DomainError("evolution needs n_periods >= 1");
  }
  if (std::abs(state0.norm() - 1.0) > 1e-10) {
    throw DomainError("initial dense state is not normalized");
  }
  substeps_for(params, dt);
  DenseState state = state0;
  StroboscopicSeries series;
  series.period = params.period();
  series.label = "ed magnetization";
  series.initial = measure_magnetization(state, axis);
  series.values.reserve(static_cast<std::size_t>(n_periods));
  for (int n = 0; n < n_periods; ++n) {
    propagate_periods(state, params, dt, 1, options);
    series.values.push_back(std::clamp(measure_magnetization(state, axis), -1.0, 1.0));
  }
  return series;
}

}  // namespace dtc::ed
