#include "dtc/mps.hpp"

#include <cmath>
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "dtc/error.hpp"

namespace dtc::mps {

namespace {

struct Svd {
  Eigen::MatrixXcd U;
  Eigen::VectorXd S;
  Eigen::MatrixXcd Vh;
};

bool finite(const Svd& svd) {
  return svd.U.allFinite() && svd.S.allFinite() && svd.Vh.allFinite();
}

// Thin SVD through LAPACK; the divide-and-conquer driver falls back to the
// QR-iteration driver before giving up.
Svd thin_svd(const Eigen::MatrixXcd& a) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  Svd out{Eigen::MatrixXcd(m, k), Eigen::VectorXd(k), Eigen::MatrixXcd(k, n)};
  Eigen::MatrixXcd work = a;
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m, out.S.data(),
                                   out.U.data(), m, out.Vh.data(), k);
  if (info == 0 && finite(out)) {
    return out;
  }
  work = a;
  Eigen::VectorXd superb(std::max<lapack_int>(1, k - 1));
  info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, work.data(), m, out.S.data(),
                        out.U.data(), m, out.Vh.data(), k, superb.data());
  if (info != 0 || !finite(out)) {
    throw NumericalError("SVD of a " + std::to_string(m) + "x" + std::to_string(n) +
                         " two-site tensor failed (info=" + std::to_string(info) + ")");
  }
  return out;
}

}  // namespace

MpsState::MpsState(std::vector<SiteTensor> tensors, int max_bond)
    : tensors_(std::move(tensors)), max_bond_(max_bond) {}

MpsState MpsState::product(const ProductStateSpec& spec, int max_bond) {
  if (max_bond < 1) {
    throw DomainError("bond dimension cap must be at least 1");
  }
  const Spinor s = local_spinor(spec);
  std::vector<SiteTensor> tensors(static_cast<std::size_t>(spec.sites));
  for (auto& t : tensors) {
    t[0] = Eigen::MatrixXcd::Constant(1, 1, s[0]);
    t[1] = Eigen::MatrixXcd::Constant(1, 1, s[1]);
  }
  return MpsState(std::move(tensors), max_bond);
}

std::vector<int> MpsState::bond_dims() const {
  std::vector<int> dims;
  for (std::size_t j = 0; j + 1 < tensors_.size(); ++j) {
    dims.push_back(static_cast<int>(tensors_[j][0].cols()));
  }
  return dims;
}

void MpsState::apply_single(int site, const Eigen::Matrix2cd& gate) {
  auto& t = tensors_.at(static_cast<std::size_t>(site));
  Eigen::MatrixXcd up = gate(0, 0) * t[0] + gate(0, 1) * t[1];
  t[1] = gate(1, 0) * t[0] + gate(1, 1) * t[1];
  t[0] = std::move(up);
}

GateReport MpsState::apply_two_site(int bond, const Eigen::Matrix4cd& gate, bool center_right) {
  if (bond < 0 || bond + 1 >= sites()) {
    throw DomainError("bond index out of range");
  }
  if (center_ < bond) {
    move_center(bond);
  } else if (center_ > bond + 1) {
    move_center(bond + 1);
  }
  auto& left = tensors_[static_cast<std::size_t>(bond)];
  auto& right = tensors_[static_cast<std::size_t>(bond) + 1];
  const Eigen::Index dl = left[0].rows();
  const Eigen::Index dr = right[0].cols();

  std::array<Eigen::MatrixXcd, 4> pair;  // index 2 * t1 + t2
  for (int t1 = 0; t1 < 2; ++t1) {
    for (int t2 = 0; t2 < 2; ++t2) {
      pair[static_cast<std::size_t>(2 * t1 + t2)].noalias() = left[t1] * right[t2];
    }
  }
  // rows (s1, l), columns (s2, r)
  Eigen::MatrixXcd theta = Eigen::MatrixXcd::Zero(2 * dl, 2 * dr);
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      auto block = theta.block(s1 * dl, s2 * dr, dl, dr);
      for (int t = 0; t < 4; ++t) {
        const Complex g = gate(2 * s1 + s2, t);
        if (g != Complex(0.0, 0.0)) {
          block += g * pair[static_cast<std::size_t>(t)];
        }
      }
    }
  }

  GateReport report;
  report.norm_before = theta.squaredNorm();
  const Svd svd = thin_svd(theta);
  const Eigen::Index rank = svd.S.size();
  const double largest = rank > 0 ? svd.S[0] : 0.0;
  Eigen::Index keep = 0;
  while (keep < rank && keep < max_bond_ && svd.S[keep] > kRelativeCutoff * largest) {
    ++keep;
  }
  keep = std::max<Eigen::Index>(keep, 1);
  const double total = svd.S.squaredNorm();
  const double kept = svd.S.head(keep).squaredNorm();
  report.discarded_weight = total > 0.0 ? std::max(0.0, (total - kept) / total) : 0.0;
  report.kept = static_cast<int>(keep);

  Eigen::VectorXd s = svd.S.head(keep) / std::sqrt(kept);
  const Eigen::MatrixXcd u = svd.U.leftCols(keep);
  const Eigen::MatrixXcd vh = svd.Vh.topRows(keep);
  if (center_right) {
    const Eigen::MatrixXcd svh = s.asDiagonal() * vh;
    for (int k = 0; k < 2; ++k) {
      left[k] = u.middleRows(k * dl, dl);
      right[k] = svh.middleCols(k * dr, dr);
    }
    center_ = bond + 1;
  } else {
    const Eigen::MatrixXcd us = u * s.asDiagonal();
    for (int k = 0; k < 2; ++k) {
      left[k] = us.middleRows(k * dl, dl);
      right[k] = vh.middleCols(k * dr, dr);
    }
    center_ = bond;
  }

  ++log_.gates;
  if (report.discarded_weight > 0.0) {
    ++log_.truncating_gates;
    log_.cumulative_weight += report.discarded_weight;
    log_.largest_weight = std::max(log_.largest_weight, report.discarded_weight);
  }
  return report;
}

void MpsState::move_center(int target) {
  if (target < 0 || target >= sites()) {
    throw DomainError("canonical center target out of range");
  }
  while (center_ < target) {
    move_center_right();
  }
  while (center_ > target) {
    move_center_left();
  }
}

void MpsState::move_center_right() {
  auto& a = tensors_[static_cast<std::size_t>(center_)];
  auto& next = tensors_[static_cast<std::size_t>(center_) + 1];
  const Eigen::Index dl = a[0].rows();
  const Eigen::Index dr = a[0].cols();
  Eigen::MatrixXcd stacked(2 * dl, dr);
  stacked << a[0], a[1];
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(stacked);
  const Eigen::Index k = std::min(2 * dl, dr);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * dl, k);
  const Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int s = 0; s < 2; ++s) {
    a[s] = q.middleRows(s * dl, dl);
    next[s] = r * next[s];
  }
  ++center_;
}

void MpsState::move_center_left() {
  auto& a = tensors_[static_cast<std::size_t>(center_)];
  auto& prev = tensors_[static_cast<std::size_t>(center_) - 1];
  const Eigen::Index dl = a[0].rows();
  const Eigen::Index dr = a[0].cols();
  Eigen::MatrixXcd joined(dl, 2 * dr);
  joined << a[0], a[1];
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(joined.adjoint());
  const Eigen::Index k = std::min(2 * dr, dl);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * dr, k);
  const Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXcd qh = q.adjoint();
  const Eigen::MatrixXcd rh = r.adjoint();
  for (int s = 0; s < 2; ++s) {
    a[s] = qh.middleCols(s * dr, dr);
    prev[s] = prev[s] * rh;
  }
  --center_;
}

double MpsState::norm_squared() const {
  Eigen::MatrixXcd env = Eigen::MatrixXcd::Ones(1, 1);
  for (const auto& t : tensors_) {
    env = (t[0].adjoint() * env * t[0] + t[1].adjoint() * env * t[1]).eval();
  }
  return env(0, 0).real();
}

std::vector<double> MpsState::local_expectations(const Eigen::Matrix2cd& op) const {
  const std::size_t n = tensors_.size();
  // left[j]: sites < j contracted; right[j]: sites >= j contracted
  std::vector<Eigen::MatrixXcd> left(n + 1), right(n + 1);
  left[0] = Eigen::MatrixXcd::Ones(1, 1);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& t = tensors_[j];
    left[j + 1] = t[0].adjoint() * left[j] * t[0] + t[1].adjoint() * left[j] * t[1];
  }
  right[n] = Eigen::MatrixXcd::Ones(1, 1);
  for (std::size_t j = n; j-- > 0;) {
    const auto& t = tensors_[j];
    right[j] = t[0] * right[j + 1] * t[0].adjoint() + t[1] * right[j + 1] * t[1].adjoint();
  }
  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& t = tensors_[j];
    Complex sum = 0.0;
    for (int s = 0; s < 2; ++s) {
      const Eigen::MatrixXcd bra = t[s].adjoint() * left[j];
      for (int u = 0; u < 2; ++u) {
        if (op(s, u) == Complex(0.0, 0.0)) {
          continue;
        }
        sum += op(s, u) * (bra * t[u] * right[j + 1]).trace();
      }
    }
    values[j] = sum.real();
  }
  return values;
}

double MpsState::magnetization(const MagnetizationAxis& axis) const {
  const auto values = local_expectations(axis.operator_matrix());
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

Eigen::VectorXcd MpsState::to_dense() const {
  if (sites() > 20) {
    throw DomainError("dense conversion is limited to 20 sites");
  }
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Ones(1, 1);  // rows: basis prefix, cols: bond
  for (const auto& t : tensors_) {
    Eigen::MatrixXcd next(psi.rows() * 2, t[0].cols());
    for (Eigen::Index p = 0; p < psi.rows(); ++p) {
      next.row(2 * p) = psi.row(p) * t[0];
      next.row(2 * p + 1) = psi.row(p) * t[1];
    }
    psi = std::move(next);
  }
  return psi.col(0);
}

GateReport apply_gate(MpsState& state, const GateEntry& entry, const ModelParams& params,
                      double dt) {
  const Eigen::MatrixXcd u = gate_unitary(entry, params, dt);
  if (entry.two_site) {
    return state.apply_two_site(entry.site, u, true);
  }
  state.apply_single(entry.site, u);
  return {};
}

PeriodPropagator::PeriodPropagator(const GateSchedule& schedule, const ModelParams& params) {
  const double dt = schedule.substep;
  const auto& entries = schedule.entries;
  const auto N = static_cast<std::size_t>(schedule.sites);
  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t end = i;
    while (end < entries.size() && entries[end].substep == entries[i].substep &&
           entries[end].stage == entries[i].stage) {
      ++end;
    }
    // Accumulate tau * h for every target of this stage.
    std::vector<Eigen::Matrix4cd> bond_terms(N);
    std::vector<bool> has_bond(N, false);
    std::vector<Eigen::Matrix2cd> site_terms(N, Eigen::Matrix2cd::Zero());
    std::vector<bool> has_site(N, false);
    for (std::size_t e = i; e < end; ++e) {
      const auto& entry = entries[e];
      const auto j = static_cast<std::size_t>(entry.site);
      const Eigen::MatrixXcd term = entry.coefficient * dt * local_generator(entry, params);
      if (entry.two_site) {
        if (!has_bond[j]) {
          bond_terms[j].setZero();
          has_bond[j] = true;
        }
        bond_terms[j] += term;
      } else {
        site_terms[j] += term;
        has_site[j] = true;
      }
    }
    Layer layer;
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (std::size_t j = 0; j < N; ++j) {
      if (!has_site[j]) {
        continue;
      }
      if (has_bond[j]) {
        bond_terms[j] += Eigen::kroneckerProduct(site_terms[j], id).eval();
      } else if (j > 0 && has_bond[j - 1]) {
        bond_terms[j - 1] += Eigen::kroneckerProduct(id, site_terms[j]).eval();
      } else {
        layer.singles.emplace_back(static_cast<int>(j), unitary_exponential(site_terms[j], 1.0));
      }
    }
    for (std::size_t j = 0; j < N; ++j) {
      if (has_bond[j]) {
        layer.bonds.emplace_back(static_cast<int>(j), unitary_exponential(bond_terms[j], 1.0));
      }
    }
    layers_.push_back(std::move(layer));
    i = end;
  }
}

PeriodPropagator::Report PeriodPropagator::apply(MpsState& state) const {
  Report report;
  for (const auto& layer : layers_) {
    for (const auto& [site, u] : layer.singles) {
      state.apply_single(site, u);
    }
    if (layer.bonds.empty()) {
      continue;
    }
    // Sweep toward the far end from wherever the center currently sits.
    const int first = layer.bonds.front().first;
    const int last = layer.bonds.back().first + 1;
    const bool rightward = std::abs(state.center() - first) <= std::abs(state.center() - last);
    auto run = [&](const std::pair<int, Eigen::Matrix4cd>& gate) {
      const GateReport r = state.apply_two_site(gate.first, gate.second, rightward);
      report.discarded_weight += r.discarded_weight;
      report.unitarity_drift += std::abs(r.norm_before - 1.0);
    };
    if (rightward) {
      for (const auto& gate : layer.bonds) {
        run(gate);
      }
    } else {
      for (auto it = layer.bonds.rbegin(); it != layer.bonds.rend(); ++it) {
        run(*it);
      }
    }
  }
  return report;
}

double measure_magnetization(const MpsState& state, const MagnetizationAxis& axis) {
  const double norm = state.norm_squared();
  if (std::abs(norm - 1.0) > 1e-8) {
    throw DomainError("magnetization needs a normalized state (norm^2 = " +
                      std::to_string(norm) + ")");
  }
  return std::clamp(state.magnetization(axis), -1.0, 1.0);
}

Evolution evolve_periods(MpsState& state, const ModelParams& params, double dt, int n_periods,
                         const MagnetizationAxis& axis, const EvolveOptions& options) {
  if (n_periods < 1) {
    throw DomainError("evolution needs n_periods >= 1");
  }
  if (params.sites() != state.sites()) {
    throw DomainError("state and parameters disagree on the number of sites");
  }
  const GateSchedule schedule = trotter_schedule(params, dt);
  const PeriodPropagator propagator(schedule, params);

  Evolution out;
  out.magnetization.period = params.period();
  out.magnetization.label = "mps magnetization";
  out.magnetization.initial = measure_magnetization(state, axis);
  out.magnetization.values.reserve(static_cast<std::size_t>(n_periods));
  out.cumulative_truncation.push_back(state.truncation().cumulative_weight);
  for (int n = 1; n <= n_periods; ++n) {
    const auto report = propagator.apply(state);
    if (report.discarded_weight > options.truncation_budget) {
      throw AccuracyError("period " + std::to_string(n) + " discarded weight " +
                          std::to_string(report.discarded_weight) + " exceeds the budget " +
                          std::to_string(options.truncation_budget) +
                          "; increase the bond dimension");
    }
    out.norm_drift.push_back(report.unitarity_drift);
    out.magnetization.values.push_back(measure_magnetization(state, axis));
    out.cumulative_truncation.push_back(state.truncation().cumulative_weight);
  }
  return out;
}

}  // namespace dtc::mps
