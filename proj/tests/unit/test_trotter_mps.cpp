#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "dtc/ed.hpp"
#include "dtc/error.hpp"
#include "dtc/mps.hpp"
#include "dtc/trotter.hpp"

using namespace dtc;
using namespace dtc::mps;
constexpr double pi = std::numbers::pi;

namespace {

Eigen::Matrix4cd random_unitary4(std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      a(i, j) = Complex(g(rng), g(rng));
    }
  }
  Eigen::HouseholderQR<Eigen::Matrix4cd> qr(a);
  return qr.householderQ();
}

// Dense action of a two-site gate on bond (b, b + 1), site 0 most significant.
Eigen::VectorXcd dense_two_site(const Eigen::VectorXcd& psi, int n, int b,
                                const Eigen::Matrix4cd& gate) {
  const Eigen::MatrixXcd left = Eigen::MatrixXcd::Identity(1 << b, 1 << b);
  const Eigen::MatrixXcd right = Eigen::MatrixXcd::Identity(1 << (n - b - 2), 1 << (n - b - 2));
  const Eigen::MatrixXcd full =
      Eigen::kroneckerProduct(left, Eigen::kroneckerProduct(gate, right).eval()).eval();
  return full * psi;
}

ModelParams crit2(int n) { return ModelParams::from_detuning(0.05, 1.0, 0.5, 0.05, n); }

}  // namespace

TEST_CASE("Ruth coefficients") {
  const auto& c = third_order_coefficients();
  CHECK(c.name == "ruth3");
  REQUIRE(c.a.size() == 3);
  REQUIRE(c.b.size() == 3);
  CHECK(c.a[0] + c.a[1] + c.a[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.b[0] + c.b[1] + c.b[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("schedule covers every term exactly once per substep") {
  const auto s = trotter_schedule(crit2(7), 0.01);
  CHECK(s.substeps == 100);
  CHECK(s.substep == doctest::Approx(0.01));
  CHECK(s.scheme == "ruth3");
  CHECK(s.consistency_error() < 1e-13);
  int bonds = 0;
  for (const auto& e : s.entries) {
    CHECK(e.time >= 0.0);
    CHECK(e.time <= 1.0 + 1e-12);
    if (e.two_site) {
      ++bonds;
      CHECK(e.generator == Generator::IsingZZ);
      CHECK(e.site + 1 < 7);
    }
  }
  CHECK(bonds == 100 * (3 * 3 + 3 * 3));
  CHECK(std::string(to_string(Generator::FieldYZ)) == "field-yz");
}

TEST_CASE("no bond gates without coupling") {
  const auto s = trotter_schedule(ModelParams::from_detuning(0.0, 1.0, 0.0, 0.0, 6), 0.05);
  for (const auto& e : s.entries) {
    CHECK_FALSE(e.two_site);
  }
}

TEST_CASE("schedule rejects bad steps") {
  CHECK_THROWS_AS(trotter_schedule(crit2(4), 1.0), DomainError);
  CHECK_THROWS_AS(trotter_schedule(crit2(4), 0.3), DomainError);
  CHECK_THROWS_AS(trotter_schedule(crit2(4), -0.1), DomainError);
  CHECK_NOTHROW(trotter_schedule(crit2(4), 0.25));
}

TEST_CASE("local generators and exponentials") {
  const auto p = crit2(4);
  GateEntry zz{0, 0, 0.0, 1.0, 0, true, Generator::IsingZZ};
  const auto h = local_generator(zz, p);
  CHECK(h(0, 0) == Complex(-0.5));
  CHECK(h(1, 1) == Complex(0.5));
  CHECK(h(3, 3) == Complex(-0.5));

  GateEntry x{0, 0, 0.0, 1.0, 0, false, Generator::DriveX};
  CHECK((local_generator(x, p) + p.field() * pauli::x()).norm() < 1e-14);
  x.time = 0.5;
  CHECK(local_generator(x, p).norm() < 1e-14);

  const double tau = 0.37;
  const Eigen::MatrixXcd u = unitary_exponential(pauli::x(), tau);
  const Eigen::Matrix2cd expected =
      std::cos(tau) * Eigen::Matrix2cd::Identity() - Complex(0, std::sin(tau)) * pauli::x();
  CHECK((u - expected).norm() < 1e-14);

  const Eigen::MatrixXcd g = gate_unitary(zz, p, 0.1);
  CHECK((g.adjoint() * g - Eigen::Matrix4cd::Identity()).norm() < 1e-14);
}

TEST_CASE("product state") {
  const auto s = MpsState::product(ProductStateSpec(0.0, +1, 5), 8);
  CHECK(s.sites() == 5);
  CHECK(s.bond_dims() == std::vector<int>(4, 1));
  CHECK(s.norm_squared() == doctest::Approx(1.0));
  CHECK(measure_magnetization(s, MagnetizationAxis(0.0)) == doctest::Approx(1.0));
  CHECK(std::abs(s.magnetization(MagnetizationAxis(pi / 2.0))) < 1e-15);
  const auto dense = s.to_dense();
  const auto ed_state = ed::DenseState::product(ProductStateSpec(0.0, +1, 5));
  CHECK((dense - ed_state.amplitudes).norm() < 1e-14);
  CHECK_THROWS_AS(MpsState::product(ProductStateSpec(0.0, +1, 5), 0), DomainError);
}

TEST_CASE("two-site gates agree with dense application when nothing is truncated") {
  std::mt19937 rng(11);
  const int n = 6;
  auto s = MpsState::product(ProductStateSpec(0.4, -1, n), 64);
  Eigen::VectorXcd psi = s.to_dense();
  for (int round = 0; round < 4; ++round) {
    for (int b : {0, 2, 4, 1, 3}) {
      const Eigen::Matrix4cd g = random_unitary4(rng);
      const auto report = s.apply_two_site(b, g, round % 2 == 0);
      CHECK(report.discarded_weight < 1e-20);
      psi = dense_two_site(psi, n, b, g);
    }
  }
  CHECK(std::abs(s.to_dense().dot(psi)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.bond_dims() == std::vector<int>{2, 4, 8, 4, 2});

  const auto before = s.to_dense();
  s.move_center(0);
  CHECK((s.to_dense() - before).norm() < 1e-12);
  s.move_center(n - 1);
  CHECK((s.to_dense() - before).norm() < 1e-12);

  const auto local = s.local_expectations(pauli::z());
  for (int j = 0; j < n; ++j) {
    double direct = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      const int bit = static_cast<int>((i >> (n - 1 - j)) & 1);
      direct += std::norm(psi[i]) * (bit == 0 ? 1.0 : -1.0);
    }
    CHECK(local[j] == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("truncation caps the bond and is logged") {
  std::mt19937 rng(5);
  auto s = MpsState::product(ProductStateSpec(0.0, +1, 6), 2);
  for (int round = 0; round < 3; ++round) {
    for (int b : {0, 2, 4, 1, 3}) {
      s.apply_two_site(b, random_unitary4(rng));
    }
  }
  for (int d : s.bond_dims()) {
    CHECK(d <= 2);
  }
  CHECK(s.truncation().cumulative_weight > 0.0);
  CHECK(s.truncation().truncating_gates > 0);
  CHECK(s.truncation().gates == 15);
  CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bond dimension stays one without coupling") {
  const auto p = ModelParams::from_detuning(0.03, 1.0, 0.0, 0.03, 8);
  auto s = MpsState::product(ProductStateSpec(0.0, +1, 8), 16);
  const auto e = evolve_periods(s, p, 0.01, 5, MagnetizationAxis(0.0));
  CHECK(s.bond_dims() == std::vector<int>(7, 1));
  CHECK(e.cumulative_truncation.back() == 0.0);
}

TEST_CASE("noninteracting ideal drive flips the magnetization") {
  const auto p = ModelParams::from_detuning(0.0, 1.0, 0.0, 0.0, 4);
  auto s = MpsState::product(ProductStateSpec(0.0, +1, 4), 4);
  const auto e = evolve_periods(s, p, 0.01, 6, MagnetizationAxis(0.0));
  CHECK(e.magnetization.initial == doctest::Approx(1.0));
  for (std::size_t i = 0; i < e.magnetization.size(); ++i) {
    const double expected = (i % 2 == 0) ? -1.0 : 1.0;
    CHECK(std::abs(e.magnetization.values[i] - expected) < 1e-10);
  }
}

TEST_CASE("mps matches the dense oracle at small size") {
  const auto p = crit2(6);
  const MagnetizationAxis y(0.0);
  auto s = MpsState::product(ProductStateSpec(0.0, +1, 6), 8);
  const auto e = evolve_periods(s, p, 0.005, 6, y);
  const auto ref = ed::ed_evolve(ed::DenseState::product(ProductStateSpec(0.0, +1, 6)), p,
                                 0.005, 6, y);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(std::abs(e.magnetization.values[i] - ref.values[i]) < 1e-6);
  }
  const auto dense = ed::DenseState::product(ProductStateSpec(0.0, +1, 6));
  auto copy = dense;
  ed::propagate_periods(copy, p, 0.005, 6);
  CHECK(std::abs(s.to_dense().dot(copy.amplitudes)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("splitting error is third order in the step") {
  const auto p = ModelParams::from_detuning(0.05, 1.0, 1.0, 0.05, 3);
  const MagnetizationAxis y(0.0);
  auto final_state = [&](double dt) {
    auto s = MpsState::product(ProductStateSpec(0.0, +1, 3), 8);
    evolve_periods(s, p, dt, 1, y);
    return s.to_dense();
  };
  auto exact = ed::DenseState::product(ProductStateSpec(0.0, +1, 3));
  ed::propagate_periods(exact, p, 0.0005, 1);
  const double coarse = (final_state(0.05) - exact.amplitudes).norm();
  const double fine = (final_state(0.025) - exact.amplitudes).norm();
  CHECK(coarse / fine > 6.0);
  CHECK(coarse / fine < 10.0);
}

TEST_CASE("evolution is deterministic") {
  const auto p = crit2(8);
  auto a = MpsState::product(ProductStateSpec(0.0, +1, 8), 4);
  auto b = MpsState::product(ProductStateSpec(0.0, +1, 8), 4);
  const auto ea = evolve_periods(a, p, 0.02, 4, MagnetizationAxis(0.0));
  const auto eb = evolve_periods(b, p, 0.02, 4, MagnetizationAxis(0.0));
  CHECK(ea.magnetization.values == eb.magnetization.values);
  CHECK(ea.cumulative_truncation == eb.cumulative_truncation);
  CHECK(ea.cumulative_truncation.size() == 5);
  for (double d : ea.norm_drift) {
    CHECK(d < 1e-10);
  }
}

TEST_CASE("truncation budget aborts the run") {
  const auto p = ModelParams::from_detuning(0.05, 1.0, 1.0, 0.05, 8);
  auto s = MpsState::product(ProductStateSpec(0.0, +1, 8), 1);
  EvolveOptions o;
  o.truncation_budget = 1e-14;
  CHECK_THROWS_AS(evolve_periods(s, p, 0.02, 3, MagnetizationAxis(0.0), o), AccuracyError);
}

TEST_CASE("period propagator layers") {
  const auto schedule = trotter_schedule(crit2(5), 0.1);
  const PeriodPropagator prop(schedule, crit2(5));
  CHECK(prop.layer_count() == 60);
}
