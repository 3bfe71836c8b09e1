#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dtc/error.hpp"
#include "dtc/spectrum.hpp"

using namespace dtc;
constexpr double pi = std::numbers::pi;

namespace {

StroboscopicSeries make(std::vector<double> v, double period = 1.0) {
  StroboscopicSeries s;
  s.values = std::move(v);
  s.period = period;
  return s;
}

StroboscopicSeries random_series(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = u(rng);
  }
  return make(std::move(v));
}

}  // namespace

TEST_CASE("constant series peaks at zero frequency") {
  const auto s = power_spectrum(make(std::vector<double>(64, 1.0)));
  CHECK(s.magnitudes[0] == doctest::Approx(1.0));
  CHECK(subharmonic_peak(s) < 1e-28);
  CHECK(dominance_ratio(s) == 0.0);
  CHECK_FALSE(has_sharp_subharmonic_peak(s));
}

TEST_CASE("alternating series peaks at omega/2") {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = (i % 2 == 0) ? -1.0 : 1.0;  // n = i + 1
  }
  const auto s = power_spectrum(make(v, 2.0));
  CHECK(s.subharmonic_index() == 50);
  CHECK(s.omegas[50] == doctest::Approx(0.5 * s.omega_drive()));
  CHECK(s.omega_drive() == doctest::Approx(pi));
  CHECK(subharmonic_peak(s) == doctest::Approx(1.0));
  CHECK(std::isinf(dominance_ratio(s)));
  CHECK(has_sharp_subharmonic_peak(s));
}

TEST_CASE("single tone lands on its bin with the positive exponent convention") {
  const std::size_t n = 40;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = std::cos(2.0 * pi * 7.0 * static_cast<double>(i + 1) / n);
  }
  const auto s = power_spectrum(make(v));
  CHECK(s.magnitudes[7] == doctest::Approx(0.25));
  CHECK(s.magnitudes[33] == doctest::Approx(0.25));
}

TEST_CASE("Parseval identity") {
  for (std::size_t n : {2u, 17u, 256u, 1000u, 4096u}) {
    const auto series = random_series(n, static_cast<unsigned>(n));
    const auto s = power_spectrum(series);
    double lhs = 0.0, rhs = 0.0;
    for (double m : s.magnitudes) {
      lhs += m;
    }
    for (double x : series.values) {
      rhs += x * x;
    }
    rhs /= static_cast<double>(n);
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("fast and direct evaluations agree") {
  for (std::size_t n : {3u, 64u, 1200u, 4096u}) {
    const auto series = random_series(n, 7u + static_cast<unsigned>(n));
    const auto fast = power_spectrum(series);
    const auto slow = power_spectrum_direct(series);
    REQUIRE(fast.magnitudes.size() == n);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      worst = std::max(worst, std::abs(fast.magnitudes[k] - slow.magnitudes[k]));
      CHECK(fast.omegas[k] == slow.omegas[k]);
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("real input gives a mirror-symmetric spectrum") {
  const auto s = power_spectrum(random_series(300, 3));
  for (std::size_t k = 1; k < 300; ++k) {
    CHECK(std::abs(s.magnitudes[k] - s.magnitudes[300 - k]) < 1e-15);
  }
}

TEST_CASE("odd sample counts have no omega/2 bin") {
  const auto s = power_spectrum(random_series(11, 1));
  CHECK_THROWS_AS(subharmonic_peak(s), DomainError);
  CHECK_THROWS_AS(dominance_ratio(s), DomainError);
  CHECK_THROWS_AS(power_spectrum(make({0.5})), DomainError);
}

TEST_CASE("side peaks inside the window") {
  const std::size_t n = 200;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + 1);
    v[i] = 0.5 * std::cos(pi * t) + 0.2 * std::cos(2.0 * pi * 90.0 * t / n) +
           0.2 * std::cos(2.0 * pi * 107.0 * t / n) + 0.2 * std::cos(2.0 * pi * 60.0 * t / n);
  }
  const auto s = power_spectrum(make(v));
  const auto peaks = side_peaks(s, 0.1);
  CHECK(peaks == std::vector<std::size_t>{90, 93, 107, 110});
  CHECK(side_peaks(s, 0.01).empty());
  CHECK(dominance_ratio(s) == doctest::Approx(0.25 / 0.01));
}

TEST_CASE("deterministic output") {
  const auto series = random_series(500, 42);
  const auto a = power_spectrum(series);
  const auto b = power_spectrum(series);
  CHECK(a.magnitudes == b.magnitudes);
}
