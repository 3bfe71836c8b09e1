#include "dtc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "dtc/error.hpp"

namespace dtc {

namespace {

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

PowerSpectrum empty_spectrum(const StroboscopicSeries& series) {
  if (series.values.size() < 2) {
    throw DomainError("power spectrum needs at least two samples");
  }
  PowerSpectrum out;
  out.n_samples = series.values.size();
  out.period = series.period;
  out.omegas.resize(out.n_samples);
  out.magnitudes.resize(out.n_samples);
  const double base = 2.0 * std::numbers::pi / (static_cast<double>(out.n_samples) * series.period);
  for (std::size_t k = 0; k < out.n_samples; ++k) {
    out.omegas[k] = base * static_cast<double>(k);
  }
  return out;
}

}  // namespace

double PowerSpectrum::omega_drive() const { return 2.0 * std::numbers::pi / period; }

std::size_t PowerSpectrum::subharmonic_index() const {
  if (n_samples % 2 != 0) {
    throw DomainError("omega/2 lies on the frequency grid only for an even sample count");
  }
  return n_samples / 2;
}

PowerSpectrum power_spectrum(const StroboscopicSeries& series) {
  PowerSpectrum out = empty_spectrum(series);
  const std::size_t n = out.n_samples;
  std::vector<std::complex<double>> buffer(series.values.begin(), series.values.end());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
    plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) {
    throw NumericalError("FFTW could not create a plan");
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  // The backward transform sums from n = 0; shifting to n = 1 is a pure phase.
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.magnitudes[k] = std::norm(buffer[k] * scale);
  }
  return out;
}

PowerSpectrum power_spectrum_direct(const StroboscopicSeries& series) {
  PowerSpectrum out = empty_spectrum(series);
  const std::size_t n = out.n_samples;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> sum = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
      const double angle = out.omegas[k] * static_cast<double>(m) * series.period;
      sum += series.values[m - 1] * std::polar(1.0, angle);
    }
    out.magnitudes[k] = std::norm(sum / static_cast<double>(n));
  }
  return out;
}

double subharmonic_peak(const PowerSpectrum& spectrum) {
  return spectrum.magnitudes.at(spectrum.subharmonic_index());
}

double dominance_ratio(const PowerSpectrum& spectrum) {
  const std::size_t centre = spectrum.subharmonic_index();
  double other = 0.0;
  for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
    if (k != centre) {
      other = std::max(other, spectrum.magnitudes[k]);
    }
  }
  if (other == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return spectrum.magnitudes[centre] / other;
}

bool has_sharp_subharmonic_peak(const PowerSpectrum& spectrum) {
  return dominance_ratio(spectrum) >= kSharpPeakRatio;
}

std::vector<std::size_t> side_peaks(const PowerSpectrum& spectrum, double window) {
  const std::size_t centre = spectrum.subharmonic_index();
  const double half = 0.5 * spectrum.omega_drive();
  const double reach = window * spectrum.omega_drive();
  const auto& m = spectrum.magnitudes;
  const double floor = kPeakFloor * *std::max_element(m.begin(), m.end());
  std::vector<std::size_t> peaks;
  for (std::size_t k = 1; k + 1 < m.size(); ++k) {
    if (k == centre || std::abs(spectrum.omegas[k] - half) > reach + 1e-12 * half) {
      continue;
    }
    if (m[k] > floor && m[k] > m[k - 1] && m[k] > m[k + 1]) {
      peaks.push_back(k);
    }
  }
  return peaks;
}

}  // namespace dtc
