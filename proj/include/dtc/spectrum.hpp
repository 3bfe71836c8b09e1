#pragma once

#include <cstddef>
#include <vector>

#include "dtc/series.hpp"

namespace dtc {

/// |S(Omega_k)|^2 with S(Omega) = (1/N) sum_{n=1}^{N} s_n exp(i n Omega T),
/// on the grid Omega_k = 2 pi k / (N T), k = 0..N-1.
struct PowerSpectrum {
  std::vector<double> omegas;
  std::vector<double> magnitudes;
  std::size_t n_samples = 0;
  double period = 1.0;

  /// Drive angular frequency 2 pi / T.
  double omega_drive() const;
  /// Index of Omega = omega / 2; requires an even sample count.
  std::size_t subharmonic_index() const;
};

/// FFT-backed evaluation of the stroboscopic spectrum.
PowerSpectrum power_spectrum(const StroboscopicSeries& series);

/// Same spectrum by direct O(N^2) summation.
PowerSpectrum power_spectrum_direct(const StroboscopicSeries& series);

/// Magnitude at the exact omega/2 bin. Odd sample counts are rejected.
double subharmonic_peak(const PowerSpectrum& spectrum);

/// Ratio of the omega/2 bin to the largest other bin (infinity if all others vanish).
double dominance_ratio(const PowerSpectrum& spectrum);

/// A subharmonic peak counts as sharp when it is the dominant bin by this factor.
inline constexpr double kSharpPeakRatio = 10.0;

bool has_sharp_subharmonic_peak(const PowerSpectrum& spectrum);

/// Bins at or below this fraction of the largest bin are treated as zero by side_peaks.
inline constexpr double kPeakFloor = 1e-12;

/// Strict local maxima (k-1 < k > k+1) with |Omega_k - omega/2| <= window * omega,
/// excluding the omega/2 bin itself and bins under the kPeakFloor threshold.
std::vector<std::size_t> side_peaks(const PowerSpectrum& spectrum, double window);

}  // namespace dtc
