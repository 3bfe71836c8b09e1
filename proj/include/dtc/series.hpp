#pragma once

#include <string>
#include <vector>

namespace dtc {

/// Observable sampled at t = nT. `values[i]` holds n = i + 1, so the
/// spectral sum over n = 1..N maps directly onto the vector; the n = 0 value
/// is kept separately in `initial`.
struct StroboscopicSeries {
  std::vector<double> values;
  double initial = 0.0;
  double period = 1.0;
  std::string label;

  std::size_t size() const noexcept { return values.size(); }

  /// Throws DomainError when any |s_n| exceeds 1 + 1e-9.
  void validate() const;
};

}  // namespace dtc
