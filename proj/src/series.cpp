#include "dtc/series.hpp"

#include <cmath>

#include "dtc/error.hpp"

namespace dtc {

void StroboscopicSeries::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || std::abs(values[i]) > 1.0 + 1e-9) {
      throw DomainError("series '" + label + "' sample n=" + std::to_string(i + 1) +
                        " is outside [-1, 1]");
    }
  }
}

}  // namespace dtc
