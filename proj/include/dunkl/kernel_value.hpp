#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace dunkl {

/// A positive kernel value held in log space, with an a-posteriori error
/// indicator from rule refinement.
///
/// `rel_error` is |I(coarse) - I(fine)| / I(fine); it is NaN when no
/// refinement was requested.
struct KernelValue {
  double log_value = -std::numeric_limits<double>::infinity();
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  std::int64_t evaluations = 0;
  /// +1 or -1; only generic 1-d integrals can come out negative.
  int sign = 1;

  /// May overflow to inf; use log_value for comparisons.
  double value() const { return sign * std::exp(log_value); }

  /// Decimal exponent and mantissa, value = mantissa * 10^exponent10.
  long exponent10() const {
    return static_cast<long>(std::floor(log_value / std::log(10.0)));
  }
  double mantissa() const {
    return std::pow(10.0, log_value / std::log(10.0) - static_cast<double>(exponent10()));
  }

  static KernelValue from_value(double v, double rel_err = std::numeric_limits<double>::quiet_NaN(),
                                std::int64_t evals = 0) {
    return {std::log(std::abs(v)), rel_err, evals, v < 0 ? -1 : 1};
  }
};

}  // namespace dunkl
