#pragma once

#include <string>
#include <vector>

namespace dunkl {

struct SelftestOptions {
  /// Added to log c_norm in the mass-identity check; nonzero values simulate
  /// a corrupted normalization constant.
  double log_c_offset = 0.0;
};

struct SelftestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SelftestResult {
  std::vector<SelftestCheck> checks;
  double seconds = 0.0;

  bool pass() const;
  /// One "PASS name detail" / "FAIL name detail" line per check.
  std::string text() const;
};

/// Fast deterministic invariant suite: closed-form examples of every module
/// and the k = 1 determinant oracle on fixed A_1 and A_2 points.
SelftestResult run_selftest(const SelftestOptions& opt = {});

}  // namespace dunkl
