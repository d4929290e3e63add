#pragma once

// A fast run of the library's invariants, one record per property.

#include <cstdint>
#include <string>
#include <vector>

namespace quasispec {

struct SelftestCheck {
  std::string module;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool at_most = true;  ///< pass iff value ≤ threshold (else value ≥ threshold)
  bool pass = false;
  std::string error;    ///< set when the check threw
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;  ///< fixed order
  bool pass() const;
};

SelftestReport run_selftest(std::uint64_t seed = 0, int workers = 1);

}  // namespace quasispec
