#ifndef CAVISING_APP_VALIDATE_HPP
#define CAVISING_APP_VALIDATE_HPP

#include <functional>
#include <string>
#include <vector>

#include "cavising/app/config.hpp"
#include "cavising/ising.hpp"

namespace cavising::app {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst deviation found
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationOptions {
  SystemParams params;  // reference set for the cross-module checks
  ValidateConfig grid;
  int threads = 1;
  /// Spin solver checked against the exact-diagonalisation oracle.
  std::function<double(const IsingChainParams&)> spin_solver = ground_state_sx;
};

/// Oracle equivalence, vacuum persistence, trace identity, Z2 pairing and
/// drive-phase independence.
std::vector<CheckResult> validate_all(const ValidationOptions& opt);

CheckResult check_oracle_equivalence(const ValidationOptions& opt);

}  // namespace cavising::app

#endif
