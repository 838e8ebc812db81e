#pragma once

#include <string>
#include <vector>

#include "twirlab/core/system.hpp"

namespace twirlab {

struct CheckEntry {
  std::string name;
  bool pass = true;
  double worst_residual = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::string subject;
  std::vector<CheckEntry> checks;

  bool all_pass() const;
  const CheckEntry* find(const std::string& name) const;
};

// Check names used by validate_system.
inline constexpr const char* kCheckNormalization = "normalization";
inline constexpr const char* kCheckRange = "effect range";
inline constexpr const char* kCheckComplement = "complement closure";
inline constexpr const char* kCheckZero = "zero effect";
inline constexpr const char* kCheckTransformations = "transformations";

ValidationReport validate_system(const SystemSpec& s, double tol = kDefaultTolerance);

// Every state generator steered by every local effect generator of the other
// part lands in Conv[Omega ∪ {0}] of the kept part; likewise effects steered
// by local states land in the kept part's effect set.
ValidationReport check_steering_closure(const SystemSpec& composite,
                                        double tol = kDefaultTolerance);

}  // namespace twirlab
