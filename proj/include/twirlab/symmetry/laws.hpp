#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "twirlab/symmetry/twirl.hpp"

namespace twirlab {

enum class TwirlLaw { Invariance, Idempotence, LocalGlobal };

struct LawEntry {
  TwirlLaw law;
  std::string scope;     // "S1", "S2" (parts) or "S" (collective)
  std::string identity;  // e.g. "G o V_g = G"
  double max_residual = 0.0;
  bool pass = true;
};

struct LawReport {
  int trials = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<LawEntry> entries;
  bool all_pass() const;
  double max_residual(TwirlLaw law) const;
};

std::string_view to_string(TwirlLaw law);

// Seeded random vectors and covectors in [-1, 1]^dim probe
//   G V_g = G = V_g G,  G G = G           on every part and on the collective,
//   the six local/global identities       when there are two parts (more
//                                         parts are split as first | rest).
LawReport verify_twirl_laws(const std::vector<std::shared_ptr<const GroupAction>>& parts, int trials,
                            std::uint64_t seed, double tol = kDefaultTolerance);

}  // namespace twirlab
