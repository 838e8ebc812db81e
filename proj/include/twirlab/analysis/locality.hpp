#pragma once

#include <optional>
#include <string>

#include "twirlab/analysis/twirled_world.hpp"

namespace twirlab {

struct SeparatingEffect {
  RowVector effect;         // invariant: (base effect or its complement) o G
  Index base_index = -1;    // row of the base effect list
  bool complemented = false;
  double gap = 0.0;         // effect(omega1 - omega2) > 0
};

struct LocalityWitness {
  Vector omega1;
  Vector omega2;
  SeparatingEffect separator;
  double product_discrepancy = 0.0;
};

struct LocalityVerdict {
  Index k_a = 0;
  Index k_b = 0;
  Index k_ab = 0;
  bool criterion_fails_locality = false;  // k_ab > k_a k_b
  // Direct check: some invariant state difference is invisible to every
  // invariant product effect.
  bool direct_fails_locality = false;
  Index product_pairing_rank = 0;
  std::optional<LocalityWitness> witness;
};

// InconsistentWorlds when the composite's dimension is not dim_a * dim_b.
LocalityVerdict locality_verdict(const TwirledWorld& a, const TwirledWorld& b, const TwirledWorld& ab,
                                 double tol = kDefaultTolerance);

// max over invariant effect basis pairs of |(f_A ⊗ f_B)(omega1 - omega2)|.
double verify_local_indistinguishability(const Eigen::Ref<const Vector>& omega1,
                                         const Eigen::Ref<const Vector>& omega2, const TwirledWorld& a,
                                         const TwirledWorld& b, double tol = kDefaultTolerance);

// Scans base effects e (rows) for the largest |(e o G)(omega1 - omega2)|; a
// negative gap is turned around by taking the complement u - e o G.  The
// first row wins among equal gaps.  NotSeparable when every gap is <= tol.
SeparatingEffect find_separating_invariant_effect(const Eigen::Ref<const Vector>& omega1,
                                                  const Eigen::Ref<const Vector>& omega2,
                                                  const Matrix& base_effects, const RowVector& unit,
                                                  const TwirlProjector& p,
                                                  double tol = kDefaultTolerance);

}  // namespace twirlab
