#pragma once

#include <optional>

#include "twirlab/core/linalg.hpp"

namespace twirlab {

// Outcome of a convex-hull membership query.  `distance` is the optimal L1
// residual || sum_k w_k g_k - x ||_1 (normalization row included) of the
// phase-one problem.
struct MembershipResult {
  bool member = false;
  double distance = 0.0;
  // Convex weights, one per generator, when member.
  Vector weights;
  // When not a member: a functional z and threshold c with z.g_k <= c for
  // every generator and z.x > c.
  std::optional<Vector> separator;
  double separator_threshold = 0.0;
};

// Is x within L1 distance tol of conv{columns of generators}?
MembershipResult convex_membership(const Eigen::Ref<const Vector>& x,
                                   const Eigen::Ref<const Matrix>& generators,
                                   double tol = kDefaultTolerance);

MembershipResult convex_membership(const RealVector& x, std::span<const RealVector> generators,
                                   double tol = kDefaultTolerance);
MembershipResult convex_membership(const LinearFunctional& x,
                                   std::span<const LinearFunctional> generators,
                                   double tol = kDefaultTolerance);

}  // namespace twirlab
