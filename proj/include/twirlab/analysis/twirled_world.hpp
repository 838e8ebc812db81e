#pragma once

#include <memory>
#include <vector>

#include "twirlab/core/system.hpp"
#include "twirlab/core/validation.hpp"
#include "twirlab/symmetry/twirl.hpp"

namespace twirlab {

struct TwirledWorld {
  std::shared_ptr<const SystemSpec> base;
  std::shared_ptr<const GroupAction> action;
  std::shared_ptr<const TwirlProjector> projector;
  // The twirled world as a system: distinct twirled generators, membership
  // additionally restricted to fixed points of the projector.
  std::shared_ptr<const SystemSpec> system;
  Matrix invariant_state_basis;   // orthonormal columns
  Matrix invariant_effect_basis;  // orthonormal columns (effects transposed)
  Index k = 0;
  double rank_tol = kDefaultRankTolerance;
  // Composites under a two-part collective action: the twirled parts.
  std::shared_ptr<const TwirledWorld> part_a;
  std::shared_ptr<const TwirledWorld> part_b;
};

struct TwirlOptions {
  double tol = kDefaultTolerance;
  double rank_tol = kDefaultRankTolerance;
  // Checks that every V_g keeps state and effect generators inside their sets.
  bool check_physical = true;
};

// ActionNotPhysical when some V_g moves the unit effect or a generator out
// of its set; DimensionMismatch when the action and system sizes differ.
TwirledWorld build_twirled_world(std::shared_ptr<const SystemSpec> s,
                                 std::shared_ptr<const GroupAction> a, const TwirlOptions& opt = {});

Index count_parameters(const TwirledWorld& w);
Index count_parameters(const TwirledWorld& w, double rank_tol);
// K at several thresholds from one decomposition.
std::vector<Index> count_parameters(const TwirledWorld& w, const std::vector<double>& rank_tols);

// Rank of the twirled states after compressing every operator to the span of
// the listed basis kets (quantum worlds only).
Index restricted_parameter_count(const TwirledWorld& w, const std::vector<int>& keep_kets);

// Kets |m1 m2> with m1 + m2 <= N of two modes with Hilbert dimensions d1, d2,
// as indices m1 d2 + m2.
std::vector<int> total_number_kets(int cutoff, int d1, int d2);

// Entries "state tomography" and "effect tomography": the pairing between
// invariant effects and invariant states has rank K and rank K_effects.
ValidationReport check_tomographic_completeness(const TwirledWorld& w, double tol = kDefaultTolerance);

// Pairing rank used by check_tomographic_completeness.
Index pairing_rank(const TwirledWorld& w);

}  // namespace twirlab
