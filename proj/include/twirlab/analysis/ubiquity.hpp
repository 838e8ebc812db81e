#pragma once

#include <memory>
#include <optional>
#include <string>

#include "twirlab/analysis/twirled_world.hpp"

namespace twirlab {

struct UbiquityWitness {
  Vector seed;
  Index moving_element = -1;
  std::string moving_label;
  Vector omega_prod;  // (G ⊗ G)(seed ⊗ seed)
  Vector omega_corr;  // G^{AA}(seed ⊗ seed)
  double separation = 0.0;  // max norm of omega_corr - omega_prod
};

// TrivialAction when no element moves the seed by more than tol.
UbiquityWitness ubiquity_witnesses(std::shared_ptr<const GroupAction> a, const Eigen::Ref<const Vector>& seed,
                                   double tol = kDefaultTolerance);

// First state generator of `s` moved by some element of `a`; nullopt if none.
std::optional<Index> first_moved_state(const SystemSpec& s, const GroupAction& a,
                                       double tol = kDefaultTolerance);

struct TransformationPairReport {
  // max over invariant states x of A of ||G^A x - x||
  double local_residual = 0.0;
  // ||(G^A ⊗ 1) omega_corr - omega_corr||
  double global_gap = 0.0;
  // ||(G^A ⊗ 1) omega_corr - omega_prod||, when omega_prod is given
  std::optional<double> product_residual;
  bool pass = false;
};

TransformationPairReport transformation_pair_witness(const TwirledWorld& a, const TwirledWorld& b,
                                                     const Eigen::Ref<const Vector>& omega_corr,
                                                     const std::optional<Vector>& omega_prod = std::nullopt,
                                                     double tol = kDefaultTolerance);

}  // namespace twirlab
