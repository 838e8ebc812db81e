#pragma once

#include <memory>

#include "twirlab/symmetry/group_action.hpp"

namespace twirlab {

class TwirlProjector {
 public:
  TwirlProjector(LinearMap map, std::shared_ptr<const GroupAction> source)
      : map_(std::move(map)), source_(std::move(source)) {}

  const LinearMap& map() const { return map_; }
  const Matrix& matrix() const { return map_.matrix(); }
  Index dim() const { return map_.dim_in(); }
  const GroupAction& source() const { return *source_; }
  std::shared_ptr<const GroupAction> source_ptr() const { return source_; }

  Vector apply(const Eigen::Ref<const Vector>& x) const;
  RowVector apply_effect(const Eigen::Ref<const RowVector>& e) const;

 private:
  LinearMap map_;
  std::shared_ptr<const GroupAction> source_;
};

// (1/|G|) sum_g V_g, summed in listed element order.
TwirlProjector twirl_projector(std::shared_ptr<const GroupAction> action);

// States P x, effects e P.
RealVector twirl(const TwirlProjector& p, const RealVector& x);
LinearFunctional twirl(const TwirlProjector& p, const LinearFunctional& e);

}  // namespace twirlab
