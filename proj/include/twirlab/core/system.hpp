#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twirlab/core/hermitian_basis.hpp"
#include "twirlab/core/linalg.hpp"
#include "twirlab/core/membership.hpp"

namespace twirlab {

// How the convex sets of a system are decided beyond their generators.
//  Polytope: states are conv(state generators), effects conv(effect generators).
//  Quantum:  generators only span; states are density operators and effects
//            operators 0 <= E <= 1 in the coordinates of OperatorCoordinates.
enum class StateSpaceKind { Polytope, Quantum };

struct SystemData {
  std::string id;
  StateSpaceKind kind = StateSpaceKind::Polytope;
  std::vector<int> hilbert_dims;  // quantum only
  Matrix states;                  // dim x n, one generator per column
  Matrix effects;                 // n x dim, one generator per row
  RowVector unit;
  std::vector<LinearMap> transformations;
  // Twirled worlds: states/effects must additionally be fixed points of this.
  std::optional<Matrix> invariance_projector;
  // Composites: the two factors, in tensor order.
  std::shared_ptr<const class SystemSpec> part_a;
  std::shared_ptr<const class SystemSpec> part_b;
};

class SystemSpec {
 public:
  explicit SystemSpec(SystemData data);

  static SystemSpec polytope(std::string id, std::vector<RealVector> states,
                             std::vector<LinearFunctional> effects, LinearFunctional unit);

  const std::string& id() const { return d_.id; }
  Index dim() const { return d_.unit.size(); }
  StateSpaceKind kind() const { return d_.kind; }
  const std::vector<int>& hilbert_dims() const { return d_.hilbert_dims; }
  const quantum::OperatorCoordinates& coordinates() const;

  const Matrix& states() const { return d_.states; }
  const Matrix& effects() const { return d_.effects; }
  const RowVector& unit() const { return d_.unit; }
  Index state_count() const { return d_.states.cols(); }
  Index effect_count() const { return d_.effects.rows(); }
  RealVector state(Index k) const { return RealVector(d_.states.col(k)); }
  LinearFunctional effect(Index k) const { return LinearFunctional(d_.effects.row(k)); }
  LinearFunctional unit_effect() const { return LinearFunctional(d_.unit); }
  const std::vector<LinearMap>& transformations() const { return d_.transformations; }
  const Matrix* invariance_projector() const {
    return d_.invariance_projector ? &*d_.invariance_projector : nullptr;
  }

  bool is_composite() const { return d_.part_a != nullptr; }
  const SystemSpec& part_a() const { return *d_.part_a; }
  const SystemSpec& part_b() const { return *d_.part_b; }
  std::shared_ptr<const SystemSpec> part_a_ptr() const { return d_.part_a; }
  std::shared_ptr<const SystemSpec> part_b_ptr() const { return d_.part_b; }

  const SystemData& data() const { return d_; }

  // Membership in the normalized state set, or in conv(states ∪ {0}) when
  // subnormalized.  `distance` is the violation size for rejected points.
  MembershipResult contains_state(const Eigen::Ref<const Vector>& x, double tol,
                                  bool subnormalized = false) const;
  MembershipResult contains_effect(const Eigen::Ref<const RowVector>& e, double tol) const;

 private:
  SystemData d_;
  std::shared_ptr<const quantum::OperatorCoordinates> coords_;
  std::shared_ptr<const ColumnLookup> state_lookup_;
  std::shared_ptr<const ColumnLookup> effect_lookup_;
};

struct CompositeSpec {
  std::string id;
  std::shared_ptr<const SystemSpec> a;
  std::shared_ptr<const SystemSpec> b;
  std::vector<RealVector> extra_state_generators;
  std::vector<LinearFunctional> extra_effect_generators;
  // Adds every binary coarse-graining of a pair of local binary measurements
  // {e, u-e} x {f, u-f} (sums of subsets of the four product outcomes).
  // Polytope parts only; quantum composites decide effects by positivity.
  bool coarse_grain = true;
};

// Scalar pairing e.w; throws RangeViolation outside [-tol, 1 + tol].
double apply_effect(const LinearFunctional& e, const RealVector& w, double tol = kDefaultTolerance);

SystemSpec compose_systems(const CompositeSpec& c, double tol = kDefaultTolerance);

// Partial contractions on a composite A ⊗ B vector (row-major pair index).
Vector steer_state_keep_a(const Eigen::Ref<const Vector>& w_ab, Index dim_a,
                          const Eigen::Ref<const RowVector>& e_b);
Vector steer_state_keep_b(const Eigen::Ref<const Vector>& w_ab, Index dim_a,
                          const Eigen::Ref<const RowVector>& e_a);
RowVector steer_effect_keep_a(const Eigen::Ref<const RowVector>& e_ab, Index dim_a,
                              const Eigen::Ref<const Vector>& w_b);
RowVector steer_effect_keep_b(const Eigen::Ref<const RowVector>& e_ab, Index dim_a,
                              const Eigen::Ref<const Vector>& w_a);

}  // namespace twirlab
