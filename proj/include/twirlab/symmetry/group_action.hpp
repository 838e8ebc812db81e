#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twirlab/core/linalg.hpp"

namespace twirlab {

enum class ActionKind { Finite, DesignRealizedCompact };

// For compact groups realized by a finite average: the average equals the
// Haar twirl up to `moment_order`, which makes it exact on at most
// `max_factors` collective tensor factors.
struct DesignCertificate {
  std::string group;
  std::string realization;
  int moment_order = 0;
  int max_factors = 0;
};

class GroupAction {
 public:
  ActionKind kind() const { return s_->kind; }
  Index order() const { return static_cast<Index>(s_->labels.size()); }
  Index dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return s_->labels; }
  const std::string& label(Index g) const { return s_->labels[g]; }
  Index index_of(std::string_view label) const;
  Index identity() const { return s_->identity; }
  Index product(Index g, Index h) const { return s_->table[g * order() + h]; }
  Index inverse(Index g) const { return s_->inverse[g]; }
  const std::optional<DesignCertificate>& certificate() const { return s_->certificate; }

  // Number of elementary (non-collective) factors; 1 for a plain action.
  int factor_count() const { return factors_; }
  bool is_collective() const { return !parts_.empty(); }
  const std::vector<std::shared_ptr<const GroupAction>>& parts() const { return parts_; }

  // V_g as a dense matrix (Kronecker product for collective actions).
  Matrix element(Index g) const;
  Vector apply(Index g, const Eigen::Ref<const Vector>& x) const;
  // Effects transform by precomposition: e -> e V_g.
  RowVector apply_effect(Index g, const Eigen::Ref<const RowVector>& e) const;

  // All elements equal the identity within tol.
  bool is_trivial(double tol = kDefaultTolerance) const;

 private:
  struct Structure {
    std::vector<std::string> labels;
    std::vector<Index> table;
    std::vector<Index> inverse;
    Index identity = 0;
    ActionKind kind = ActionKind::Finite;
    std::optional<DesignCertificate> certificate;
  };

  void leaves(std::vector<const GroupAction*>& out) const;

  std::shared_ptr<const Structure> s_;
  std::vector<Matrix> maps_;
  std::vector<Matrix> transposed_;
  std::vector<std::shared_ptr<const GroupAction>> parts_;
  Index dim_ = 0;
  int factors_ = 1;

  friend GroupAction build_finite_action(std::vector<std::pair<std::string, LinearMap>>, double,
                                         std::optional<DesignCertificate>);
  friend GroupAction collective_action(std::vector<std::shared_ptr<const GroupAction>>);
};

// Validates closure, identity and inverses; throws NotAGroup naming the
// offending pair.  A certificate marks the list as a design realization.
GroupAction build_finite_action(std::vector<std::pair<std::string, LinearMap>> maps,
                                double tol = kDefaultTolerance,
                                std::optional<DesignCertificate> certificate = std::nullopt);

// g -> V^1_g ⊗ ... ⊗ V^n_g.  Parts must carry the same labels in the same order.
GroupAction collective_action(std::vector<std::shared_ptr<const GroupAction>> parts);

GroupAction trivial_action(Index dim);

}  // namespace twirlab
