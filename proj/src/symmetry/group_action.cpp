#include "twirlab/symmetry/group_action.hpp"

#include <unordered_set>

#include "twirlab/error.hpp"

namespace twirlab {

namespace {

Vector flatten(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

}  // namespace

Index GroupAction::index_of(std::string_view label) const {
  for (Index g = 0; g < order(); ++g)
    if (s_->labels[g] == label) return g;
  return -1;
}

void GroupAction::leaves(std::vector<const GroupAction*>& out) const {
  if (parts_.empty()) {
    out.push_back(this);
    return;
  }
  for (const auto& p : parts_) p->leaves(out);
}

Matrix GroupAction::element(Index g) const {
  if (parts_.empty()) return maps_[g];
  Matrix m = parts_[0]->element(g);
  for (std::size_t k = 1; k < parts_.size(); ++k) m = kron(m, parts_[k]->element(g));
  return m;
}

Vector GroupAction::apply(Index g, const Eigen::Ref<const Vector>& x) const {
  if (x.size() != dim_) fail(ErrorCode::DimensionMismatch, "group action: vector dimension mismatch");
  if (parts_.empty()) return maps_[g] * x;
  std::vector<const GroupAction*> ls;
  leaves(ls);
  std::vector<const Matrix*> f;
  std::vector<Index> dims;
  for (const auto* l : ls) {
    f.push_back(&l->maps_[g]);
    dims.push_back(l->dim_);
  }
  return kron_apply(f, dims, x);
}

RowVector GroupAction::apply_effect(Index g, const Eigen::Ref<const RowVector>& e) const {
  if (e.size() != dim_) fail(ErrorCode::DimensionMismatch, "group action: effect dimension mismatch");
  if (parts_.empty()) return e * maps_[g];
  std::vector<const GroupAction*> ls;
  leaves(ls);
  std::vector<const Matrix*> f;
  std::vector<Index> dims;
  for (const auto* l : ls) {
    f.push_back(&l->transposed_[g]);
    dims.push_back(l->dim_);
  }
  return kron_apply(f, dims, e.transpose()).transpose();
}

bool GroupAction::is_trivial(double tol) const {
  std::vector<const GroupAction*> ls;
  leaves(ls);
  for (const auto* l : ls)
    for (const auto& m : l->maps_)
      if (max_abs(m - Matrix::Identity(m.rows(), m.cols())) > tol) return false;
  return true;
}

GroupAction build_finite_action(std::vector<std::pair<std::string, LinearMap>> maps, double tol,
                                std::optional<DesignCertificate> certificate) {
  if (maps.empty()) fail(ErrorCode::EmptyInput, "group action: no elements");
  const Index n = static_cast<Index>(maps.size());
  const Index dim = maps[0].second.dim_in();
  auto s = std::make_shared<GroupAction::Structure>();
  std::unordered_set<std::string> seen;
  Matrix flat(dim * dim, n);
  for (Index g = 0; g < n; ++g) {
    const auto& [label, map] = maps[g];
    if (map.dim_in() != dim || map.dim_out() != dim)
      fail(ErrorCode::DimensionMismatch, "group action: element '" + label + "' is not " +
                                             std::to_string(dim) + "x" + std::to_string(dim));
    if (!seen.insert(label).second)
      fail(ErrorCode::NotAGroup, "group action: duplicate label '" + label + "'");
    s->labels.push_back(label);
    flat.col(g) = flatten(map.matrix());
  }

  ColumnLookup lookup(flat, tol);
  auto find = [&](const Matrix& m) {
    Index hit = lookup.find(flatten(m));
    if (hit >= 0) return hit;
    // grid miss near a cell boundary
    for (Index c = 0; c < n; ++c)
      if ((flat.col(c) - flatten(m)).cwiseAbs().maxCoeff() <= tol) return c;
    return Index{-1};
  };

  s->identity = find(Matrix::Identity(dim, dim));
  if (s->identity < 0) fail(ErrorCode::NotAGroup, "group action: identity element missing");
  s->table.resize(static_cast<std::size_t>(n * n));
  for (Index g = 0; g < n; ++g)
    for (Index h = 0; h < n; ++h) {
      const Index gh = find(maps[g].second.matrix() * maps[h].second.matrix());
      if (gh < 0)
        fail(ErrorCode::NotAGroup, "group action: product of '" + s->labels[g] + "' and '" +
                                       s->labels[h] + "' is not in the list");
      s->table[g * n + h] = gh;
    }
  s->inverse.assign(static_cast<std::size_t>(n), -1);
  for (Index g = 0; g < n; ++g) {
    for (Index h = 0; h < n; ++h)
      if (s->table[g * n + h] == s->identity && s->table[h * n + g] == s->identity) {
        s->inverse[g] = h;
        break;
      }
    if (s->inverse[g] < 0)
      fail(ErrorCode::NotAGroup, "group action: element '" + s->labels[g] + "' has no inverse");
  }
  s->kind = certificate ? ActionKind::DesignRealizedCompact : ActionKind::Finite;
  s->certificate = std::move(certificate);

  GroupAction a;
  a.s_ = std::move(s);
  a.dim_ = dim;
  for (auto& [label, map] : maps) {
    a.transposed_.push_back(map.matrix().transpose());
    a.maps_.push_back(map.matrix());
  }
  return a;
}

GroupAction collective_action(std::vector<std::shared_ptr<const GroupAction>> parts) {
  if (parts.empty()) fail(ErrorCode::EmptyInput, "collective action: no parts");
  for (const auto& p : parts)
    if (!p) fail(ErrorCode::BadParam, "collective action: null part");
  const auto& first = *parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto& p = *parts[k];
    if (p.labels() != first.labels())
      fail(ErrorCode::LabelMismatch, "collective action: part " + std::to_string(k) +
                                         " carries different group labels");
    if (p.s_->table != first.s_->table)
      fail(ErrorCode::LabelMismatch, "collective action: part " + std::to_string(k) +
                                         " has a different multiplication table");
  }
  GroupAction a;
  a.s_ = first.s_;
  a.dim_ = 1;
  a.factors_ = 0;
  for (const auto& p : parts) {
    a.dim_ *= p->dim();
    a.factors_ += p->factor_count();
  }
  a.parts_ = std::move(parts);
  return a;
}

GroupAction trivial_action(Index dim) {
  return build_finite_action({{"e", LinearMap::identity(dim)}});
}

}  // namespace twirlab
