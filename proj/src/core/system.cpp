#include "twirlab/core/system.hpp"

#include <cmath>
#include <unordered_map>

#include "twirlab/error.hpp"

namespace twirlab {

namespace {

// m + tol 1 admits a Cholesky factor, i.e. min eig(m) > -tol.
bool psd_within(const quantum::CMatrix& m, double tol) {
  const quantum::CMatrix shifted = m + tol * quantum::CMatrix::Identity(m.rows(), m.cols());
  return Eigen::LLT<quantum::CMatrix>(shifted).info() == Eigen::Success;
}

// Growing set of columns with approximate-duplicate detection.
class ColumnSet {
 public:
  ColumnSet(Index dim, double tol) : dim_(dim), tol_(tol) {}

  // Appends unconditionally.
  void push(const Vector& v) {
    index_.emplace(grid_hash(v, 4 * tol_), static_cast<Index>(cols_.size()));
    cols_.push_back(v);
  }

  bool push_if_new(const Vector& v) {
    const auto h = grid_hash(v, 4 * tol_);
    for (auto [it, end] = index_.equal_range(h); it != end; ++it)
      if ((cols_[it->second] - v).cwiseAbs().maxCoeff() <= tol_) return false;
    index_.emplace(h, static_cast<Index>(cols_.size()));
    cols_.push_back(v);
    return true;
  }

  Matrix as_columns() const {
    Matrix m(dim_, static_cast<Index>(cols_.size()));
    for (std::size_t k = 0; k < cols_.size(); ++k) m.col(static_cast<Index>(k)) = cols_[k];
    return m;
  }

 private:
  Index dim_;
  double tol_;
  std::vector<Vector> cols_;
  std::unordered_multimap<std::uint64_t, Index> index_;
};

MembershipResult accept_one_hot(Index n, Index hit) {
  MembershipResult r;
  r.member = true;
  r.weights = Vector::Zero(n);
  r.weights[hit] = 1.0;
  return r;
}

MembershipResult reject(double distance) {
  MembershipResult r;
  r.member = false;
  r.distance = distance;
  return r;
}

// Binary measurements {e, u - e} among the generators, as index pairs.
std::vector<std::pair<Index, Index>> binary_measurements(const SystemSpec& s, double tol) {
  const Matrix cols = s.effects().transpose();
  ColumnLookup lookup(cols, tol);
  std::vector<std::pair<Index, Index>> out;
  for (Index i = 0; i < cols.cols(); ++i) {
    const Index c = lookup.find(Vector(s.unit().transpose()) - cols.col(i));
    if (c < 0 || c < i) continue;
    if (c == i) continue;  // e = u/2 is its own complement; the products cover it
    out.emplace_back(i, c);
  }
  return out;
}

}  // namespace

SystemSpec::SystemSpec(SystemData data) : d_(std::move(data)) {
  const Index dim = d_.unit.size();
  if (dim < 1) fail(ErrorCode::DimensionMismatch, "system '" + d_.id + "': dimension must be positive");
  if (d_.states.cols() == 0)
    fail(ErrorCode::EmptyInput, "system '" + d_.id + "': no state generators");
  if (d_.effects.rows() == 0)
    fail(ErrorCode::EmptyInput, "system '" + d_.id + "': no effect generators");
  if (d_.states.rows() != dim || d_.effects.cols() != dim)
    fail(ErrorCode::DimensionMismatch, "system '" + d_.id + "': generator dimension mismatch");
  if (!all_finite(d_.states) || !all_finite(d_.effects) || !all_finite(d_.unit))
    fail(ErrorCode::NonFinite, "system '" + d_.id + "': non-finite generator entries");
  for (const auto& t : d_.transformations)
    if (t.dim_in() != dim || t.dim_out() != dim)
      fail(ErrorCode::DimensionMismatch, "system '" + d_.id + "': transformation size mismatch");
  if (d_.invariance_projector &&
      (d_.invariance_projector->rows() != dim || d_.invariance_projector->cols() != dim))
    fail(ErrorCode::DimensionMismatch, "system '" + d_.id + "': projector size mismatch");
  if ((d_.part_a == nullptr) != (d_.part_b == nullptr))
    fail(ErrorCode::BadParam, "system '" + d_.id + "': composite needs both parts");
  if (d_.part_a && d_.part_a->dim() * d_.part_b->dim() != dim)
    fail(ErrorCode::DimensionMismatch, "system '" + d_.id + "': composite dimension mismatch");

  if (d_.kind == StateSpaceKind::Quantum) {
    coords_ = std::make_shared<const quantum::OperatorCoordinates>(d_.hilbert_dims);
    if (coords_->dim() != dim)
      fail(ErrorCode::DimensionMismatch,
           "system '" + d_.id + "': Hilbert dimensions do not match the vector dimension");
  } else {
    state_lookup_ = std::make_shared<const ColumnLookup>(d_.states, kDefaultTolerance);
    effect_lookup_ = std::make_shared<const ColumnLookup>(d_.effects.transpose(), kDefaultTolerance);
  }
}

SystemSpec SystemSpec::polytope(std::string id, std::vector<RealVector> states,
                                std::vector<LinearFunctional> effects, LinearFunctional unit) {
  SystemData d;
  d.id = std::move(id);
  d.unit = unit.values();
  if (states.empty()) fail(ErrorCode::EmptyInput, "system '" + d.id + "': no state generators");
  if (effects.empty()) fail(ErrorCode::EmptyInput, "system '" + d.id + "': no effect generators");
  d.states.resize(unit.dim(), static_cast<Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].dim() != unit.dim())
      fail(ErrorCode::DimensionMismatch, "system '" + d.id + "': state dimension mismatch");
    d.states.col(static_cast<Index>(k)) = states[k].values();
  }
  d.effects.resize(static_cast<Index>(effects.size()), unit.dim());
  for (std::size_t k = 0; k < effects.size(); ++k) {
    if (effects[k].dim() != unit.dim())
      fail(ErrorCode::DimensionMismatch, "system '" + d.id + "': effect dimension mismatch");
    d.effects.row(static_cast<Index>(k)) = effects[k].values();
  }
  return SystemSpec(std::move(d));
}

const quantum::OperatorCoordinates& SystemSpec::coordinates() const {
  if (!coords_) fail(ErrorCode::PreconditionViolation, "system '" + d_.id + "' is not quantum");
  return *coords_;
}

MembershipResult SystemSpec::contains_state(const Eigen::Ref<const Vector>& x, double tol,
                                            bool subnormalized) const {
  if (x.size() != dim()) fail(ErrorCode::DimensionMismatch, "state dimension mismatch");
  if (const Matrix* p = invariance_projector()) {
    const double drift = ((*p) * x - x).cwiseAbs().maxCoeff();
    if (drift > tol) return reject(drift);
  }
  const double norm = d_.unit.dot(x);
  if (d_.kind == StateSpaceKind::Quantum) {
    const quantum::CMatrix rho = coords_->operator_from_state(x);
    double violation = subnormalized ? std::max(0.0, norm - 1.0) : std::abs(norm - 1.0);
    if (!psd_within(rho, tol)) {
      Eigen::SelfAdjointEigenSolver<quantum::CMatrix> eig(rho, Eigen::EigenvaluesOnly);
      violation = std::max(violation, -eig.eigenvalues().minCoeff());
    }
    MembershipResult r;
    r.member = violation <= tol;
    r.distance = violation;
    return r;
  }
  if (Index hit = state_lookup_->find(x); hit >= 0)
    return accept_one_hot(state_count() + (subnormalized ? 1 : 0), hit);
  if (subnormalized) {
    if (x.cwiseAbs().maxCoeff() <= tol) return accept_one_hot(state_count() + 1, state_count());
    Matrix g(dim(), state_count() + 1);
    g << d_.states, Vector::Zero(dim());
    return convex_membership(x, g, tol);
  }
  return convex_membership(x, d_.states, tol);
}

MembershipResult SystemSpec::contains_effect(const Eigen::Ref<const RowVector>& e, double tol) const {
  if (e.size() != dim()) fail(ErrorCode::DimensionMismatch, "effect dimension mismatch");
  if (const Matrix* p = invariance_projector()) {
    const double drift = (e * (*p) - e).cwiseAbs().maxCoeff();
    if (drift > tol) return reject(drift);
  }
  if (d_.kind == StateSpaceKind::Quantum) {
    const quantum::CMatrix op = coords_->operator_from_effect(e);
    const quantum::CMatrix id = quantum::CMatrix::Identity(op.rows(), op.cols());
    double violation = 0.0;
    if (!psd_within(op, tol) || !psd_within(id - op, tol)) {
      Eigen::SelfAdjointEigenSolver<quantum::CMatrix> eig(op, Eigen::EigenvaluesOnly);
      violation = std::max({0.0, -eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff() - 1.0});
    }
    MembershipResult r;
    r.member = violation <= tol;
    r.distance = violation;
    return r;
  }
  const Vector col = e.transpose();
  if (Index hit = effect_lookup_->find(col); hit >= 0) return accept_one_hot(effect_count(), hit);
  return convex_membership(col, d_.effects.transpose(), tol);
}

double apply_effect(const LinearFunctional& e, const RealVector& w, double tol) {
  if (e.dim() != w.dim())
    fail(ErrorCode::DimensionMismatch, "apply_effect: effect has dimension " +
                                           std::to_string(e.dim()) + ", state has " +
                                           std::to_string(w.dim()));
  const double p = e.values().dot(w.values());
  if (p < -tol || p > 1.0 + tol)
    fail(ErrorCode::RangeViolation, "apply_effect: outcome probability " + std::to_string(p) +
                                        " outside [0, 1]");
  return p;
}

SystemSpec compose_systems(const CompositeSpec& c, double tol) {
  if (!c.a || !c.b) fail(ErrorCode::BadParam, "composite '" + c.id + "': missing part");
  const SystemSpec& a = *c.a;
  const SystemSpec& b = *c.b;
  if (a.kind() != b.kind())
    fail(ErrorCode::BadParam, "composite '" + c.id + "': cannot mix quantum and polytope parts");

  SystemData d;
  d.id = c.id;
  d.kind = a.kind();
  if (d.kind == StateSpaceKind::Quantum) {
    d.hilbert_dims = a.hilbert_dims();
    d.hilbert_dims.insert(d.hilbert_dims.end(), b.hilbert_dims().begin(), b.hilbert_dims().end());
  }
  const Index dim = a.dim() * b.dim();
  d.unit = kron(Vector(a.unit().transpose()), Vector(b.unit().transpose())).transpose();

  // States: every product, then the extras.
  const Index n_prod = a.state_count() * b.state_count();
  d.states.resize(dim, n_prod + static_cast<Index>(c.extra_state_generators.size()));
  for (Index i = 0; i < a.state_count(); ++i)
    for (Index j = 0; j < b.state_count(); ++j)
      d.states.col(i * b.state_count() + j) = kron(Vector(a.states().col(i)), Vector(b.states().col(j)));
  for (std::size_t k = 0; k < c.extra_state_generators.size(); ++k) {
    const auto& x = c.extra_state_generators[k];
    if (x.dim() != dim)
      fail(ErrorCode::DimensionMismatch, "composite '" + c.id + "': extra state " +
                                             std::to_string(k) + " has dimension " +
                                             std::to_string(x.dim()) + ", expected " +
                                             std::to_string(dim));
    d.states.col(n_prod + static_cast<Index>(k)) = x.values();
  }

  // Effects: every product, the coarse-grainings, then the extras.
  ColumnSet effects(dim, tol);
  for (Index i = 0; i < a.effect_count(); ++i)
    for (Index j = 0; j < b.effect_count(); ++j)
      effects.push(kron(Vector(a.effects().row(i).transpose()), Vector(b.effects().row(j).transpose())));
  if (c.coarse_grain && d.kind == StateSpaceKind::Polytope) {
    const auto ma = binary_measurements(a, tol);
    const auto mb = binary_measurements(b, tol);
    for (const auto& [ea, eac] : ma)
      for (const auto& [fb, fbc] : mb) {
        const Vector e0 = a.effects().row(ea).transpose();
        const Vector e1 = a.effects().row(eac).transpose();
        const Vector f0 = b.effects().row(fb).transpose();
        const Vector f1 = b.effects().row(fbc).transpose();
        const Vector outcomes[4] = {kron(e0, f0), kron(e0, f1), kron(e1, f0), kron(e1, f1)};
        for (int mask = 1; mask < 15; ++mask) {
          Vector sum = Vector::Zero(dim);
          for (int o = 0; o < 4; ++o)
            if (mask & (1 << o)) sum += outcomes[o];
          effects.push_if_new(sum);
        }
      }
  }
  for (std::size_t k = 0; k < c.extra_effect_generators.size(); ++k) {
    const auto& e = c.extra_effect_generators[k];
    if (e.dim() != dim)
      fail(ErrorCode::DimensionMismatch, "composite '" + c.id + "': extra effect " +
                                             std::to_string(k) + " has dimension " +
                                             std::to_string(e.dim()) + ", expected " +
                                             std::to_string(dim));
    effects.push_if_new(e.values().transpose());
  }
  d.effects = effects.as_columns().transpose();

  // Products of valid parts are valid by construction; only the extras can
  // break normalization or the [0, 1] range.
  for (std::size_t k = 0; k < c.extra_state_generators.size(); ++k) {
    const Vector x = d.states.col(n_prod + static_cast<Index>(k));
    const double norm = d.unit.dot(x);
    if (std::abs(norm - 1.0) > tol)
      fail(ErrorCode::ValidationFailure, "composite '" + c.id + "': extra state " +
                                             std::to_string(k) + " has unit-effect value " +
                                             std::to_string(norm));
    const Vector p = d.effects * x;
    Index worst = 0;
    const double lo = p.minCoeff(&worst);
    if (lo < -tol)
      fail(ErrorCode::ValidationFailure, "composite '" + c.id + "': extra state " +
                                             std::to_string(k) + " gives probability " +
                                             std::to_string(lo) + " on effect " + std::to_string(worst));
    const double hi = p.maxCoeff(&worst);
    if (hi > 1.0 + tol)
      fail(ErrorCode::ValidationFailure, "composite '" + c.id + "': extra state " +
                                             std::to_string(k) + " gives probability " +
                                             std::to_string(hi) + " on effect " + std::to_string(worst));
  }
  for (std::size_t k = 0; k < c.extra_effect_generators.size(); ++k) {
    const RowVector p = c.extra_effect_generators[k].values() * d.states;
    if (p.minCoeff() < -tol || p.maxCoeff() > 1.0 + tol)
      fail(ErrorCode::ValidationFailure, "composite '" + c.id + "': extra effect " +
                                             std::to_string(k) + " leaves [0, 1] on some state");
  }

  d.part_a = c.a;
  d.part_b = c.b;
  return SystemSpec(std::move(d));
}

Vector steer_state_keep_a(const Eigen::Ref<const Vector>& w_ab, Index dim_a,
                          const Eigen::Ref<const RowVector>& e_b) {
  const Index dim_b = e_b.size();
  if (dim_a * dim_b != w_ab.size()) fail(ErrorCode::DimensionMismatch, "steering: size mismatch");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> w(w_ab.data(), dim_a, dim_b);
  return w * e_b.transpose();
}

Vector steer_state_keep_b(const Eigen::Ref<const Vector>& w_ab, Index dim_a,
                          const Eigen::Ref<const RowVector>& e_a) {
  if (e_a.size() != dim_a || w_ab.size() % dim_a != 0)
    fail(ErrorCode::DimensionMismatch, "steering: size mismatch");
  const Index dim_b = w_ab.size() / dim_a;
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> w(w_ab.data(), dim_a, dim_b);
  return (e_a * w).transpose();
}

RowVector steer_effect_keep_a(const Eigen::Ref<const RowVector>& e_ab, Index dim_a,
                              const Eigen::Ref<const Vector>& w_b) {
  const Index dim_b = w_b.size();
  if (dim_a * dim_b != e_ab.size()) fail(ErrorCode::DimensionMismatch, "steering: size mismatch");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> f(e_ab.data(), dim_a, dim_b);
  return (f * w_b).transpose();
}

RowVector steer_effect_keep_b(const Eigen::Ref<const RowVector>& e_ab, Index dim_a,
                              const Eigen::Ref<const Vector>& w_a) {
  if (w_a.size() != dim_a || e_ab.size() % dim_a != 0)
    fail(ErrorCode::DimensionMismatch, "steering: size mismatch");
  const Index dim_b = e_ab.size() / dim_a;
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> f(e_ab.data(), dim_a, dim_b);
  return w_a.transpose() * f;
}

}  // namespace twirlab
