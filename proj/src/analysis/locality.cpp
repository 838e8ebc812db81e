#include "twirlab/analysis/locality.hpp"

#include "twirlab/error.hpp"

namespace twirlab {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Invariant product effects f_A ⊗ f_B on a basis, as rows.
Matrix product_effect_rows(const Matrix& fa, const Matrix& fb) {
  Matrix rows(fa.cols() * fb.cols(), fa.rows() * fb.rows());
  for (Index i = 0; i < fa.cols(); ++i)
    for (Index j = 0; j < fb.cols(); ++j)
      rows.row(i * fb.cols() + j) = kron(Vector(fa.col(i)), Vector(fb.col(j))).transpose();
  return rows;
}

}  // namespace

double verify_local_indistinguishability(const Eigen::Ref<const Vector>& omega1,
                                         const Eigen::Ref<const Vector>& omega2, const TwirledWorld& a,
                                         const TwirledWorld& b, double tol) {
  (void)tol;
  const Index da = a.system->dim();
  const Index db = b.system->dim();
  if (omega1.size() != da * db || omega2.size() != da * db)
    fail(ErrorCode::DimensionMismatch, "local indistinguishability: states are not on the composite");
  const Vector diff = omega1 - omega2;
  Eigen::Map<const RowMajor> d(diff.data(), da, db);
  const Matrix values = a.invariant_effect_basis.transpose() * d * b.invariant_effect_basis;
  return max_abs(values);
}

SeparatingEffect find_separating_invariant_effect(const Eigen::Ref<const Vector>& omega1,
                                                  const Eigen::Ref<const Vector>& omega2,
                                                  const Matrix& base_effects, const RowVector& unit,
                                                  const TwirlProjector& p, double tol) {
  if (omega1.size() != p.dim() || omega2.size() != p.dim() || base_effects.cols() != p.dim())
    fail(ErrorCode::DimensionMismatch, "separating effect: dimension mismatch");
  const Vector diff = omega1 - omega2;
  if (diff.cwiseAbs().maxCoeff() <= tol)
    fail(ErrorCode::PreconditionViolation, "separating effect: the two states coincide");
  if (max_abs(p.apply(omega1) - omega1) > tol || max_abs(p.apply(omega2) - omega2) > tol)
    fail(ErrorCode::PreconditionViolation, "separating effect: states must be invariant");

  // (e o G)(diff) for every base effect at once.
  const Vector gaps = base_effects * p.apply(diff);
  SeparatingEffect best;
  for (Index k = 0; k < gaps.size(); ++k) {
    if (std::abs(gaps[k]) > std::abs(best.gap) + 1e-15) {
      best.base_index = k;
      best.gap = gaps[k];
    }
  }
  if (best.base_index < 0 || std::abs(best.gap) <= tol)
    fail(ErrorCode::NotSeparable, "no base effect separates the two states after twirling");
  best.effect = p.apply_effect(base_effects.row(best.base_index));
  if (best.gap < 0) {
    best.effect = unit - best.effect;
    best.complemented = true;
  }
  best.gap = best.effect.dot(diff);
  return best;
}

LocalityVerdict locality_verdict(const TwirledWorld& a, const TwirledWorld& b, const TwirledWorld& ab,
                                 double tol) {
  const Index da = a.system->dim();
  const Index db = b.system->dim();
  if (ab.system->dim() != da * db)
    fail(ErrorCode::InconsistentWorlds, "locality: composite dimension " +
                                            std::to_string(ab.system->dim()) + " is not " +
                                            std::to_string(da) + " x " + std::to_string(db));
  LocalityVerdict v;
  v.k_a = a.k;
  v.k_b = b.k;
  v.k_ab = ab.k;
  v.criterion_fails_locality = v.k_ab > v.k_a * v.k_b;

  const Matrix& q = ab.invariant_state_basis;
  const Matrix pairing = product_effect_rows(a.invariant_effect_basis, b.invariant_effect_basis) * q;
  Eigen::BDCSVD<Matrix> svd(pairing, Eigen::ComputeFullV);
  v.product_pairing_rank = numerical_rank(pairing, ab.rank_tol);
  v.direct_fails_locality = v.product_pairing_rank < q.cols();
  if (!v.direct_fails_locality) return v;

  // Invisible direction: right singular vector of the smallest singular value.
  Vector dir = q * svd.matrixV().col(q.cols() - 1);
  Index lead = 0;
  dir.cwiseAbs().maxCoeff(&lead);
  dir /= dir[lead];

  auto attach = [&](const Vector& mid, double t) {
    LocalityWitness wit;
    wit.omega1 = mid + t * dir;
    wit.omega2 = mid - t * dir;
    wit.product_discrepancy = verify_local_indistinguishability(wit.omega1, wit.omega2, a, b, tol);
    wit.separator = find_separating_invariant_effect(wit.omega1, wit.omega2, ab.base->effects(),
                                                     ab.base->unit(), *ab.projector, tol);
    v.witness = std::move(wit);
  };

  if (ab.system->kind() == StateSpaceKind::Quantum) {
    // Chord through the maximally mixed state, which every unitary action
    // fixes: I/d ± t D stays positive up to t = 1 / (d max|eig D|).
    const auto& coords = ab.system->coordinates();
    const int d = coords.hilbert_dim();
    Eigen::SelfAdjointEigenSolver<quantum::CMatrix> eig(coords.operator_from_state(dir), Eigen::EigenvaluesOnly);
    const double spread = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!(spread > 0)) return v;
    const Vector mid = coords.state_vector(quantum::CMatrix::Identity(d, d) / static_cast<double>(d));
    const double t = 1.0 / (d * spread);
    attach(mid, t);
    return v;
  }

  // Widest chord of the twirled state hull along dir: the largest t with
  // x ± t dir both convex combinations of twirled generators.  Everything
  // lives in the invariant span, so the LP runs in its coordinates.
  const Matrix& s = ab.system->states();
  const Matrix sc = q.transpose() * s;
  const Vector dc = q.transpose() * dir;
  const Index n = s.cols();
  const Index dim = sc.rows();
  Matrix chord(dim + 2, 2 * n);
  chord.setZero();
  chord.topLeftCorner(dim, n) = sc;
  chord.topRightCorner(dim, n) = -sc;
  chord.row(dim).head(n).setOnes();
  chord.row(dim + 1).tail(n).setOnes();
  auto chord_point = [&](double t) {
    Vector x(dim + 2);
    x << t * dc, 0.5, 0.5;
    return convex_membership(x, chord, 1e-12);
  };
  double lo = 0.0;
  double hi = 1.0;
  MembershipResult best = chord_point(0.0);
  while (hi < 1e6) {
    MembershipResult r = chord_point(hi);
    if (!r.member) break;
    best = std::move(r);
    lo = hi;
    hi *= 2;
  }
  for (int it = 0; it < 60 && hi - lo > 1e-15 * hi; ++it) {
    const double m = 0.5 * (lo + hi);
    MembershipResult r = chord_point(m);
    if (r.member) {
      lo = m;
      best = std::move(r);
    } else {
      hi = m;
    }
  }
  if (lo <= 0.0 || !best.member) return v;
  const Vector mid = s * (best.weights.head(n) + best.weights.tail(n));
  const double t = lo;

  attach(mid, t);
  return v;
}

}  // namespace twirlab
