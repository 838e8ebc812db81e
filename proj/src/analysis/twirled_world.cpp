#include "twirlab/analysis/twirled_world.hpp"

#include "twirlab/error.hpp"

namespace twirlab {

namespace {

// Generators from `first_state` / `first_effect` on; earlier ones are known images.
void check_physical(const SystemSpec& s, const GroupAction& a, double tol, Index first_state = 0,
                    Index first_effect = 0) {
  for (Index g = 0; g < a.order(); ++g) {
    const double drift = max_abs(a.apply_effect(g, s.unit()) - s.unit());
    if (drift > tol)
      fail(ErrorCode::ActionNotPhysical, "element '" + a.label(g) + "' changes the unit effect of '" +
                                             s.id() + "' by " + std::to_string(drift));
    for (Index k = first_state; k < s.state_count(); ++k) {
      const auto r = s.contains_state(a.apply(g, s.states().col(k)), tol);
      if (!r.member)
        fail(ErrorCode::ActionNotPhysical, "element '" + a.label(g) + "' maps state generator " +
                                               std::to_string(k) + " of '" + s.id() +
                                               "' outside the state set");
    }
    for (Index k = first_effect; k < s.effect_count(); ++k) {
      const auto r = s.contains_effect(a.apply_effect(g, s.effects().row(k)), tol);
      if (!r.member)
        fail(ErrorCode::ActionNotPhysical, "element '" + a.label(g) + "' maps effect generator " +
                                               std::to_string(k) + " of '" + s.id() +
                                               "' outside the effect set");
    }
  }
}

// Leading generators of a quantum composite that are the products of the
// parts' generators, in pair order.  A collective V_g ⊗ V_g sends them to
// products of images, which are positive (and below the identity for
// effects) once the parts pass, so they need no separate check.
std::pair<Index, Index> product_prefix(const SystemSpec& s, double tol) {
  if (s.kind() != StateSpaceKind::Quantum || !s.is_composite()) return {0, 0};
  const SystemSpec& a = s.part_a();
  const SystemSpec& b = s.part_b();
  Index ns = 0, ne = 0;
  if (s.state_count() >= a.state_count() * b.state_count()) {
    bool ok = true;
    for (Index i = 0; i < a.state_count() && ok; ++i)
      for (Index j = 0; j < b.state_count() && ok; ++j)
        ok = max_abs(s.states().col(i * b.state_count() + j) -
                     kron(Vector(a.states().col(i)), Vector(b.states().col(j)))) <= tol;
    if (ok) ns = a.state_count() * b.state_count();
  }
  if (s.effect_count() >= a.effect_count() * b.effect_count()) {
    bool ok = true;
    for (Index i = 0; i < a.effect_count() && ok; ++i)
      for (Index j = 0; j < b.effect_count() && ok; ++j)
        ok = max_abs(s.effects().row(i * b.effect_count() + j).transpose() -
                     kron(Vector(a.effects().row(i).transpose()), Vector(b.effects().row(j).transpose()))) <= tol;
    if (ok) ne = a.effect_count() * b.effect_count();
  }
  return {ns, ne};
}

}  // namespace

TwirledWorld build_twirled_world(std::shared_ptr<const SystemSpec> s,
                                 std::shared_ptr<const GroupAction> a, const TwirlOptions& opt) {
  if (!s || !a) fail(ErrorCode::BadParam, "twirled world: null system or action");
  if (a->dim() != s->dim())
    fail(ErrorCode::DimensionMismatch, "twirled world: action on dimension " + std::to_string(a->dim()) +
                                           " applied to '" + s->id() + "' of dimension " +
                                           std::to_string(s->dim()));
  TwirledWorld w;
  w.base = s;
  w.action = a;
  w.rank_tol = opt.rank_tol;

  const bool split = s->is_composite() && a->is_collective() && a->parts().size() == 2;
  if (split) {
    w.part_a = std::make_shared<const TwirledWorld>(build_twirled_world(s->part_a_ptr(), a->parts()[0], opt));
    w.part_b = std::make_shared<const TwirledWorld>(build_twirled_world(s->part_b_ptr(), a->parts()[1], opt));
  }
  if (opt.check_physical) {
    const auto [ns, ne] = split ? product_prefix(*s, opt.tol) : std::pair<Index, Index>{0, 0};
    check_physical(*s, *a, opt.tol, ns, ne);
  }

  w.projector = std::make_shared<const TwirlProjector>(twirl_projector(a));
  const Matrix& p = w.projector->matrix();

  const Matrix states = p * s->states();
  const Matrix effects_t = p.transpose() * s->effects().transpose();
  const Matrix distinct_states = select_columns(states, distinct_columns(states, opt.tol * 1e-3));
  const Matrix distinct_effects = select_columns(effects_t, distinct_columns(effects_t, opt.tol * 1e-3));

  SystemData d;
  d.id = s->id();
  d.kind = s->kind();
  d.hilbert_dims = s->hilbert_dims();
  d.states = distinct_states;
  d.effects = distinct_effects.transpose();
  d.unit = s->unit();
  d.invariance_projector = p;
  if (w.part_a) {
    d.part_a = w.part_a->system;
    d.part_b = w.part_b->system;
  }
  w.system = std::make_shared<const SystemSpec>(std::move(d));

  w.invariant_state_basis = orthonormal_range(unit_columns(distinct_states), opt.rank_tol);
  w.invariant_effect_basis = orthonormal_range(unit_columns(distinct_effects), opt.rank_tol);
  w.k = w.invariant_state_basis.cols();
  return w;
}

Index count_parameters(const TwirledWorld& w) { return count_parameters(w, w.rank_tol); }

Index count_parameters(const TwirledWorld& w, double rank_tol) {
  return numerical_rank(unit_columns(w.system->states()), rank_tol);
}

std::vector<Index> count_parameters(const TwirledWorld& w, const std::vector<double>& rank_tols) {
  std::vector<Index> out;
  Eigen::BDCSVD<Matrix> svd(unit_columns(w.system->states()));
  const Vector& sv = svd.singularValues();
  for (double rt : rank_tols) {
    Index r = 0;
    if (sv.size() > 0 && sv[0] > 0)
      while (r < sv.size() && sv[r] > rt * sv[0]) ++r;
    out.push_back(r);
  }
  return out;
}

Index restricted_parameter_count(const TwirledWorld& w, const std::vector<int>& keep) {
  if (w.system->kind() != StateSpaceKind::Quantum)
    fail(ErrorCode::PreconditionViolation, "restricted count needs a quantum world");
  const Matrix c = quantum::compression_map(w.system->coordinates(), keep);
  return numerical_rank(unit_columns(c * w.system->states()), w.rank_tol);
}

std::vector<int> total_number_kets(int cutoff, int d1, int d2) {
  std::vector<int> keep;
  for (int m1 = 0; m1 < d1 && m1 <= cutoff; ++m1)
    for (int m2 = 0; m2 < d2 && m1 + m2 <= cutoff; ++m2) keep.push_back(m1 * d2 + m2);
  return keep;
}

Index pairing_rank(const TwirledWorld& w) {
  // rank(E S) = rank(Be^T Bs) for orthonormal span bases; the small product
  // has singular values in [0, 1] and no generator-scale noise.
  return numerical_rank(w.invariant_effect_basis.transpose() * w.invariant_state_basis, w.rank_tol);
}

ValidationReport check_tomographic_completeness(const TwirledWorld& w, double tol) {
  (void)tol;
  ValidationReport rep;
  rep.subject = w.system->id();
  const Index r = pairing_rank(w);
  const Index ke = w.invariant_effect_basis.cols();
  auto entry = [&](const char* name, Index want) {
    CheckEntry e;
    e.name = name;
    e.pass = r == want;
    e.worst_residual = static_cast<double>(want - r);
    e.detail = "pairing rank " + std::to_string(r) + ", span dimension " + std::to_string(want);
    return e;
  };
  rep.checks.push_back(entry("state tomography", w.k));
  rep.checks.push_back(entry("effect tomography", ke));
  return rep;
}

}  // namespace twirlab
