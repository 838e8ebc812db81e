#include "twirlab/analysis/ubiquity.hpp"

#include "twirlab/error.hpp"

namespace twirlab {

std::optional<Index> first_moved_state(const SystemSpec& s, const GroupAction& a, double tol) {
  for (Index k = 0; k < s.state_count(); ++k)
    for (Index g = 0; g < a.order(); ++g)
      if (max_abs(a.apply(g, s.states().col(k)) - s.states().col(k)) > tol) return k;
  return std::nullopt;
}

UbiquityWitness ubiquity_witnesses(std::shared_ptr<const GroupAction> a, const Eigen::Ref<const Vector>& seed,
                                   double tol) {
  if (!a) fail(ErrorCode::BadParam, "ubiquity: null action");
  if (seed.size() != a->dim()) fail(ErrorCode::DimensionMismatch, "ubiquity: seed dimension mismatch");
  UbiquityWitness w;
  w.seed = seed;
  for (Index g = 0; g < a->order(); ++g) {
    if (max_abs(a->apply(g, seed) - seed) > tol) {
      w.moving_element = g;
      w.moving_label = a->label(g);
      break;
    }
  }
  if (w.moving_element < 0)
    fail(ErrorCode::TrivialAction, "ubiquity: no group element moves the seed state");

  const TwirlProjector p1 = twirl_projector(a);
  const auto pair = std::make_shared<const GroupAction>(collective_action({a, a}));
  const Vector local = p1.apply(seed);
  w.omega_prod = kron(local, local);
  w.omega_corr = twirl_projector(pair).apply(kron(Vector(seed), Vector(seed)));
  w.separation = max_abs(w.omega_corr - w.omega_prod);
  if (w.separation <= tol)
    fail(ErrorCode::PreconditionViolation, "ubiquity: correlated and product twirls coincide");
  return w;
}

TransformationPairReport transformation_pair_witness(const TwirledWorld& a, const TwirledWorld& b,
                                                     const Eigen::Ref<const Vector>& omega_corr,
                                                     const std::optional<Vector>& omega_prod, double tol) {
  const Index da = a.system->dim();
  const Index db = b.system->dim();
  if (omega_corr.size() != da * db)
    fail(ErrorCode::DimensionMismatch, "transformation pair: state is not on the composite");
  TransformationPairReport r;
  const Matrix& ga = a.projector->matrix();
  const Matrix& xs = a.system->states();
  r.local_residual = max_abs(ga * xs - xs);

  const Matrix* f[2] = {&ga, nullptr};
  const Index dims[2] = {da, db};
  const Vector moved = kron_apply(f, dims, omega_corr);
  r.global_gap = max_abs(moved - omega_corr);
  if (omega_prod) r.product_residual = max_abs(moved - *omega_prod);
  r.pass = r.local_residual <= tol && r.global_gap > tol &&
           (!r.product_residual || *r.product_residual <= tol);
  return r;
}

}  // namespace twirlab
