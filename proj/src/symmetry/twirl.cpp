#include "twirlab/symmetry/twirl.hpp"

#include "twirlab/error.hpp"

namespace twirlab {

Vector TwirlProjector::apply(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != dim()) fail(ErrorCode::DimensionMismatch, "twirl: vector dimension mismatch");
  return matrix() * x;
}

RowVector TwirlProjector::apply_effect(const Eigen::Ref<const RowVector>& e) const {
  if (e.size() != dim()) fail(ErrorCode::DimensionMismatch, "twirl: effect dimension mismatch");
  return e * matrix();
}

TwirlProjector twirl_projector(std::shared_ptr<const GroupAction> action) {
  if (!action) fail(ErrorCode::BadParam, "twirl: null action");
  const GroupAction& a = *action;
  if (const auto& cert = a.certificate(); cert && a.factor_count() > cert->max_factors)
    fail(ErrorCode::CertificationError,
         "twirl: " + cert->realization + " is certified for at most " +
             std::to_string(cert->max_factors) + " collective factors, got " +
             std::to_string(a.factor_count()));
  Matrix sum = Matrix::Zero(a.dim(), a.dim());
  for (Index g = 0; g < a.order(); ++g) sum += a.element(g);
  sum /= static_cast<double>(a.order());
  return TwirlProjector(LinearMap(std::move(sum)), std::move(action));
}

RealVector twirl(const TwirlProjector& p, const RealVector& x) { return RealVector(p.apply(x.values())); }

LinearFunctional twirl(const TwirlProjector& p, const LinearFunctional& e) {
  return LinearFunctional(p.apply_effect(e.values()));
}

}  // namespace twirlab
