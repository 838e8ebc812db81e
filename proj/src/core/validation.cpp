#include "twirlab/core/validation.hpp"

#include <cstdio>

#include "twirlab/error.hpp"

namespace twirlab {

namespace {

std::string fmt(const char* pattern, double a, long b = 0, long c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

CheckEntry make_entry(const char* name, double worst, double tol, std::string detail = {}) {
  CheckEntry e;
  e.name = name;
  e.worst_residual = worst;
  e.pass = worst <= tol;
  e.detail = std::move(detail);
  return e;
}

// Membership of each column, after dropping (near-)duplicates.
template <typename Fn>
CheckEntry membership_entry(const char* name, const Matrix& candidates, double tol, Fn&& member) {
  double worst = 0.0;
  long worst_index = -1;
  for (Index c : distinct_columns(candidates, tol * 1e-3)) {
    const MembershipResult r = member(candidates.col(c));
    if (!r.member && (worst_index < 0 || r.distance > worst)) {
      worst = r.distance;
      worst_index = static_cast<long>(c);
    }
  }
  CheckEntry e;
  e.name = name;
  e.pass = worst_index < 0;
  e.worst_residual = worst;
  if (!e.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "candidate %ld outside the set (distance %.3g)", worst_index, worst);
    e.detail = buf;
  }
  return e;
}

}  // namespace

bool ValidationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const CheckEntry* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate_system(const SystemSpec& s, double tol) {
  ValidationReport rep;
  rep.subject = s.id();

  const RowVector norms = s.unit() * s.states();
  Index worst_state = 0;
  const double norm_err = (norms.array() - 1.0).abs().maxCoeff(&worst_state);
  rep.checks.push_back(make_entry(kCheckNormalization, norm_err, tol,
                                  norm_err > tol ? fmt("unit effect gives %.17g on state %ld",
                                                       norms[worst_state], static_cast<long>(worst_state))
                                                 : std::string{}));

  if (s.kind() == StateSpaceKind::Quantum) {
    double worst = 0.0;
    for (Index k = 0; k < s.state_count(); ++k)
      worst = std::max(worst, s.contains_state(s.states().col(k), tol).distance);
    rep.checks.push_back(make_entry("state positivity", worst, tol));
  }

  // Pairing table: rows are effects, columns states.
  const Matrix table = s.effects() * s.states();
  Index lo_r = 0, lo_c = 0, hi_r = 0, hi_c = 0;
  const double lo = table.minCoeff(&lo_r, &lo_c);
  const double hi = table.maxCoeff(&hi_r, &hi_c);
  const double range_err = std::max({0.0, -lo, hi - 1.0});
  std::string range_detail;
  if (range_err > tol) {
    const bool high = hi - 1.0 >= -lo;
    range_detail = fmt("value %.17g from effect %ld on state %ld", high ? hi : lo,
                       static_cast<long>(high ? hi_r : lo_r), static_cast<long>(high ? hi_c : lo_c));
  }
  rep.checks.push_back(make_entry(kCheckRange, range_err, tol, range_detail));

  {
    Matrix complements(s.dim(), s.effect_count());
    for (Index k = 0; k < s.effect_count(); ++k)
      complements.col(k) = (s.unit() - s.effects().row(k)).transpose();
    auto entry = membership_entry(kCheckComplement, complements, tol, [&](const auto& col) {
      return s.contains_effect(col.transpose(), tol);
    });
    if (!entry.pass) entry.detail = "complement of an effect generator " + entry.detail;
    rep.checks.push_back(entry);
  }

  {
    const MembershipResult z = s.contains_effect(RowVector::Zero(s.dim()), tol);
    rep.checks.push_back(make_entry(kCheckZero, z.member ? 0.0 : std::max(z.distance, 2 * tol), tol,
                                    z.member ? std::string{} : "zero functional is not an effect"));
  }

  if (!s.transformations().empty()) {
    double worst = 0.0;
    for (const auto& t : s.transformations()) {
      worst = std::max(worst, max_abs(s.unit() * t.matrix() - s.unit()));
      for (Index k = 0; k < s.state_count(); ++k) {
        const auto r = s.contains_state(t.matrix() * s.states().col(k), tol);
        if (!r.member) worst = std::max({worst, r.distance, 2 * tol});
      }
    }
    rep.checks.push_back(make_entry(kCheckTransformations, worst, tol));
  }
  return rep;
}

ValidationReport check_steering_closure(const SystemSpec& w, double tol) {
  if (!w.is_composite())
    fail(ErrorCode::PreconditionViolation, "steering closure needs a composite system");
  const SystemSpec& a = w.part_a();
  const SystemSpec& b = w.part_b();
  const Index da = a.dim();

  ValidationReport rep;
  rep.subject = w.id();

  Matrix keep_a(da, w.state_count() * b.effect_count());
  Matrix keep_b(b.dim(), w.state_count() * a.effect_count());
  for (Index k = 0; k < w.state_count(); ++k) {
    for (Index j = 0; j < b.effect_count(); ++j)
      keep_a.col(k * b.effect_count() + j) = steer_state_keep_a(w.states().col(k), da, b.effects().row(j));
    for (Index j = 0; j < a.effect_count(); ++j)
      keep_b.col(k * a.effect_count() + j) = steer_state_keep_b(w.states().col(k), da, a.effects().row(j));
  }
  rep.checks.push_back(membership_entry("steered states (keep A)", keep_a, tol, [&](const auto& x) {
    return a.contains_state(x, tol, true);
  }));
  rep.checks.push_back(membership_entry("steered states (keep B)", keep_b, tol, [&](const auto& x) {
    return b.contains_state(x, tol, true);
  }));

  Matrix eff_a(da, w.effect_count() * b.state_count());
  Matrix eff_b(b.dim(), w.effect_count() * a.state_count());
  for (Index k = 0; k < w.effect_count(); ++k) {
    for (Index j = 0; j < b.state_count(); ++j)
      eff_a.col(k * b.state_count() + j) =
          steer_effect_keep_a(w.effects().row(k), da, b.states().col(j)).transpose();
    for (Index j = 0; j < a.state_count(); ++j)
      eff_b.col(k * a.state_count() + j) =
          steer_effect_keep_b(w.effects().row(k), da, a.states().col(j)).transpose();
  }
  rep.checks.push_back(membership_entry("steered effects (keep A)", eff_a, tol, [&](const auto& e) {
    return a.contains_effect(e.transpose(), tol);
  }));
  rep.checks.push_back(membership_entry("steered effects (keep B)", eff_b, tol, [&](const auto& e) {
    return b.contains_effect(e.transpose(), tol);
  }));
  return rep;
}

}  // namespace twirlab
