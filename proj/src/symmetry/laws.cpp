#include "twirlab/symmetry/laws.hpp"

#include "twirlab/error.hpp"

namespace twirlab {

namespace {

// Random vectors and covectors, one per column; trials are batched so that
// the dense projectors act by matrix products.
struct Probe {
  Matrix states;
  Matrix effects;  // covectors, stored as columns
};

Probe make_probe(SeededRng& rng, Index dim, int trials) {
  Probe p{Matrix(dim, trials), Matrix(dim, trials)};
  for (int t = 0; t < trials; ++t) {
    p.states.col(t) = rng.uniform_vector(dim);
    p.effects.col(t) = rng.uniform_vector(dim);
  }
  return p;
}

double inf_dist(const Matrix& a, const Matrix& b) { return max_abs(a - b); }

Matrix act(const GroupAction& a, Index g, const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (Index c = 0; c < x.cols(); ++c) out.col(c) = a.apply(g, x.col(c));
  return out;
}

Matrix act_effect(const GroupAction& a, Index g, const Matrix& f) {
  Matrix out(f.rows(), f.cols());
  for (Index c = 0; c < f.cols(); ++c) out.col(c) = a.apply_effect(g, f.col(c).transpose()).transpose();
  return out;
}

void invariance_and_idempotence(const GroupAction& a, const Matrix& p, const std::string& scope,
                                const Probe& probe, double tol, std::vector<LawEntry>& out) {
  const Matrix pt = p.transpose();
  double left = 0.0, right = 0.0, idem = 0.0;
  const Matrix px = p * probe.states;
  const Matrix fp = pt * probe.effects;
  for (Index g = 0; g < a.order(); ++g) {
    left = std::max(left, inf_dist(p * act(a, g, probe.states), px));
    right = std::max(right, inf_dist(act(a, g, px), px));
    left = std::max(left, inf_dist(act_effect(a, g, fp), fp));
    right = std::max(right, inf_dist(pt * act_effect(a, g, probe.effects), fp));
  }
  idem = std::max(idem, inf_dist(p * px, px));
  idem = std::max(idem, inf_dist(pt * fp, fp));
  out.push_back({TwirlLaw::Invariance, scope, "G o V_g = G", left, left <= tol});
  out.push_back({TwirlLaw::Invariance, scope, "V_g o G = G", right, right <= tol});
  out.push_back({TwirlLaw::Idempotence, scope, "G o G = G", idem, idem <= tol});
}

}  // namespace

std::string_view to_string(TwirlLaw law) {
  switch (law) {
    case TwirlLaw::Invariance: return "invariance";
    case TwirlLaw::Idempotence: return "idempotence";
    case TwirlLaw::LocalGlobal: return "local/global";
  }
  return "unknown";
}

bool LawReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

double LawReport::max_residual(TwirlLaw law) const {
  double m = 0.0;
  for (const auto& e : entries)
    if (e.law == law) m = std::max(m, e.max_residual);
  return m;
}

LawReport verify_twirl_laws(const std::vector<std::shared_ptr<const GroupAction>>& parts, int trials,
                            std::uint64_t seed, double tol) {
  if (parts.empty()) fail(ErrorCode::EmptyInput, "twirl laws: no parts");
  if (trials < 1) fail(ErrorCode::BadParam, "twirl laws: trials must be at least 1");

  LawReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.tolerance = tol;
  SeededRng rng(seed);

  if (parts.size() == 1) {
    const auto p = twirl_projector(parts[0]);
    invariance_and_idempotence(*parts[0], p.matrix(), "S", make_probe(rng, p.dim(), trials), tol,
                               rep.entries);
    return rep;
  }

  std::shared_ptr<const GroupAction> s1 = parts[0];
  std::shared_ptr<const GroupAction> s2 =
      parts.size() == 2 ? parts[1]
                        : std::make_shared<const GroupAction>(collective_action(
                              std::vector<std::shared_ptr<const GroupAction>>(parts.begin() + 1,
                                                                              parts.end())));
  auto s = std::make_shared<const GroupAction>(collective_action({s1, s2}));
  const Matrix g1 = twirl_projector(s1).matrix();
  const Matrix g2 = twirl_projector(s2).matrix();
  const Matrix gs = twirl_projector(s).matrix();

  invariance_and_idempotence(*s1, g1, "S1", make_probe(rng, g1.rows(), trials), tol, rep.entries);
  invariance_and_idempotence(*s2, g2, "S2", make_probe(rng, g2.rows(), trials), tol, rep.entries);
  const Probe probe = make_probe(rng, gs.rows(), trials);
  invariance_and_idempotence(*s, gs, "S", probe, tol, rep.entries);

  const Index d1 = g1.rows();
  const Index d2 = g2.rows();
  const std::vector<Index> dims{d1, d2};
  // Structured application of local maps; transposed versions act on covectors.
  const Matrix g1t = g1.transpose(), g2t = g2.transpose(), gst = gs.transpose();
  auto local = [&](const Matrix* a, const Matrix* b, const Matrix& x) {
    const Matrix* f[2] = {a, b};
    Matrix out(x.rows(), x.cols());
    for (Index c = 0; c < x.cols(); ++c) out.col(c) = kron_apply(f, dims, x.col(c));
    return out;
  };

  struct Side {
    const Matrix *g1, *g2, *gs;
  };
  const Side sides[2] = {{&g1, &g2, &gs}, {&g1t, &g2t, &gst}};
  const char* names[6] = {"(1 x G2) o G = G1 x G2", "G o (1 x G2) = G1 x G2",
                          "(G1 x 1) o G = G1 x G2", "G o (G1 x 1) = G1 x G2",
                          "(G1 x G2) o G = G1 x G2", "G o (G1 x G2) = G1 x G2"};
  double res[6] = {0, 0, 0, 0, 0, 0};
  for (int side = 0; side < 2; ++side) {
    const Side& sd = sides[side];
    const Matrix& x = side == 0 ? probe.states : probe.effects;
    const Matrix gx = *sd.gs * x;
    const Matrix id_g2 = local(nullptr, sd.g2, x);
    const Matrix g1_id = local(sd.g1, nullptr, x);
    const Matrix target = local(sd.g1, sd.g2, x);
    // "A o B" applies B first.  For covectors the order reverses under
    // transposition, (A o B)^T = B^T A^T, so the two sides swap roles.
    const Matrix local_after[3] = {local(nullptr, sd.g2, gx), local(sd.g1, nullptr, gx), local(sd.g1, sd.g2, gx)};
    const Matrix global_after[3] = {*sd.gs * id_g2, *sd.gs * g1_id, *sd.gs * target};
    for (int k = 0; k < 3; ++k) {
      const Matrix& outer_local = side == 0 ? local_after[k] : global_after[k];
      const Matrix& outer_global = side == 0 ? global_after[k] : local_after[k];
      res[2 * k] = std::max(res[2 * k], inf_dist(outer_local, target));
      res[2 * k + 1] = std::max(res[2 * k + 1], inf_dist(outer_global, target));
    }
  }
  for (int k = 0; k < 6; ++k)
    rep.entries.push_back({TwirlLaw::LocalGlobal, "S", names[k], res[k], res[k] <= tol});
  return rep;
}

}  // namespace twirlab
