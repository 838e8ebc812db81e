#include "twirlab/io/pipeline.hpp"

#include "twirlab/io/canonical_json.hpp"

namespace twirlab {

const char* tool_version() { return TWIRLAB_VERSION_STRING; }

std::string AnalysisReport::digest() const { return sha256_hex(model_digest + "\n" + tool_version); }

namespace {

std::string rethrow_context(const std::string& stage, const Error& e) {
  return stage + ": " + e.what();
}

template <typename Fn>
auto with_context(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), rethrow_context(stage, e), e.path());
  }
}

}  // namespace

AnalysisReport run_analysis(const ModelSpec& m, unsigned stages) {
  AnalysisReport r;
  r.stages = stages;
  r.tool_version = tool_version();
  r.model_name = m.name;
  r.model_note = m.note;
  r.model_digest = model_digest(m);
  r.options = m.options;
  const double tol = m.options.tol;

  const ModelInstance inst = with_context("model", [&] { return instantiate(m); });
  const std::size_t n = inst.systems.size();

  // Analysis bipartition: the last composite and its parts.
  std::string id_a = inst.ids[0], id_b, id_ab;
  if (!m.composites.empty()) {
    const auto& c = m.composites.back();
    id_a = c.part_a;
    id_b = c.part_b;
    id_ab = c.id;
    r.bipartite = true;
  }
  r.trivial_action = true;
  for (const auto& a : inst.actions) r.trivial_action = r.trivial_action && a->is_trivial(tol);

  if (stages & kStageValidate) {
    with_context("validation", [&] {
      for (const auto& s : inst.systems) r.validation.push_back(validate_system(*s, tol));
      for (const auto& s : inst.systems)
        if (s->is_composite()) r.steering.push_back(check_steering_closure(*s, tol));
      return 0;
    });
  }

  if (stages & kStageLaws) {
    r.laws = with_context("twirl laws", [&] {
      std::vector<std::shared_ptr<const GroupAction>> parts;
      if (r.bipartite) parts = {inst.action(id_a), inst.action(id_b)};
      else parts = {inst.action(id_a)};
      return verify_twirl_laws(parts, m.options.trials, m.options.seed, tol);
    });
  }

  if (!(stages & kStageWorlds)) return r;

  TwirlOptions topt;
  topt.tol = tol;
  topt.rank_tol = m.options.rank_tol;
  std::vector<std::shared_ptr<const TwirledWorld>> worlds;
  with_context("twirled worlds", [&] {
    for (std::size_t k = 0; k < n; ++k) {
      auto w = std::make_shared<const TwirledWorld>(build_twirled_world(inst.systems[k], inst.actions[k], topt));
      WorldSummary ws;
      ws.id = inst.ids[k];
      ws.dim = w->system->dim();
      ws.k = w->k;
      ws.state_generators = w->system->state_count();
      ws.effect_generators = w->system->effect_count();
      for (Index kk : count_parameters(*w, {1e-10, 1e-9, 1e-8, 1e-7})) ws.rank_stable = ws.rank_stable && kk == w->k;
      r.worlds.push_back(ws);
      const std::string label = inst.ids[k] + " (twirled)";
      r.twirled_validation.push_back(validate_system(*w->system, tol));
      r.twirled_validation.back().subject = label;
      r.completeness.push_back(check_tomographic_completeness(*w, tol));
      r.completeness.back().subject = label;
      if (w->system->is_composite()) {
        r.steering.push_back(check_steering_closure(*w->system, tol));
        r.steering.back().subject = label;
      }
      worlds.push_back(std::move(w));
    }
    return 0;
  });
  auto world = [&](const std::string& id) { return worlds[static_cast<std::size_t>(inst.index_of(id))]; };

  r.k.a = id_a;
  r.k.k_a = world(id_a)->k;
  if (r.bipartite) {
    r.k.b = id_b;
    r.k.ab = id_ab;
    r.k.k_b = world(id_b)->k;
    r.k.k_ab = world(id_ab)->k;
    if (m.options.total_number_cutoff) {
      r.k.total_number_cutoff = m.options.total_number_cutoff;
      const auto& h = world(id_ab)->system->hilbert_dims();
      r.k.restricted_k_ab = restricted_parameter_count(
          *world(id_ab), total_number_kets(*m.options.total_number_cutoff, h.at(0), h.at(1)));
    }
    r.verdict = with_context("locality", [&] {
      return locality_verdict(*world(id_a), *world(id_b), *world(id_ab), tol);
    });
  }

  if (r.trivial_action) r.verdict_text = "locality holds trivially";
  else if (!r.bipartite) r.verdict_text = "not applicable";
  else if (r.verdict.criterion_fails_locality) r.verdict_text = "fails locality";
  else if (r.verdict.direct_fails_locality) r.verdict_text = "fails locality (direct check)";
  else r.verdict_text = "no failure detected";

  // Correlated versus product twirl of two copies of the first part.
  with_context("ubiquity", [&] {
    auto& u = r.ubiquity;
    u.system = id_a;
    const auto base_a = inst.system(id_a);
    const auto act_a = inst.action(id_a);
    const auto moved = first_moved_state(*base_a, *act_a, tol);
    if (!moved) {
      u.status = "TrivialAction";
      return 0;
    }
    u.status = "ok";
    u.seed_index = *moved;
    u.witness = ubiquity_witnesses(act_a, base_a->states().col(*moved), tol);
    const TwirledWorld& wa = *world(id_a);
    u.local_indistinguishability =
        verify_local_indistinguishability(u.witness.omega_corr, u.witness.omega_prod, wa, wa, tol);
    CompositeSpec twin;
    twin.id = id_a + id_a;
    twin.a = base_a;
    twin.b = base_a;
    twin.coarse_grain = m.composites.empty() || m.composites.back().coarse_grain;
    const SystemSpec aa = compose_systems(twin, tol);
    const TwirlProjector paa = twirl_projector(std::make_shared<const GroupAction>(collective_action({act_a, act_a})));
    u.separator = find_separating_invariant_effect(u.witness.omega_corr, u.witness.omega_prod, aa.effects(),
                                                   aa.unit(), paa, tol);
    u.transformation = transformation_pair_witness(wa, wa, u.witness.omega_corr, u.witness.omega_prod, tol);
    return 0;
  });
  return r;
}

}  // namespace twirlab
