#include "twirlab/io/report.hpp"

#include <cmath>
#include <cstdio>

namespace twirlab {

namespace {

Json vec(const Eigen::Ref<const Vector>& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i] == 0.0 ? 0.0 : v[i]);
  return a;
}

Json checks_json(const std::vector<ValidationReport>& reps) {
  Json out = Json::array();
  for (const auto& rep : reps) {
    Json checks = Json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"worst_residual", c.worst_residual}, {"detail", c.detail}});
    out.push_back({{"subject", rep.subject}, {"all_pass", rep.all_pass()}, {"checks", checks}});
  }
  return out;
}

Json separator_json(const SeparatingEffect& s) {
  return {{"effect", vec(s.effect.transpose())},
          {"base_effect_index", s.base_index},
          {"complemented", s.complemented},
          {"gap", s.gap}};
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Painter {
  bool color;
  std::string mark(bool pass) const {
    if (!color) return pass ? "pass" : "FAIL";
    return pass ? "\033[32mpass\033[0m" : "\033[31mFAIL\033[0m";
  }
};

void text_checks(std::string& out, const std::vector<ValidationReport>& reps, const Painter& p) {
  for (const auto& rep : reps) {
    out += "  " + rep.subject + ": " + p.mark(rep.all_pass()) + "\n";
    for (const auto& c : rep.checks) {
      if (c.pass) continue;
      out += "    " + c.name + " " + p.mark(false) + " (residual " + num(c.worst_residual) + ")";
      if (!c.detail.empty()) out += " " + c.detail;
      out += "\n";
    }
  }
}

}  // namespace

Json report_json(const AnalysisReport& r) {
  Json j;
  j["tool"] = {{"name", "twirlab"}, {"version", r.tool_version}};
  j["model"] = {{"name", r.model_name}, {"digest", r.model_digest}};
  if (!r.model_note.empty()) j["model"]["note"] = r.model_note;
  j["options"] = {{"tol", r.options.tol},
                  {"rank_tol", r.options.rank_tol},
                  {"seed", r.options.seed},
                  {"trials", r.options.trials}};
  j["digest"] = r.digest();

  if (r.stages & kStageValidate) j["validation"] = checks_json(r.validation);

  if (r.stages & kStageLaws) {
    Json entries = Json::array();
    for (const auto& e : r.laws.entries)
      entries.push_back({{"law", std::string(to_string(e.law))},
                         {"scope", e.scope},
                         {"identity", e.identity},
                         {"max_residual", e.max_residual},
                         {"pass", e.pass}});
    j["laws"] = {{"trials", r.laws.trials}, {"seed", r.laws.seed}, {"all_pass", r.laws.all_pass()}, {"entries", entries}};
  }

  if ((r.stages & kStageValidate) || (r.stages & kStageWorlds)) j["steering"] = checks_json(r.steering);

  if (r.stages & kStageWorlds) {
    Json worlds = Json::array();
    for (const auto& w : r.worlds)
      worlds.push_back({{"id", w.id},
                        {"dim", w.dim},
                        {"K", w.k},
                        {"state_generators", w.state_generators},
                        {"effect_generators", w.effect_generators},
                        {"rank_stable", w.rank_stable}});
    j["worlds"] = worlds;
    j["twirled_validation"] = checks_json(r.twirled_validation);
    j["completeness"] = checks_json(r.completeness);

    Json k = {{"A", r.k.a}, {"K_A", r.k.k_a}};
    if (r.bipartite) {
      k["B"] = r.k.b;
      k["AB"] = r.k.ab;
      k["K_B"] = r.k.k_b;
      k["K_AB"] = r.k.k_ab;
      k["K_A_times_K_B"] = r.k.k_a * r.k.k_b;
      if (r.k.restricted_k_ab) {
        k["total_number_cutoff"] = *r.k.total_number_cutoff;
        k["K_AB_total_number_restricted"] = *r.k.restricted_k_ab;
      }
    }
    j["k_table"] = k;

    Json v = {{"status", r.verdict_text}, {"bipartite", r.bipartite}, {"trivial_action", r.trivial_action}};
    if (r.bipartite) {
      v["criterion_fails_locality"] = r.verdict.criterion_fails_locality;
      v["direct_fails_locality"] = r.verdict.direct_fails_locality;
      v["product_pairing_rank"] = r.verdict.product_pairing_rank;
      if (r.verdict.witness) {
        const auto& w = *r.verdict.witness;
        v["witness"] = {{"omega1", vec(w.omega1)},
                        {"omega2", vec(w.omega2)},
                        {"product_discrepancy", w.product_discrepancy},
                        {"separator", separator_json(w.separator)}};
      }
    }
    j["verdict"] = v;

    const auto& u = r.ubiquity;
    Json uj = {{"status", u.status}, {"system", u.system}};
    if (u.status == "ok") {
      uj["seed_index"] = u.seed_index;
      uj["seed"] = vec(u.witness.seed);
      uj["moving_element"] = u.witness.moving_label;
      uj["omega_prod"] = vec(u.witness.omega_prod);
      uj["omega_corr"] = vec(u.witness.omega_corr);
      uj["separation"] = u.witness.separation;
      uj["local_indistinguishability"] = u.local_indistinguishability;
      uj["separator"] = separator_json(u.separator);
      Json t = {{"local_residual", u.transformation.local_residual},
                {"global_gap", u.transformation.global_gap},
                {"pass", u.transformation.pass}};
      if (u.transformation.product_residual) t["product_residual"] = *u.transformation.product_residual;
      uj["transformation_pair"] = t;
    }
    j["ubiquity"] = uj;
  }
  return j;
}

std::string emit_report(const AnalysisReport& r, ReportFormat format, bool color) {
  if (format == ReportFormat::Json) return canonical_json(report_json(r), true);

  const Painter p{color};
  std::string out;
  out += "twirlab " + r.tool_version + "  model " + r.model_name + "\n";
  if (!r.model_note.empty()) out += "note: " + r.model_note + "\n";
  out += "options: tol " + num(r.options.tol) + ", rank_tol " + num(r.options.rank_tol) + ", seed " +
         std::to_string(r.options.seed) + ", trials " + std::to_string(r.options.trials) + "\n";

  if (r.stages & kStageValidate) {
    out += "\nsystem axioms (normalization, [0,1] range, complements, zero effect)\n";
    text_checks(out, r.validation, p);
  }
  if (r.stages & kStageLaws) {
    out += "\ntwirling laws (" + std::to_string(r.laws.trials) + " random vectors and covectors, seed " +
           std::to_string(r.laws.seed) + ")\n";
    const char* heads[3] = {"invariance under composition with any V_g", "idempotence",
                            "global twirl then local twirl equals local twirls"};
    for (TwirlLaw law : {TwirlLaw::Invariance, TwirlLaw::Idempotence, TwirlLaw::LocalGlobal}) {
      bool any = false, pass = true;
      for (const auto& e : r.laws.entries)
        if (e.law == law) {
          any = true;
          pass = pass && e.pass;
        }
      if (!any) continue;
      out += "  " + std::string(heads[static_cast<int>(law)]) + ": " + p.mark(pass) + " (max residual " +
             num(r.laws.max_residual(law)) + ")\n";
    }
  }
  if (r.stages & kStageWorlds) {
    out += "\ntwirled worlds\n";
    for (const auto& w : r.worlds)
      out += "  " + w.id + ": dim " + std::to_string(w.dim) + ", K " + std::to_string(w.k) +
             (w.rank_stable ? "" : " (rank unstable across thresholds)") + "\n";
    out += "\nparameter counts\n";
    out += "K_A=" + std::to_string(r.k.k_a) + "\n";
    if (r.bipartite) {
      out += "K_B=" + std::to_string(r.k.k_b) + "\n";
      out += "K_AB=" + std::to_string(r.k.k_ab) + "\n";
      if (r.k.restricted_k_ab)
        out += "K_AB on total number <= " + std::to_string(*r.k.total_number_cutoff) + ": " +
               std::to_string(*r.k.restricted_k_ab) + "\n";
    }
    out += "\nverdict: " + r.verdict_text + "\n";
    if (r.bipartite) {
      out += "  K_AB > K_A K_B: " + std::string(r.verdict.criterion_fails_locality ? "yes" : "no") + " (" +
             std::to_string(r.k.k_ab) + " vs " + std::to_string(r.k.k_a * r.k.k_b) + ")\n";
      out += "  invariant product effects see " + std::to_string(r.verdict.product_pairing_rank) + " of " +
             std::to_string(r.k.k_ab) + " state parameters\n";
      if (r.verdict.witness) {
        const auto& w = *r.verdict.witness;
        out += "  witness pair: product-effect discrepancy " + num(w.product_discrepancy) +
               ", separating invariant effect gap " + num(w.separator.gap) + "\n";
      }
    }
    out += "\ncorrelated vs product twirl of two copies of " + r.ubiquity.system + "\n";
    if (r.ubiquity.status != "ok") {
      out += "  " + r.ubiquity.status + ": no group element moves any state\n";
    } else {
      const auto& u = r.ubiquity;
      out += "  seed state " + std::to_string(u.seed_index) + ", moved by '" + u.witness.moving_label + "'\n";
      out += "  |omega_corr - omega_prod| " + num(u.witness.separation) + "\n";
      out += "  invariant product-effect discrepancy " + num(u.local_indistinguishability) + "\n";
      out += "  separating invariant effect gap " + num(u.separator.gap) + "\n";
      out += "  local twirl acts as identity on invariant states (residual " + num(u.transformation.local_residual) +
             ") but moves omega_corr by " + num(u.transformation.global_gap) + ": " + p.mark(u.transformation.pass) +
             "\n";
    }
    out += "\ntwirled-world axioms\n";
    text_checks(out, r.twirled_validation, p);
    out += "\ntomographic completeness of twirled worlds\n";
    text_checks(out, r.completeness, p);
  }
  if ((r.stages & kStageValidate) || (r.stages & kStageWorlds)) {
    if (!r.steering.empty()) {
      out += "\nclosure under steering\n";
      text_checks(out, r.steering, p);
    }
  }
  out += "\nmodel digest " + r.model_digest + "\nreport digest " + r.digest() + "\n";
  return out;
}

namespace {

void vec_text(std::string& out, const char* name, const Vector& v) {
  out += std::string("  ") + name + " = (";
  for (Index i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", std::abs(v[i]) < 1e-15 ? 0.0 : v[i]);
    out += (i ? ", " : "") + std::string(buf);
  }
  out += ")\n";
}

bool all_pass(const std::vector<ValidationReport>& reps) {
  for (const auto& rep : reps)
    if (!rep.all_pass()) return false;
  return true;
}

}  // namespace

std::string emit_witness(const AnalysisReport& r, bool color) {
  const Painter p{color};
  std::string out;
  out += "model " + r.model_name + "\n";
  if (!(r.stages & kStageWorlds)) return out + "no twirled-world analysis\n";
  out += "verdict: " + r.verdict_text + "\n";
  if (r.bipartite && r.verdict.witness) {
    const auto& w = *r.verdict.witness;
    out += "\nlocality witness on " + r.k.ab + "\n";
    vec_text(out, "omega1", w.omega1);
    vec_text(out, "omega2", w.omega2);
    out += "  invariant product-effect discrepancy " + num(w.product_discrepancy) + "\n";
    vec_text(out, "separating effect", w.separator.effect.transpose());
    out += "  gap " + num(w.separator.gap) + (w.separator.complemented ? " (complement of" : " (base effect") +
           " " + std::to_string(w.separator.base_index) + ")\n";
  }
  const auto& u = r.ubiquity;
  out += "\ncorrelated vs product twirl on two copies of " + u.system + "\n";
  if (u.status != "ok") return out + "  " + u.status + "\n";
  vec_text(out, "seed", u.witness.seed);
  out += "  moving element '" + u.witness.moving_label + "'\n";
  vec_text(out, "omega_prod", u.witness.omega_prod);
  vec_text(out, "omega_corr", u.witness.omega_corr);
  out += "  separation " + num(u.witness.separation) + ", product-effect discrepancy " +
         num(u.local_indistinguishability) + ", separating gap " + num(u.separator.gap) + "\n";
  out += "  transformation pair: " + p.mark(u.transformation.pass) + "\n";
  return out;
}

bool checks_pass(const AnalysisReport& r) {
  if (!all_pass(r.validation) || !all_pass(r.steering)) return false;
  if ((r.stages & kStageLaws) && !r.laws.all_pass()) return false;
  if (!all_pass(r.twirled_validation) || !all_pass(r.completeness)) return false;
  return true;
}

}  // namespace twirlab
