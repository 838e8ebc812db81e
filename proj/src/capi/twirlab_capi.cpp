#include "twirlab/twirlab.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "twirlab/catalog/catalog.hpp"
#include "twirlab/io/model.hpp"
#include "twirlab/io/pipeline.hpp"
#include "twirlab/io/report.hpp"

struct twirlab_model {
  twirlab::ModelSpec spec;
};

struct twirlab_report {
  twirlab::AnalysisReport report;
};

namespace {

thread_local std::string last_error;

twirlab_status note(twirlab_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <typename Fn>
twirlab_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return TWIRLAB_OK;
  } catch (const twirlab::Error& e) {
    std::string msg = std::string(twirlab::to_string(e.code())) + ": " + e.what();
    if (!e.path().empty() && msg.find(e.path()) == std::string::npos) msg += " (at " + e.path() + ")";
    return note(static_cast<twirlab_status>(static_cast<int>(e.code()) + 1), msg);
  } catch (const std::bad_alloc&) {
    return note(TWIRLAB_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return note(TWIRLAB_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

twirlab_status null_arg(const char* fn) { return note(TWIRLAB_E_NULL_ARGUMENT, std::string(fn) + ": null argument"); }

}  // namespace

extern "C" {

const char* twirlab_version(void) { return twirlab::tool_version(); }

const char* twirlab_last_error(void) { return last_error.c_str(); }

const char* twirlab_status_name(twirlab_status s) {
  switch (s) {
    case TWIRLAB_OK: return "Ok";
    case TWIRLAB_E_NULL_ARGUMENT: return "NullArgument";
    case TWIRLAB_E_INTERNAL: return "Internal";
    default: break;
  }
  const int c = static_cast<int>(s) - 1;
  if (c < 0 || c > static_cast<int>(twirlab::ErrorCode::Io)) return "Unknown";
  return twirlab::to_string(static_cast<twirlab::ErrorCode>(c)).data();
}

twirlab_status twirlab_model_load(const char* source, twirlab_model** out) {
  if (!source || !out) return null_arg("twirlab_model_load");
  *out = nullptr;
  return guarded([&] { *out = new twirlab_model{twirlab::load_model(source)}; });
}

twirlab_status twirlab_model_parse(const char* text, size_t len, twirlab_model** out) {
  if (!text || !out) return null_arg("twirlab_model_parse");
  *out = nullptr;
  return guarded([&] { *out = new twirlab_model{twirlab::parse_model(std::string_view(text, len))}; });
}

void twirlab_model_free(twirlab_model* m) { delete m; }

twirlab_status twirlab_model_set_tol(twirlab_model* m, double tol) {
  if (!m) return null_arg("twirlab_model_set_tol");
  if (!(tol > 0) || !std::isfinite(tol)) return note(TWIRLAB_E_BAD_PARAM, "BadParam: tol must be positive");
  m->spec.options.tol = tol;
  last_error.clear();
  return TWIRLAB_OK;
}

twirlab_status twirlab_model_set_rank_tol(twirlab_model* m, double rank_tol) {
  if (!m) return null_arg("twirlab_model_set_rank_tol");
  if (!(rank_tol > 0 && rank_tol < 1))
    return note(TWIRLAB_E_BAD_PARAM, "BadParam: rank_tol must lie in (0, 1)");
  m->spec.options.rank_tol = rank_tol;
  last_error.clear();
  return TWIRLAB_OK;
}

twirlab_status twirlab_model_set_seed(twirlab_model* m, uint64_t seed) {
  if (!m) return null_arg("twirlab_model_set_seed");
  m->spec.options.seed = seed;
  last_error.clear();
  return TWIRLAB_OK;
}

twirlab_status twirlab_model_set_trials(twirlab_model* m, int trials) {
  if (!m) return null_arg("twirlab_model_set_trials");
  if (trials < 1) return note(TWIRLAB_E_BAD_PARAM, "BadParam: trials must be at least 1");
  m->spec.options.trials = trials;
  last_error.clear();
  return TWIRLAB_OK;
}

twirlab_status twirlab_model_emit(const twirlab_model* m, char** out) {
  if (!m || !out) return null_arg("twirlab_model_emit");
  *out = nullptr;
  return guarded([&] { *out = dup(twirlab::emit_model(m->spec)); });
}

twirlab_status twirlab_analyze(const twirlab_model* m, unsigned stages, twirlab_report** out) {
  if (!m || !out) return null_arg("twirlab_analyze");
  *out = nullptr;
  if (stages == 0 || (stages & ~7u)) return note(TWIRLAB_E_BAD_PARAM, "BadParam: unknown stage mask");
  return guarded([&] { *out = new twirlab_report{twirlab::run_analysis(m->spec, stages)}; });
}

void twirlab_report_free(twirlab_report* r) { delete r; }

twirlab_status twirlab_report_emit(const twirlab_report* r, twirlab_format format, int color, char** out) {
  if (!r || !out) return null_arg("twirlab_report_emit");
  *out = nullptr;
  return guarded([&] {
    switch (format) {
      case TWIRLAB_FORMAT_JSON: *out = dup(twirlab::emit_report(r->report, twirlab::ReportFormat::Json)); break;
      case TWIRLAB_FORMAT_TEXT:
        *out = dup(twirlab::emit_report(r->report, twirlab::ReportFormat::Text, color != 0));
        break;
      case TWIRLAB_FORMAT_WITNESS: *out = dup(twirlab::emit_witness(r->report, color != 0)); break;
      default: twirlab::fail(twirlab::ErrorCode::BadParam, "unknown report format");
    }
  });
}

int twirlab_report_checks_pass(const twirlab_report* r) { return r && twirlab::checks_pass(r->report) ? 1 : 0; }

twirlab_status twirlab_report_counts(const twirlab_report* r, long* k_a, long* k_b, long* k_ab,
                                     int* fails_locality) {
  if (!r) return null_arg("twirlab_report_counts");
  const auto& rep = r->report;
  if (!(rep.stages & TWIRLAB_STAGE_WORLDS))
    return note(TWIRLAB_E_PRECONDITION, "PreconditionViolation: report has no twirled-world stage");
  if (k_a) *k_a = static_cast<long>(rep.k.k_a);
  if (k_b) *k_b = rep.bipartite ? static_cast<long>(rep.k.k_b) : 0;
  if (k_ab) *k_ab = rep.bipartite ? static_cast<long>(rep.k.k_ab) : 0;
  if (fails_locality) *fails_locality = rep.bipartite && rep.verdict.criterion_fails_locality ? 1 : 0;
  last_error.clear();
  return TWIRLAB_OK;
}

twirlab_status twirlab_list_builtins(char** out) {
  if (!out) return null_arg("twirlab_list_builtins");
  *out = nullptr;
  return guarded([&] {
    std::string s;
    for (const auto& b : twirlab::list_builtins()) s += b.name + "\t" + b.params + "\t" + b.summary + "\n";
    *out = dup(s);
  });
}

void twirlab_string_free(char* s) { std::free(s); }

}  // extern "C"
