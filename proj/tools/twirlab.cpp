#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "twirlab/twirlab.h"

namespace {

// 0 completed, 1 a check failed (validate, lemmas), 2 input or processing error.
constexpr int kExitChecksFailed = 1;
constexpr int kExitError = 2;

struct ModelDeleter {
  void operator()(twirlab_model* m) const { twirlab_model_free(m); }
};
struct ReportDeleter {
  void operator()(twirlab_report* r) const { twirlab_report_free(r); }
};
using ModelPtr = std::unique_ptr<twirlab_model, ModelDeleter>;
using ReportPtr = std::unique_ptr<twirlab_report, ReportDeleter>;

bool use_color() {
  const char* off = std::getenv("TWIRLAB_NO_COLOR");
  if (off && *off) return false;
  return isatty(STDOUT_FILENO) != 0;
}

int report_error(twirlab_status s) {
  const char* msg = twirlab_last_error();
  if (msg && *msg) std::fprintf(stderr, "twirlab: error: %s\n", msg);
  else std::fprintf(stderr, "twirlab: error: %s\n", twirlab_status_name(s));
  return kExitError;
}

struct Options {
  std::string model;
  std::string report_path;
  std::string format;
  double tol = 0;
  double rank_tol = 0;
  std::uint64_t seed = 0;
  int trials = 0;
};

bool given(const CLI::App& cmd, const char* name) {
  const CLI::Option* opt = cmd.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

int load(const Options& o, const CLI::App& cmd, ModelPtr& out) {
  twirlab_model* raw = nullptr;
  twirlab_status s = twirlab_model_load(o.model.c_str(), &raw);
  if (s != TWIRLAB_OK) return report_error(s);
  out.reset(raw);
  if (given(cmd, "--tol") && (s = twirlab_model_set_tol(raw, o.tol)) != TWIRLAB_OK) return report_error(s);
  if (given(cmd, "--rank-tol") && (s = twirlab_model_set_rank_tol(raw, o.rank_tol)) != TWIRLAB_OK)
    return report_error(s);
  if (given(cmd, "--seed") && (s = twirlab_model_set_seed(raw, o.seed)) != TWIRLAB_OK) return report_error(s);
  if (given(cmd, "--trials") && (s = twirlab_model_set_trials(raw, o.trials)) != TWIRLAB_OK)
    return report_error(s);
  return 0;
}

int emit(const twirlab_report* r, twirlab_format f, bool color, std::string& out) {
  char* text = nullptr;
  const twirlab_status s = twirlab_report_emit(r, f, color ? 1 : 0, &text);
  if (s != TWIRLAB_OK) return report_error(s);
  out = text;
  twirlab_string_free(text);
  return 0;
}

int run(const Options& o, const CLI::App& cmd, unsigned stages, twirlab_format f, bool strict) {
  ModelPtr m;
  if (int rc = load(o, cmd, m)) return rc;
  twirlab_report* raw = nullptr;
  const twirlab_status s = twirlab_analyze(m.get(), stages, &raw);
  if (s != TWIRLAB_OK) return report_error(s);
  ReportPtr r(raw);

  std::string text;
  if (!o.report_path.empty()) {
    if (int rc = emit(r.get(), f, false, text)) return rc;
    std::ofstream file(o.report_path, std::ios::binary);
    if (!file || !(file << text)) {
      std::fprintf(stderr, "twirlab: error: Io: cannot write '%s'\n", o.report_path.c_str());
      return kExitError;
    }
    long ka = 0, kb = 0, kab = 0;
    int fails = 0;
    if (twirlab_report_counts(r.get(), &ka, &kb, &kab, &fails) == TWIRLAB_OK)
      std::printf("K_A=%ld K_B=%ld K_AB=%ld; report written to %s\n", ka, kb, kab, o.report_path.c_str());
  } else {
    if (int rc = emit(r.get(), f, f != TWIRLAB_FORMAT_JSON && use_color(), text)) return rc;
    std::fputs(text.c_str(), stdout);
  }
  if (strict && !twirlab_report_checks_pass(r.get())) return kExitChecksFailed;
  return 0;
}

void tolerance_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.tol, "tolerance for membership and identity checks (default from model, 1e-9)");
  cmd->add_option("--rank-tol", o.rank_tol, "relative singular-value threshold (default from model, 1e-8)");
  cmd->add_option("--seed", o.seed, "seed for random probes (default from model, 42)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twirlab: twirled generalized probabilistic theories and tomographic locality"};
  app.set_version_flag("--version", std::string(twirlab_version()));
  app.require_subcommand(1);

  Options o;
  const char* model_help = "model file or builtin:<recipe> (see `twirlab list`)";

  auto* validate = app.add_subcommand("validate", "check the system axioms and closure under steering");
  validate->add_option("model", o.model, model_help)->required();
  validate->add_option("--tol", o.tol, "tolerance (default from model, 1e-9)");

  auto* analyze = app.add_subcommand("analyze", "full pipeline: validation, twirl laws, counts, verdict, witnesses");
  analyze->add_option("model", o.model, model_help)->required();
  analyze->add_option("--report", o.report_path, "write the report to this file instead of stdout");
  analyze->add_option("--format", o.format, "json or text (default: json with --report, text otherwise)")
      ->check(CLI::IsMember({"json", "text"}));
  tolerance_flags(analyze, o);

  auto* lemmas = app.add_subcommand("lemmas", "check the twirling-map laws on random probes");
  lemmas->add_option("model", o.model, model_help)->required();
  lemmas->add_option("--trials", o.trials, "random vectors and covectors per identity (default 200)");
  lemmas->add_option("--tol", o.tol, "residual tolerance (default from model, 1e-9)");
  lemmas->add_option("--seed", o.seed, "seed (default from model, 42)");

  auto* witness = app.add_subcommand("witness", "print the locality witness and the correlated/product pair");
  witness->add_option("model", o.model, model_help)->required();
  tolerance_flags(witness, o);

  auto* list = app.add_subcommand("list", "list builtin worlds");

  auto* emit_cmd = app.add_subcommand("emit", "print a model in canonical form");
  emit_cmd->add_option("model", o.model, model_help)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  if (*list) {
    char* text = nullptr;
    const twirlab_status s = twirlab_list_builtins(&text);
    if (s != TWIRLAB_OK) return report_error(s);
    std::string all = text;
    twirlab_string_free(text);
    std::size_t pos = 0;
    while (pos < all.size()) {
      const std::size_t end = all.find('\n', pos);
      const std::string line = all.substr(pos, end - pos);
      pos = end == std::string::npos ? all.size() : end + 1;
      const std::size_t t1 = line.find('\t'), t2 = line.find('\t', t1 + 1);
      std::printf("builtin:%-22s %-22s %s\n", line.substr(0, t1).c_str(), line.substr(t1 + 1, t2 - t1 - 1).c_str(),
                  line.substr(t2 + 1).c_str());
    }
    return 0;
  }
  if (*emit_cmd) {
    ModelPtr m;
    if (int rc = load(o, *emit_cmd, m)) return rc;
    char* text = nullptr;
    const twirlab_status s = twirlab_model_emit(m.get(), &text);
    if (s != TWIRLAB_OK) return report_error(s);
    std::fputs(text, stdout);
    twirlab_string_free(text);
    return 0;
  }
  if (*validate) return run(o, *validate, TWIRLAB_STAGE_VALIDATE, TWIRLAB_FORMAT_TEXT, true);
  if (*lemmas) return run(o, *lemmas, TWIRLAB_STAGE_LAWS, TWIRLAB_FORMAT_TEXT, true);
  if (*witness) return run(o, *witness, TWIRLAB_STAGE_WORLDS, TWIRLAB_FORMAT_WITNESS, false);

  twirlab_format f = o.report_path.empty() ? TWIRLAB_FORMAT_TEXT : TWIRLAB_FORMAT_JSON;
  if (o.format == "json") f = TWIRLAB_FORMAT_JSON;
  if (o.format == "text") f = TWIRLAB_FORMAT_TEXT;
  return run(o, *analyze, TWIRLAB_STAGE_ALL, f, false);
}
