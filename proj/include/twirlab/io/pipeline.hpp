#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twirlab/analysis/locality.hpp"
#include "twirlab/analysis/ubiquity.hpp"
#include "twirlab/io/model.hpp"
#include "twirlab/symmetry/laws.hpp"

namespace twirlab {

enum Stage : unsigned {
  kStageValidate = 1,
  kStageLaws = 2,
  kStageWorlds = 4,  // twirled worlds, counts, verdict, witnesses, completeness, steering
  kStageAll = 7,
};

struct WorldSummary {
  std::string id;
  Index dim = 0;
  Index k = 0;
  Index state_generators = 0;   // distinct twirled generators
  Index effect_generators = 0;
  bool rank_stable = true;      // K unchanged for rank_tol in [1e-10, 1e-7]
};

struct KTable {
  std::string a, b, ab;
  Index k_a = 0, k_b = 0, k_ab = 0;
  std::optional<int> total_number_cutoff;
  std::optional<Index> restricted_k_ab;
};

struct UbiquitySummary {
  std::string status;  // "ok", "TrivialAction"
  std::string system;
  Index seed_index = -1;
  UbiquityWitness witness;
  double local_indistinguishability = 0.0;
  SeparatingEffect separator;
  TransformationPairReport transformation;
};

struct AnalysisReport {
  unsigned stages = 0;
  std::string tool_version;
  std::string model_name;
  std::string model_note;
  std::string model_digest;
  ModelOptions options;

  std::vector<ValidationReport> validation;
  LawReport laws;

  std::vector<WorldSummary> worlds;
  std::vector<ValidationReport> twirled_validation;
  bool bipartite = false;
  bool trivial_action = false;
  KTable k;
  LocalityVerdict verdict;
  std::string verdict_text;
  UbiquitySummary ubiquity;
  std::vector<ValidationReport> completeness;
  std::vector<ValidationReport> steering;

  // sha256 over the model digest and tool version.
  std::string digest() const;
};

const char* tool_version();

AnalysisReport run_analysis(const ModelSpec& m, unsigned stages = kStageAll);

}  // namespace twirlab
