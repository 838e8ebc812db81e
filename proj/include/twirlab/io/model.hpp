#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twirlab/core/system.hpp"
#include "twirlab/error.hpp"
#include "twirlab/symmetry/group_action.hpp"

namespace twirlab {

inline constexpr const char* kModelSchema = "twirlab/1";

struct SystemEntry {
  std::string id;
  StateSpaceKind kind = StateSpaceKind::Polytope;
  std::vector<int> hilbert_dims;
  Matrix states;   // dim x n
  Matrix effects;  // n x dim
  RowVector unit;
  Index dim() const { return unit.size(); }
};

struct CompositeEntry {
  std::string id;
  std::string part_a;
  std::string part_b;
  std::vector<Vector> extra_states;
  std::vector<RowVector> extra_effects;
  bool coarse_grain = true;
};

struct GroupElementEntry {
  std::string label;
  std::map<std::string, Matrix> matrices;  // base system id -> V_g
};

struct GroupEntry {
  enum class Kind { Finite, Builtin };
  Kind kind = Kind::Finite;
  std::vector<GroupElementEntry> elements;
  std::string builtin;                // su2_design | u1_cyclic
  std::map<std::string, int> params;  // u1_cyclic: order
};

struct ModelOptions {
  double tol = kDefaultTolerance;
  double rank_tol = kDefaultRankTolerance;
  std::uint64_t seed = 42;
  int trials = 200;
  // Two-mode bosonic models: also count on the total-number <= N subspace.
  std::optional<int> total_number_cutoff;
};

struct ModelSpec {
  std::string name;
  std::string note;
  std::vector<SystemEntry> systems;
  std::vector<CompositeEntry> composites;
  GroupEntry group;
  ModelOptions options;
};

struct ModelIssue {
  ErrorCode code;
  std::string path;
  std::string reason;
};

// Carries every problem found in a document; code()/path() are the first.
class ModelError : public Error {
 public:
  explicit ModelError(std::vector<ModelIssue> issues);
  const std::vector<ModelIssue>& issues() const { return issues_; }

 private:
  std::vector<ModelIssue> issues_;
};

// Parses a model document; throws ModelError (SchemaError, DimensionError,
// UnknownBuiltin).
ModelSpec parse_model(std::string_view text);

// `builtin:<recipe>` or a path to a model document.
ModelSpec load_model(const std::string& source);

// Canonical (sorted, fixed-format) document; parse_model(emit_model(m)) == m.
std::string emit_model(const ModelSpec& m);

// sha256 of the compact canonical form, options included.
std::string model_digest(const ModelSpec& m);

// Systems and actions ready for analysis.
struct ModelInstance {
  std::vector<std::shared_ptr<const SystemSpec>> systems;  // bases then composites, in file order
  std::vector<std::shared_ptr<const GroupAction>> actions;  // parallel to systems
  std::vector<std::string> ids;

  Index index_of(const std::string& id) const;
  std::shared_ptr<const SystemSpec> system(const std::string& id) const;
  std::shared_ptr<const GroupAction> action(const std::string& id) const;
};

ModelInstance instantiate(const ModelSpec& m);

}  // namespace twirlab
