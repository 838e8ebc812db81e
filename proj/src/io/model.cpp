#include "twirlab/io/model.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "twirlab/catalog/catalog.hpp"
#include "twirlab/io/canonical_json.hpp"
#include "twirlab/symmetry/compact.hpp"

namespace twirlab {

namespace {

std::string join_issues(const std::vector<ModelIssue>& issues) {
  std::string msg;
  for (const auto& i : issues) {
    if (!msg.empty()) msg += '\n';
    msg += std::string(to_string(i.code)) + " at " + (i.path.empty() ? "<root>" : i.path) + ": " + i.reason;
  }
  return msg;
}

// Thrown inside the parser to abandon the current subtree; the issue is
// already recorded.
struct Abandon {};

class Parser {
 public:
  std::vector<ModelIssue> issues;

  [[noreturn]] void error(ErrorCode code, const std::string& path, const std::string& reason) {
    issues.push_back({code, path, reason});
    throw Abandon{};
  }
  void note(ErrorCode code, const std::string& path, const std::string& reason) {
    issues.push_back({code, path, reason});
  }

  // Runs fn; an abandoned subtree only stops fn.
  template <typename Fn>
  void guarded(Fn&& fn) {
    try {
      fn();
    } catch (const Abandon&) {
    }
  }

  void known_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : j.items()) {
      bool ok = false;
      for (const char* key : keys) ok = ok || k == key;
      if (!ok) note(ErrorCode::SchemaError, join(path, k), "unknown field");
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
  static std::string at(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
  }

  const Json& field(const Json& j, const std::string& path, const char* key) {
    if (!j.is_object()) error(ErrorCode::SchemaError, path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) error(ErrorCode::SchemaError, join(path, key), "missing required field");
    return *it;
  }

  std::string string(const Json& j, const std::string& path) {
    if (!j.is_string()) error(ErrorCode::SchemaError, path, "expected a string");
    return j.get<std::string>();
  }

  double number(const Json& j, const std::string& path) {
    double v = 0.0;
    if (j.is_number()) {
      v = j.get<double>();
    } else if (j.is_string()) {
      const auto& s = j.get_ref<const std::string&>();
      const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || end != s.data() + s.size())
        error(ErrorCode::SchemaError, path, "'" + s + "' is not a decimal number");
    } else {
      error(ErrorCode::SchemaError, path, "expected a number or decimal string");
    }
    if (!std::isfinite(v)) error(ErrorCode::SchemaError, path, "number is not finite");
    return v;
  }

  long long integer(const Json& j, const std::string& path) {
    if (j.is_number_integer() || j.is_number_unsigned()) return j.get<long long>();
    if (j.is_number_float()) {
      const double d = j.get<double>();
      if (d == std::trunc(d) && std::abs(d) < 9e15) return static_cast<long long>(d);
    }
    error(ErrorCode::SchemaError, path, "expected an integer");
  }

  bool boolean(const Json& j, const std::string& path) {
    if (!j.is_boolean()) error(ErrorCode::SchemaError, path, "expected true or false");
    return j.get<bool>();
  }

  const Json& array(const Json& j, const std::string& path) {
    if (!j.is_array()) error(ErrorCode::SchemaError, path, "expected an array");
    return j;
  }

  Vector vector(const Json& j, const std::string& path, Index dim) {
    array(j, path);
    if (dim >= 0 && static_cast<Index>(j.size()) != dim)
      error(ErrorCode::DimensionError, path,
            "expected " + std::to_string(dim) + " components, got " + std::to_string(j.size()));
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = number(j[i], at(path, i));
    return v;
  }

  Matrix matrix(const Json& j, const std::string& path, Index rows, Index cols) {
    array(j, path);
    if (static_cast<Index>(j.size()) != rows || (rows > 0 && j[0].is_array() &&
                                                 static_cast<Index>(j[0].size()) != cols)) {
      const std::size_t c = j.empty() || !j[0].is_array() ? 0 : j[0].size();
      error(ErrorCode::DimensionError, path,
            "expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix, got " +
                std::to_string(j.size()) + "x" + std::to_string(c));
    }
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) m.row(r) = vector(j[r], at(path, r), cols).transpose();
    return m;
  }
};

std::size_t product_dim(const std::vector<int>& dims) {
  std::size_t d = 1;
  for (int h : dims) d *= static_cast<std::size_t>(h) * h;
  return d;
}

SystemEntry parse_system(Parser& p, const Json& j, const std::string& path) {
  if (!j.is_object()) p.error(ErrorCode::SchemaError, path, "expected an object");
  p.known_keys(j, path, {"id", "kind", "dim", "hilbert_dims", "states", "effects", "unit"});
  SystemEntry s;
  s.id = p.string(p.field(j, path, "id"), Parser::join(path, "id"));
  if (s.id.empty()) p.error(ErrorCode::SchemaError, Parser::join(path, "id"), "empty id");
  if (j.contains("kind")) {
    const std::string kind = p.string(j["kind"], Parser::join(path, "kind"));
    if (kind == "quantum") s.kind = StateSpaceKind::Quantum;
    else if (kind != "polytope")
      p.error(ErrorCode::SchemaError, Parser::join(path, "kind"), "expected \"polytope\" or \"quantum\"");
  }
  const long long dim = p.integer(p.field(j, path, "dim"), Parser::join(path, "dim"));
  if (dim < 1 || dim > 4096) p.error(ErrorCode::DimensionError, Parser::join(path, "dim"), "dimension out of range");
  if (s.kind == StateSpaceKind::Quantum) {
    const std::string hp = Parser::join(path, "hilbert_dims");
    const Json& h = p.array(p.field(j, path, "hilbert_dims"), hp);
    if (h.empty()) p.error(ErrorCode::SchemaError, hp, "needs at least one factor");
    for (std::size_t i = 0; i < h.size(); ++i) {
      const long long d = p.integer(h[i], Parser::at(hp, i));
      if (d < 1 || d > 64) p.error(ErrorCode::DimensionError, Parser::at(hp, i), "Hilbert dimension out of range");
      s.hilbert_dims.push_back(static_cast<int>(d));
    }
    if (product_dim(s.hilbert_dims) != static_cast<std::size_t>(dim))
      p.error(ErrorCode::DimensionError, hp, "squared Hilbert dimensions do not multiply to dim " +
                                                 std::to_string(dim));
  } else if (j.contains("hilbert_dims")) {
    p.note(ErrorCode::SchemaError, Parser::join(path, "hilbert_dims"), "only quantum systems carry Hilbert dimensions");
  }
  s.unit = p.vector(p.field(j, path, "unit"), Parser::join(path, "unit"), dim).transpose();

  const std::string sp = Parser::join(path, "states");
  const Json& st = p.array(p.field(j, path, "states"), sp);
  if (st.empty()) p.error(ErrorCode::SchemaError, sp, "no state generators");
  s.states.resize(dim, static_cast<Index>(st.size()));
  for (std::size_t k = 0; k < st.size(); ++k) s.states.col(static_cast<Index>(k)) = p.vector(st[k], Parser::at(sp, k), dim);

  const std::string ep = Parser::join(path, "effects");
  const Json& ef = p.array(p.field(j, path, "effects"), ep);
  if (ef.empty()) p.error(ErrorCode::SchemaError, ep, "no effect generators");
  s.effects.resize(static_cast<Index>(ef.size()), dim);
  for (std::size_t k = 0; k < ef.size(); ++k)
    s.effects.row(static_cast<Index>(k)) = p.vector(ef[k], Parser::at(ep, k), dim).transpose();
  return s;
}

}  // namespace

ModelError::ModelError(std::vector<ModelIssue> issues)
    : Error(issues.empty() ? ErrorCode::SchemaError : issues.front().code, join_issues(issues),
            issues.empty() ? std::string{} : issues.front().path),
      issues_(std::move(issues)) {}

ModelSpec parse_model(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ModelError({{ErrorCode::SchemaError, "", std::string("malformed JSON: ") + e.what()}});
  }
  Parser p;
  ModelSpec m;
  std::map<std::string, Index> dims;  // every system id -> dimension
  std::map<std::string, std::vector<int>> hilbert;
  std::set<std::string> base_ids;

  p.guarded([&] {
    if (!doc.is_object()) p.error(ErrorCode::SchemaError, "", "expected an object");
    p.known_keys(doc, "", {"schema", "name", "note", "systems", "composites", "group", "options"});
    const std::string schema = p.string(p.field(doc, "", "schema"), "schema");
    if (schema != kModelSchema)
      p.error(ErrorCode::SchemaError, "schema", "unsupported schema '" + schema + "', expected " + kModelSchema);
  });
  if (!doc.is_object()) throw ModelError(std::move(p.issues));

  p.guarded([&] { m.name = p.string(p.field(doc, "", "name"), "name"); });
  if (doc.contains("note")) p.guarded([&] { m.note = p.string(doc["note"], "note"); });

  p.guarded([&] {
    const Json& sys = p.array(p.field(doc, "", "systems"), "systems");
    if (sys.empty()) p.error(ErrorCode::SchemaError, "systems", "no systems");
    for (std::size_t i = 0; i < sys.size(); ++i) {
      p.guarded([&] {
        const std::string path = Parser::at("systems", i);
        SystemEntry s = parse_system(p, sys[i], path);
        if (dims.count(s.id)) p.error(ErrorCode::SchemaError, path + ".id", "duplicate id '" + s.id + "'");
        dims[s.id] = s.dim();
        hilbert[s.id] = s.hilbert_dims;
        base_ids.insert(s.id);
        m.systems.push_back(std::move(s));
      });
    }
  });

  if (doc.contains("composites")) {
    p.guarded([&] {
      const Json& comps = p.array(doc["composites"], "composites");
      for (std::size_t i = 0; i < comps.size(); ++i) {
        p.guarded([&] {
          const std::string path = Parser::at("composites", i);
          const Json& j = comps[i];
          if (!j.is_object()) p.error(ErrorCode::SchemaError, path, "expected an object");
          p.known_keys(j, path, {"id", "parts", "extra_states", "extra_effects", "coarse_grain"});
          CompositeEntry c;
          c.id = p.string(p.field(j, path, "id"), path + ".id");
          if (c.id.empty()) p.error(ErrorCode::SchemaError, path + ".id", "empty id");
          if (dims.count(c.id)) p.error(ErrorCode::SchemaError, path + ".id", "duplicate id '" + c.id + "'");
          const Json& parts = p.array(p.field(j, path, "parts"), path + ".parts");
          if (parts.size() != 2) p.error(ErrorCode::SchemaError, path + ".parts", "expected two part ids");
          c.part_a = p.string(parts[0], path + ".parts[0]");
          c.part_b = p.string(parts[1], path + ".parts[1]");
          for (const auto& [k, id] : {std::pair{0, c.part_a}, std::pair{1, c.part_b}})
            if (!dims.count(id))
              p.error(ErrorCode::SchemaError, Parser::at(path + ".parts", static_cast<std::size_t>(k)),
                      "unknown system '" + id + "'");
          const Index dim = dims[c.part_a] * dims[c.part_b];
          if (j.contains("extra_states")) {
            const Json& xs = p.array(j["extra_states"], path + ".extra_states");
            for (std::size_t k = 0; k < xs.size(); ++k)
              c.extra_states.push_back(p.vector(xs[k], Parser::at(path + ".extra_states", k), dim));
          }
          if (j.contains("extra_effects")) {
            const Json& xs = p.array(j["extra_effects"], path + ".extra_effects");
            for (std::size_t k = 0; k < xs.size(); ++k)
              c.extra_effects.push_back(p.vector(xs[k], Parser::at(path + ".extra_effects", k), dim).transpose());
          }
          if (j.contains("coarse_grain")) c.coarse_grain = p.boolean(j["coarse_grain"], path + ".coarse_grain");
          dims[c.id] = dim;
          auto h = hilbert[c.part_a];
          const auto& hb = hilbert[c.part_b];
          h.insert(h.end(), hb.begin(), hb.end());
          hilbert[c.id] = h;
          m.composites.push_back(std::move(c));
        });
      }
    });
  }

  p.guarded([&] {
    const Json& g = p.field(doc, "", "group");
    if (!g.is_object()) p.error(ErrorCode::SchemaError, "group", "expected an object");
    const std::string kind = p.string(p.field(g, "group", "kind"), "group.kind");
    if (kind == "finite") {
      p.known_keys(g, "group", {"kind", "elements"});
      m.group.kind = GroupEntry::Kind::Finite;
      const Json& els = p.array(p.field(g, "group", "elements"), "group.elements");
      if (els.empty()) p.error(ErrorCode::SchemaError, "group.elements", "no group elements");
      std::set<std::string> labels;
      for (std::size_t i = 0; i < els.size(); ++i) {
        p.guarded([&] {
          const std::string path = Parser::at("group.elements", i);
          const Json& e = els[i];
          if (!e.is_object()) p.error(ErrorCode::SchemaError, path, "expected an object");
          p.known_keys(e, path, {"label", "matrices"});
          GroupElementEntry el;
          el.label = p.string(p.field(e, path, "label"), path + ".label");
          if (!labels.insert(el.label).second)
            p.note(ErrorCode::SchemaError, path + ".label", "duplicate label '" + el.label + "'");
          const Json& mats = p.field(e, path, "matrices");
          if (!mats.is_object()) p.error(ErrorCode::SchemaError, path + ".matrices", "expected an object");
          for (const auto& [id, mj] : mats.items()) {
            p.guarded([&] {
              const std::string mp = path + ".matrices." + id;
              if (!base_ids.count(id)) {
                p.error(ErrorCode::SchemaError, mp,
                        dims.count(id) ? "composites receive the collective action" : "unknown system '" + id + "'");
              }
              el.matrices[id] = p.matrix(mj, mp, dims[id], dims[id]);
            });
          }
          for (const auto& id : base_ids)
            if (!mats.contains(id)) p.note(ErrorCode::SchemaError, path + ".matrices." + id, "missing matrix");
          m.group.elements.push_back(std::move(el));
        });
      }
    } else if (kind == "builtin") {
      p.known_keys(g, "group", {"kind", "name", "params"});
      m.group.kind = GroupEntry::Kind::Builtin;
      m.group.builtin = p.string(p.field(g, "group", "name"), "group.name");
      if (g.contains("params")) {
        const Json& params = g["params"];
        if (!params.is_object()) p.error(ErrorCode::SchemaError, "group.params", "expected an object");
        for (const auto& [k, v] : params.items())
          m.group.params[k] = static_cast<int>(p.integer(v, "group.params." + k));
      }
      if (m.group.builtin == "su2_design") {
        for (const auto& [k, v] : m.group.params)
          p.note(ErrorCode::SchemaError, "group.params." + k, "su2_design takes no parameters");
        for (const auto& s : m.systems)
          if (s.kind != StateSpaceKind::Quantum || s.hilbert_dims != std::vector<int>{2})
            p.note(ErrorCode::SchemaError, "group.name", "su2_design acts on single qubits; '" + s.id + "' is not one");
      } else if (m.group.builtin == "u1_cyclic") {
        int max_cutoff = 0;
        for (const auto& s : m.systems) {
          if (s.kind != StateSpaceKind::Quantum || s.hilbert_dims.size() != 1)
            p.note(ErrorCode::SchemaError, "group.name", "u1_cyclic acts on single modes; '" + s.id + "' is not one");
          else
            max_cutoff = std::max(max_cutoff, s.hilbert_dims[0] - 1);
        }
        for (const auto& [k, v] : m.group.params) {
          if (k != "order") p.note(ErrorCode::SchemaError, "group.params." + k, "unknown parameter");
          else if (v <= max_cutoff) p.note(ErrorCode::SchemaError, "group.params.order", "order must exceed the cutoff");
        }
      } else {
        p.error(ErrorCode::UnknownBuiltin, "group.name", "unknown builtin group '" + m.group.builtin + "'");
      }
    } else {
      p.error(ErrorCode::SchemaError, "group.kind", "expected \"finite\" or \"builtin\"");
    }
  });

  if (doc.contains("options")) {
    p.guarded([&] {
      const Json& o = doc["options"];
      if (!o.is_object()) p.error(ErrorCode::SchemaError, "options", "expected an object");
      p.known_keys(o, "options", {"tol", "rank_tol", "seed", "trials", "total_number_cutoff"});
      if (o.contains("tol")) p.guarded([&] {
          m.options.tol = p.number(o["tol"], "options.tol");
          if (!(m.options.tol > 0 && m.options.tol < 1)) p.error(ErrorCode::SchemaError, "options.tol", "must lie in (0, 1)");
        });
      if (o.contains("rank_tol")) p.guarded([&] {
          m.options.rank_tol = p.number(o["rank_tol"], "options.rank_tol");
          if (!(m.options.rank_tol > 0 && m.options.rank_tol < 1))
            p.error(ErrorCode::SchemaError, "options.rank_tol", "must lie in (0, 1)");
        });
      if (o.contains("seed")) p.guarded([&] {
          const Json& s = o["seed"];
          if (s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0)) {
            m.options.seed = s.get<std::uint64_t>();
          } else if (s.is_string()) {
            const auto& t = s.get_ref<const std::string&>();
            const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), m.options.seed);
            if (ec != std::errc() || end != t.data() + t.size())
              p.error(ErrorCode::SchemaError, "options.seed", "expected an unsigned integer");
          } else {
            p.error(ErrorCode::SchemaError, "options.seed", "expected an unsigned integer");
          }
        });
      if (o.contains("trials")) p.guarded([&] {
          const long long t = p.integer(o["trials"], "options.trials");
          if (t < 1 || t > 1000000) p.error(ErrorCode::SchemaError, "options.trials", "must lie in [1, 1000000]");
          m.options.trials = static_cast<int>(t);
        });
      if (o.contains("total_number_cutoff")) p.guarded([&] {
          const long long n = p.integer(o["total_number_cutoff"], "options.total_number_cutoff");
          if (n < 0) p.error(ErrorCode::SchemaError, "options.total_number_cutoff", "must be non-negative");
          m.options.total_number_cutoff = static_cast<int>(n);
          const std::string last = m.composites.empty() ? std::string{} : m.composites.back().id;
          const auto& h = last.empty() ? std::vector<int>{} : hilbert[last];
          if (h.size() != 2)
            p.error(ErrorCode::SchemaError, "options.total_number_cutoff",
                    "needs a final composite of two single-mode quantum systems");
        });
    });
  }

  if (!p.issues.empty()) throw ModelError(std::move(p.issues));
  return m;
}

ModelSpec load_model(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) return make_world(parse_recipe(source.substr(prefix.size())));
  std::ifstream in(source, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open model file '" + source + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

namespace {

Json vec_json(const Eigen::Ref<const Vector>& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json model_json(const ModelSpec& m) {
  Json j;
  j["schema"] = kModelSchema;
  j["name"] = m.name;
  if (!m.note.empty()) j["note"] = m.note;
  Json systems = Json::array();
  for (const auto& s : m.systems) {
    Json e;
    e["id"] = s.id;
    e["kind"] = s.kind == StateSpaceKind::Quantum ? "quantum" : "polytope";
    e["dim"] = s.dim();
    if (s.kind == StateSpaceKind::Quantum) e["hilbert_dims"] = s.hilbert_dims;
    e["unit"] = vec_json(s.unit.transpose());
    Json st = Json::array();
    for (Index k = 0; k < s.states.cols(); ++k) st.push_back(vec_json(s.states.col(k)));
    e["states"] = st;
    Json ef = Json::array();
    for (Index k = 0; k < s.effects.rows(); ++k) ef.push_back(vec_json(s.effects.row(k).transpose()));
    e["effects"] = ef;
    systems.push_back(e);
  }
  j["systems"] = systems;
  Json comps = Json::array();
  for (const auto& c : m.composites) {
    Json e;
    e["id"] = c.id;
    e["parts"] = {c.part_a, c.part_b};
    Json xs = Json::array();
    for (const auto& x : c.extra_states) xs.push_back(vec_json(x));
    e["extra_states"] = xs;
    Json xe = Json::array();
    for (const auto& x : c.extra_effects) xe.push_back(vec_json(x.transpose()));
    e["extra_effects"] = xe;
    e["coarse_grain"] = c.coarse_grain;
    comps.push_back(e);
  }
  j["composites"] = comps;
  Json g;
  if (m.group.kind == GroupEntry::Kind::Finite) {
    g["kind"] = "finite";
    Json els = Json::array();
    for (const auto& el : m.group.elements) {
      Json e;
      e["label"] = el.label;
      Json mats = Json::object();
      for (const auto& [id, mat] : el.matrices) {
        Json rows = Json::array();
        for (Index r = 0; r < mat.rows(); ++r) rows.push_back(vec_json(mat.row(r).transpose()));
        mats[id] = rows;
      }
      e["matrices"] = mats;
      els.push_back(e);
    }
    g["elements"] = els;
  } else {
    g["kind"] = "builtin";
    g["name"] = m.group.builtin;
    Json params = Json::object();
    for (const auto& [k, v] : m.group.params) params[k] = v;
    g["params"] = params;
  }
  j["group"] = g;
  Json o;
  o["tol"] = m.options.tol;
  o["rank_tol"] = m.options.rank_tol;
  o["seed"] = m.options.seed;
  o["trials"] = m.options.trials;
  if (m.options.total_number_cutoff) o["total_number_cutoff"] = *m.options.total_number_cutoff;
  j["options"] = o;
  return j;
}

}  // namespace

std::string emit_model(const ModelSpec& m) { return canonical_json(model_json(m), true); }

std::string model_digest(const ModelSpec& m) { return sha256_hex(canonical_json(model_json(m), false)); }

Index ModelInstance::index_of(const std::string& id) const {
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (ids[k] == id) return static_cast<Index>(k);
  return -1;
}

std::shared_ptr<const SystemSpec> ModelInstance::system(const std::string& id) const {
  const Index k = index_of(id);
  if (k < 0) fail(ErrorCode::BadParam, "no system '" + id + "' in the model");
  return systems[static_cast<std::size_t>(k)];
}

std::shared_ptr<const GroupAction> ModelInstance::action(const std::string& id) const {
  const Index k = index_of(id);
  if (k < 0) fail(ErrorCode::BadParam, "no system '" + id + "' in the model");
  return actions[static_cast<std::size_t>(k)];
}

ModelInstance instantiate(const ModelSpec& m) {
  ModelInstance inst;
  const double tol = m.options.tol;
  for (std::size_t i = 0; i < m.systems.size(); ++i) {
    const auto& e = m.systems[i];
    SystemData d;
    d.id = e.id;
    d.kind = e.kind;
    d.hilbert_dims = e.hilbert_dims;
    d.states = e.states;
    d.effects = e.effects;
    d.unit = e.unit;
    try {
      inst.systems.push_back(std::make_shared<const SystemSpec>(std::move(d)));
    } catch (const Error& err) {
      throw Error(err.code(), err.what(), "systems[" + std::to_string(i) + "]");
    }
    inst.ids.push_back(e.id);

    std::shared_ptr<const GroupAction> a;
    try {
      if (m.group.kind == GroupEntry::Kind::Finite) {
        std::vector<std::pair<std::string, LinearMap>> maps;
        for (const auto& el : m.group.elements) maps.emplace_back(el.label, LinearMap(el.matrices.at(e.id)));
        a = std::make_shared<const GroupAction>(build_finite_action(std::move(maps), tol));
      } else if (m.group.builtin == "su2_design") {
        a = su2_clifford_action();
      } else {
        int max_cutoff = 0;
        for (const auto& s : m.systems) max_cutoff = std::max(max_cutoff, s.hilbert_dims.at(0) - 1);
        const auto it = m.group.params.find("order");
        const int order = it != m.group.params.end() ? it->second : 2 * max_cutoff + 1;
        a = u1_phase_action(e.hilbert_dims.at(0) - 1, order);
      }
    } catch (const Error& err) {
      throw Error(err.code(), err.what(), "group");
    }
    inst.actions.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < m.composites.size(); ++i) {
    const auto& c = m.composites[i];
    const std::string path = "composites[" + std::to_string(i) + "]";
    try {
      CompositeSpec spec;
      spec.id = c.id;
      spec.a = inst.system(c.part_a);
      spec.b = inst.system(c.part_b);
      for (const auto& x : c.extra_states) spec.extra_state_generators.emplace_back(x);
      for (const auto& x : c.extra_effects) spec.extra_effect_generators.emplace_back(x);
      spec.coarse_grain = c.coarse_grain;
      inst.systems.push_back(std::make_shared<const SystemSpec>(compose_systems(spec, tol)));
      inst.ids.push_back(c.id);
      inst.actions.push_back(std::make_shared<const GroupAction>(
          collective_action({inst.action(c.part_a), inst.action(c.part_b)})));
    } catch (const Error& err) {
      throw Error(err.code(), err.what(), path);
    }
  }
  return inst;
}

}  // namespace twirlab
