#include "twirlab/catalog/catalog.hpp"

#include <charconv>
#include <cmath>

#include "twirlab/core/hermitian_basis.hpp"

namespace twirlab {

namespace {

struct ParamSpec {
  const char* key;
  int fallback;
  int min;
  int max;
};

struct RecipeSpec {
  const char* name;
  std::vector<ParamSpec> params;
  const char* summary;
};

const std::vector<RecipeSpec>& recipes() {
  static const std::vector<RecipeSpec> r = {
      {"cbit_bitflip", {}, "two classical bits under the collective bit flip"},
      {"pointer_discrete", {{"n", 6, 2, 16}},
       "two n-outcome pointers under collective cyclic shifts (discrete adaptation of a rotating pointer)"},
      {"spinor_su2", {{"n", 2, 1, 3}}, "n qubits under collective SU(2) rotations"},
      {"bosonic_u1", {{"N", 1, 1, 5}, {"modes", 2, 1, 2}}, "cutoff-N bosonic modes under collective U(1) phase shifts"},
      {"boxworld_reflection", {}, "two gbits with PR boxes under collective reflection"},
  };
  return r;
}

SystemEntry polytope_entry(std::string id, Matrix states, Matrix effects, RowVector unit) {
  SystemEntry s;
  s.id = std::move(id);
  s.states = std::move(states);
  s.effects = std::move(effects);
  s.unit = std::move(unit);
  return s;
}

// Probability simplex on n outcomes: point distributions; effects u, 0, the
// indicators [i], then their complements u - [i].
SystemEntry simplex(const std::string& id, int n) {
  Matrix effects(2 + 2 * n, n);
  effects.row(0).setOnes();
  effects.row(1).setZero();
  for (int i = 0; i < n; ++i) {
    effects.row(2 + i) = RowVector::Unit(n, i);
    effects.row(2 + n + i) = RowVector::Ones(n) - RowVector::Unit(n, i);
  }
  if (n == 2) effects.conservativeResize(4, n);  // complements repeat the indicators
  return polytope_entry(id, Matrix::Identity(n, n), effects, RowVector::Ones(n));
}

void add_pair(ModelSpec& m, const SystemEntry& part) {
  SystemEntry a = part, b = part;
  a.id = "A";
  b.id = "B";
  m.systems = {a, b};
  CompositeEntry c;
  c.id = "AB";
  c.part_a = "A";
  c.part_b = "B";
  m.composites = {c};
}

void add_finite_group(ModelSpec& m, const std::vector<std::pair<std::string, Matrix>>& elements) {
  m.group.kind = GroupEntry::Kind::Finite;
  for (const auto& [label, mat] : elements) {
    GroupElementEntry e;
    e.label = label;
    for (const auto& s : m.systems) e.matrices[s.id] = mat;
    m.group.elements.push_back(std::move(e));
  }
}

using quantum::CMatrix;
using quantum::CVector;
using quantum::Complex;

// Pure-state projectors spanning the operators of one factor.
std::vector<CMatrix> spanning_projectors(int d) {
  std::vector<CMatrix> out;
  if (d == 2) {
    // tetrahedral Bloch vectors
    const double r = 1.0 / std::sqrt(3.0);
    const int signs[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    CMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    for (const auto& s : signs)
      out.push_back(0.5 * (CMatrix::Identity(2, 2) + r * (s[0] * x + s[1] * y + s[2] * z)));
    return out;
  }
  for (int n = 0; n < d; ++n) out.push_back(quantum::projector(CVector::Unit(d, n)));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      CVector re = CVector::Zero(d), im = CVector::Zero(d);
      re[i] = 1;
      re[j] = 1;
      im[i] = 1;
      im[j] = Complex(0, 1);
      out.push_back(quantum::projector(re));
      out.push_back(quantum::projector(im));
    }
  return out;
}

SystemEntry quantum_entry(const std::string& id, int d) {
  const quantum::OperatorCoordinates coords({d});
  const auto projs = spanning_projectors(d);
  SystemEntry s;
  s.id = id;
  s.kind = StateSpaceKind::Quantum;
  s.hilbert_dims = {d};
  s.states.resize(coords.dim(), static_cast<Index>(projs.size()));
  s.effects.resize(static_cast<Index>(projs.size()) + 2, coords.dim());
  s.unit = coords.effect_vector(CMatrix::Identity(d, d));
  s.effects.row(0) = s.unit;
  s.effects.row(1).setZero();
  for (std::size_t k = 0; k < projs.size(); ++k) {
    s.states.col(static_cast<Index>(k)) = coords.state_vector(projs[k]);
    s.effects.row(static_cast<Index>(k) + 2) = coords.effect_vector(projs[k]);
  }
  // exact zeros and simple fractions print canonically
  for (Matrix* m : {&s.states, &s.effects})
    for (Index k = 0; k < m->size(); ++k)
      if (std::abs(m->data()[k]) < 1e-15) m->data()[k] = 0.0;
  return s;
}

int param(const WorldRecipe& r, const char* key) { return r.params.at(key); }

}  // namespace

std::string WorldRecipe::text() const {
  std::string out = name;
  char sep = '?';
  // parameters in declaration order
  for (const auto& spec : recipes()) {
    if (name != spec.name) continue;
    for (const auto& p : spec.params) {
      out += sep;
      out += p.key;
      out += '=';
      out += std::to_string(params.at(p.key));
      sep = '&';
    }
  }
  return out;
}

WorldRecipe parse_recipe(std::string_view text) {
  const std::size_t q = text.find('?');
  WorldRecipe r;
  r.name = std::string(text.substr(0, q));
  const RecipeSpec* spec = nullptr;
  for (const auto& s : recipes())
    if (r.name == s.name) spec = &s;
  if (!spec) fail(ErrorCode::UnknownBuiltin, "unknown builtin world '" + r.name + "'");

  std::map<std::string, int> given;
  if (q != std::string_view::npos) {
    std::string_view rest = text.substr(q + 1);
    while (!rest.empty()) {
      const std::size_t amp = rest.find('&');
      const std::string_view kv = rest.substr(0, amp);
      rest = amp == std::string_view::npos ? std::string_view{} : rest.substr(amp + 1);
      const std::size_t eq = kv.find('=');
      if (eq == std::string_view::npos)
        fail(ErrorCode::BadParam, "builtin parameter '" + std::string(kv) + "' needs key=value");
      const std::string key(kv.substr(0, eq));
      const std::string_view val = kv.substr(eq + 1);
      int v = 0;
      const auto [end, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
      if (ec != std::errc() || end != val.data() + val.size())
        fail(ErrorCode::BadParam, "builtin parameter '" + key + "' must be an integer");
      given[key] = v;
    }
  }
  for (const auto& [k, v] : given) {
    bool known = false;
    for (const auto& p : spec->params) known = known || k == p.key;
    if (!known) fail(ErrorCode::BadParam, r.name + " has no parameter '" + k + "'");
  }
  for (const auto& p : spec->params) {
    const auto it = given.find(p.key);
    const int v = it == given.end() ? p.fallback : it->second;
    if (v < p.min) fail(ErrorCode::BadParam, r.name + ": " + p.key + " must be at least " + std::to_string(p.min));
    if (v > p.max)
      fail(ErrorCode::UnsupportedSize, r.name + ": " + p.key + " above " + std::to_string(p.max) + " is not supported");
    r.params[p.key] = v;
  }
  return r;
}

const std::vector<BuiltinInfo>& list_builtins() {
  static const std::vector<BuiltinInfo> out = [] {
    std::vector<BuiltinInfo> v;
    for (const auto& s : recipes()) {
      std::string params;
      for (const auto& p : s.params) {
        if (!params.empty()) params += '&';
        params += std::string(p.key) + "=" + std::to_string(p.min) + ".." + std::to_string(p.max) +
                  " (default " + std::to_string(p.fallback) + ")";
      }
      v.push_back({s.name, params, s.summary});
    }
    return v;
  }();
  return out;
}

ModelSpec make_classical_world(const WorldRecipe& r) {
  ModelSpec m;
  m.name = r.text();
  if (r.name == "cbit_bitflip") {
    add_pair(m, simplex("A", 2));
    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    add_finite_group(m, {{"e", Matrix::Identity(2, 2)}, {"flip", swap}});
    return m;
  }
  if (r.name == "pointer_discrete") {
    const int n = param(r, "n");
    m.note = "Adaptation: a discrete stand-in for the continuous rotating pointer; collective rotations "
             "are replaced by collective cyclic shifts of n pointer positions.";
    add_pair(m, simplex("A", n));
    std::vector<std::pair<std::string, Matrix>> els;
    Matrix shift = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) shift((i + 1) % n, i) = 1.0;
    Matrix cur = Matrix::Identity(n, n);
    for (int k = 0; k < n; ++k) {
      els.emplace_back("r" + std::to_string(k), cur);
      cur = shift * cur;
    }
    add_finite_group(m, els);
    return m;
  }
  fail(ErrorCode::BadParam, "'" + r.name + "' is not a classical world");
}

ModelSpec make_quantum_world(const WorldRecipe& r) {
  ModelSpec m;
  m.name = r.text();
  if (r.name == "spinor_su2") {
    const int n = param(r, "n");
    const char* ids[3] = {"A", "B", "C"};
    for (int k = 0; k < n; ++k) m.systems.push_back(quantum_entry(ids[k], 2));
    if (n == 2) m.composites.push_back({"AB", "A", "B", {}, {}, true});
    if (n == 3) {
      m.composites.push_back({"BC", "B", "C", {}, {}, true});
      m.composites.push_back({"ABC", "A", "BC", {}, {}, true});
    }
    m.group.kind = GroupEntry::Kind::Builtin;
    m.group.builtin = "su2_design";
    return m;
  }
  if (r.name == "bosonic_u1") {
    const int cutoff = param(r, "N");
    const int modes = param(r, "modes");
    m.systems.push_back(quantum_entry("A", cutoff + 1));
    if (modes == 2) {
      m.systems.push_back(quantum_entry("B", cutoff + 1));
      m.composites.push_back({"AB", "A", "B", {}, {}, true});
      m.options.total_number_cutoff = cutoff;
    }
    m.group.kind = GroupEntry::Kind::Builtin;
    m.group.builtin = "u1_cyclic";
    m.group.params["order"] = 2 * cutoff + 1;
    return m;
  }
  fail(ErrorCode::BadParam, "'" + r.name + "' is not a quantum world");
}

ModelSpec make_boxworld(const WorldRecipe& r) {
  if (r.name != "boxworld_reflection") fail(ErrorCode::BadParam, "'" + r.name + "' is not a boxworld");
  ModelSpec m;
  m.name = r.text();
  Matrix states(3, 4);
  states << boxworld::state(1, 1), boxworld::state(1, -1), boxworld::state(-1, 1), boxworld::state(-1, -1);
  Matrix effects(6, 3);
  effects << 0, 0, 1, 0, 0, 0, boxworld::effect(1, 'x'), boxworld::effect(-1, 'x'), boxworld::effect(1, 'y'),
      boxworld::effect(-1, 'y');
  add_pair(m, polytope_entry("A", states, effects, RowVector::Unit(3, 2)));
  m.composites[0].extra_states = boxworld::pr_boxes();
  Matrix reflect = Matrix::Identity(3, 3);
  reflect(0, 0) = -1;
  add_finite_group(m, {{"e", Matrix::Identity(3, 3)}, {"r", reflect}});
  return m;
}

ModelSpec make_world(const WorldRecipe& r) {
  if (r.name == "cbit_bitflip" || r.name == "pointer_discrete") return make_classical_world(r);
  if (r.name == "spinor_su2" || r.name == "bosonic_u1") return make_quantum_world(r);
  if (r.name == "boxworld_reflection") return make_boxworld(r);
  fail(ErrorCode::UnknownBuiltin, "unknown builtin world '" + r.name + "'");
}

namespace boxworld {

Vector state(int sx, int sy) { return Vector{{double(sx), double(sy), 1.0}}; }

RowVector effect(int sign, char axis) {
  RowVector e = RowVector::Zero(3);
  e[axis == 'x' ? 0 : 1] = 0.5 * sign;
  e[2] = 0.5;
  return e;
}

const std::vector<Vector>& pr_boxes() {
  static const std::vector<Vector> boxes = [] {
    const double rows[8][9] = {
        {1, 1, 0, 1, -1, 0, 0, 0, 1},   {1, 1, 0, -1, 1, 0, 0, 0, 1},  {1, -1, 0, 1, 1, 0, 0, 0, 1},
        {-1, 1, 0, 1, 1, 0, 0, 0, 1},   {-1, -1, 0, -1, 1, 0, 0, 0, 1}, {-1, -1, 0, 1, -1, 0, 0, 0, 1},
        {-1, 1, 0, -1, -1, 0, 0, 0, 1}, {1, -1, 0, -1, -1, 0, 0, 0, 1},
    };
    std::vector<Vector> v;
    for (const auto& r : rows) v.push_back(Eigen::Map<const Vector>(r, 9));
    return v;
  }();
  return boxes;
}

std::pair<RowVector, RowVector> pair_effects() {
  auto t = [](const RowVector& a, const RowVector& b) {
    return RowVector(kron(Vector(a.transpose()), Vector(b.transpose())).transpose());
  };
  const RowVector px = effect(1, 'x'), mx = effect(-1, 'x');
  return {t(px, px) + t(mx, mx), t(px, mx) + t(mx, px)};
}

std::vector<WitnessPair> witness_pairs(double s) {
  if (!(s >= 0.0 && s <= 1.0)) fail(ErrorCode::BadParam, "witness pairs: s must lie in [0, 1]");
  const Vector wp = s * state(1, -1) + (1 - s) * state(1, 1);
  const Vector wm = s * state(-1, -1) + (1 - s) * state(-1, 1);
  const auto& pr = pr_boxes();
  std::vector<WitnessPair> out;
  out.push_back({"s-family", 0.5 * (kron(wp, wp) + kron(wm, wm)), 0.5 * (kron(wp, wm) + kron(wm, wp))});
  out.push_back({"PR mixtures (2,3)|(4,5)", 0.5 * (pr[1] + pr[2]), 0.5 * (pr[3] + pr[4])});
  out.push_back({"PR mixtures (1,8)|(6,7)", 0.5 * (pr[0] + pr[7]), 0.5 * (pr[5] + pr[6])});
  return out;
}

}  // namespace boxworld

}  // namespace twirlab
