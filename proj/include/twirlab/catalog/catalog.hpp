#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twirlab/io/model.hpp"

namespace twirlab {

// cbit_bitflip, pointer_discrete(n), spinor_su2(n), bosonic_u1(N, modes),
// boxworld_reflection.  text() gives the canonical "name?k=v&k=v" form with
// every parameter spelled out.
struct WorldRecipe {
  std::string name;
  std::map<std::string, int> params;
  std::string text() const;
};

// "spinor_su2?n=2" -> recipe with defaults filled in; UnknownBuiltin for an
// unknown name, BadParam / UnsupportedSize for parameters out of bounds.
WorldRecipe parse_recipe(std::string_view text);

struct BuiltinInfo {
  std::string name;
  std::string params;
  std::string summary;
};
const std::vector<BuiltinInfo>& list_builtins();

ModelSpec make_classical_world(const WorldRecipe& r);  // cbit_bitflip, pointer_discrete
ModelSpec make_quantum_world(const WorldRecipe& r);    // spinor_su2, bosonic_u1
ModelSpec make_boxworld(const WorldRecipe& r);         // boxworld_reflection
ModelSpec make_world(const WorldRecipe& r);

namespace boxworld {

// Gbit states (x, y, n): ++, +-, -+, --.
Vector state(int sx, int sy);
// e_{+x}, e_{-x}, e_{+y}, e_{-y} are effect(+1, 'x') etc.
RowVector effect(int sign, char axis);
// The eight PR-box vectors, in printed order (index 0 is omega_1).
const std::vector<Vector>& pr_boxes();
// e+ = e+x⊗e+x + e-x⊗e-x and e- = e+x⊗e-x + e-x⊗e+x.
std::pair<RowVector, RowVector> pair_effects();

struct WitnessPair {
  std::string name;
  Vector plus;
  Vector minus;
  // Outcome probabilities (e+, e-) expected on each member.
  std::pair<double, double> expected_plus{1.0, 0.0};
  std::pair<double, double> expected_minus{0.0, 1.0};
};

// s-family pair, then the two PR-mixture pairs.  BadParam for s outside [0, 1].
std::vector<WitnessPair> witness_pairs(double s);

}  // namespace boxworld

}  // namespace twirlab
