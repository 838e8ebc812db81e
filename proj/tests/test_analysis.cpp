#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include "json.hpp"

#include "oracles.hpp"
#include "twirlab/analysis/locality.hpp"
#include "twirlab/analysis/twirled_world.hpp"
#include "twirlab/analysis/ubiquity.hpp"
#include "twirlab/catalog/catalog.hpp"
#include "twirlab/error.hpp"
#include "twirlab/io/pipeline.hpp"
#include "twirlab/symmetry/compact.hpp"

using namespace twirlab;

namespace {

template <typename Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

struct Worlds {
  ModelInstance inst;
  std::map<std::string, std::shared_ptr<const TwirledWorld>> w;
  const TwirledWorld& operator[](const std::string& id) const { return *w.at(id); }
};

Worlds twirled(const std::string& recipe) {
  Worlds out;
  out.inst = instantiate(make_world(parse_recipe(recipe)));
  for (std::size_t k = 0; k < out.inst.systems.size(); ++k)
    out.w[out.inst.ids[k]] =
        std::make_shared<const TwirledWorld>(build_twirled_world(out.inst.systems[k], out.inst.actions[k]));
  return out;
}

nlohmann::json box_fixture() {
  std::ifstream f(std::string(TWIRLAB_SOURCE_DIR) + "/tests/fixtures/boxworld_oracle.json");
  return nlohmann::json::parse(f);
}

std::shared_ptr<const SystemSpec> cbit() {
  return std::make_shared<const SystemSpec>(
      SystemSpec::polytope("A", {RealVector{1, 0}, RealVector{0, 1}},
                           {LinearFunctional{1, 0}, LinearFunctional{0, 1}, LinearFunctional{0, 0},
                            LinearFunctional{1, 1}},
                           LinearFunctional{1, 1}));
}

}  // namespace

TEST(Counts, CbitMatchesOrbitCount) {
  const Worlds w = twirled("cbit_bitflip");
  EXPECT_EQ(w["A"].k, oracle::orbit_count(2, {{1, 0}}));
  // collective flip on the four product points (i, j) -> (1-i, 1-j)
  EXPECT_EQ(w["AB"].k, oracle::orbit_count(4, {{3, 2, 1, 0}}));
  EXPECT_EQ(w["AB"].k, 2);
}

TEST(Counts, PointerMatchesOrbitCount) {
  for (int n : {2, 3, 6, 16}) {
    const Worlds w = twirled("pointer_discrete?n=" + std::to_string(n));
    std::vector<int> shift(n), pair_shift(n * n);
    for (int i = 0; i < n; ++i) {
      shift[i] = (i + 1) % n;
      for (int j = 0; j < n; ++j) pair_shift[i * n + j] = ((i + 1) % n) * n + (j + 1) % n;
    }
    EXPECT_EQ(w["A"].k, oracle::orbit_count(n, {shift})) << n;
    EXPECT_EQ(w["AB"].k, oracle::orbit_count(n * n, {pair_shift})) << n;
  }
}

TEST(Counts, SpinorMatchesPermutationSpan) {
  const Worlds one = twirled("spinor_su2?n=1");
  EXPECT_EQ(one["A"].k, oracle::span_dimension(oracle::permutation_operators(1)));

  const Worlds two = twirled("spinor_su2?n=2");
  EXPECT_EQ(two["A"].k, 1);
  EXPECT_EQ(two["AB"].k, oracle::span_dimension(oracle::permutation_operators(2)));

  const Worlds three = twirled("spinor_su2?n=3");
  EXPECT_EQ(three["BC"].k, oracle::span_dimension(oracle::permutation_operators(2)));
  EXPECT_EQ(three["ABC"].k, oracle::span_dimension(oracle::permutation_operators(3)));
  EXPECT_EQ(three["ABC"].k, 5);
}

TEST(Counts, BosonicMatchesCommutant) {
  for (int n = 1; n <= 3; ++n) {
    const Worlds w = twirled("bosonic_u1?N=" + std::to_string(n));
    EXPECT_EQ(w["A"].k, oracle::commutant_dimension(oracle::number_operator(n))) << n;
    EXPECT_EQ(w["A"].k, n + 1);
    EXPECT_EQ(w["AB"].k, oracle::commutant_dimension(oracle::total_number(n))) << n;
    const auto kets = total_number_kets(n, n + 1, n + 1);
    EXPECT_EQ(restricted_parameter_count(w["AB"], kets),
              oracle::commutant_dimension(oracle::restricted_total_number(n)))
        << n;
  }
}

TEST(Counts, BosonicSingleMode) {
  const Worlds w = twirled("bosonic_u1?N=4&modes=1");
  EXPECT_EQ(w.w.size(), 1u);
  EXPECT_EQ(w["A"].k, 5);
}

TEST(Counts, BoxworldMatchesExactFixture) {
  const nlohmann::json fx = box_fixture();
  const Worlds w = twirled("boxworld_reflection");
  EXPECT_EQ(w["A"].k, fx["K_A"].get<int>());
  EXPECT_EQ(w["B"].k, fx["K_B"].get<int>());
  EXPECT_EQ(w["AB"].k, fx["K_AB"].get<int>());
  EXPECT_EQ(numerical_rank(w["A"].base->states()), fx["K_A_untwirled"].get<int>());
  EXPECT_EQ(numerical_rank(w["AB"].base->states()), fx["K_AB_untwirled"].get<int>());

  const Matrix& s = w["A"].system->states();
  ASSERT_EQ(s.cols(), 2);
  for (const auto& row : fx["twirled_gbit_states"]) {
    Vector v(3);
    for (int i = 0; i < 3; ++i) v[i] = std::stod(row[i].get<std::string>());
    double best = 1e9;
    for (Index c = 0; c < s.cols(); ++c) best = std::min(best, max_abs(s.col(c) - v));
    EXPECT_LE(best, 1e-12);
  }
}

TEST(Counts, StableAcrossRankThresholds) {
  for (const char* r : {"cbit_bitflip", "pointer_discrete?n=16", "spinor_su2?n=3", "bosonic_u1?N=3",
                        "boxworld_reflection"}) {
    const Worlds w = twirled(r);
    for (const auto& [id, world] : w.w) {
      const auto ks = count_parameters(*world, {1e-10, 1e-9, 1e-8, 1e-7});
      for (Index k : ks) EXPECT_EQ(k, world->k) << r << " " << id;
      EXPECT_EQ(count_parameters(*world, 1e-9), world->k);
    }
  }
}

TEST(Counts, TotalNumberKets) {
  const auto kets = total_number_kets(2, 3, 3);
  EXPECT_EQ(kets, (std::vector<int>{0, 1, 2, 3, 4, 6}));
}

TEST(TwirledWorld, RejectsUnphysicalActions) {
  // rotations of the gbit square by multiples of 45 degrees
  const auto box = instantiate(make_world(parse_recipe("boxworld_reflection")));
  std::vector<std::pair<std::string, LinearMap>> els;
  for (int k = 0; k < 8; ++k) {
    const double t = std::numbers::pi * k / 4;
    Matrix m = Matrix::Identity(3, 3);
    m(0, 0) = std::cos(t), m(0, 1) = -std::sin(t), m(1, 0) = std::sin(t), m(1, 1) = std::cos(t);
    els.emplace_back("r" + std::to_string(k), LinearMap(m));
  }
  auto rot = std::make_shared<const GroupAction>(build_finite_action(els));
  EXPECT_EQ(error_of([&] { build_twirled_world(box.system("A"), rot); }), ErrorCode::ActionNotPhysical);

  // -1 moves the unit effect
  auto neg = std::make_shared<const GroupAction>(
      build_finite_action({{"e", LinearMap::identity(2)}, {"m", LinearMap(-Matrix::Identity(2, 2))}}));
  EXPECT_EQ(error_of([&] { build_twirled_world(cbit(), neg); }), ErrorCode::ActionNotPhysical);

  TwirlOptions off;
  off.check_physical = false;
  EXPECT_NO_THROW(build_twirled_world(box.system("A"), rot, off));

  EXPECT_EQ(error_of([&] { build_twirled_world(cbit(), std::make_shared<const GroupAction>(trivial_action(3))); }),
            ErrorCode::DimensionMismatch);
}

TEST(TwirledWorld, UnitaryActionOnQubitIsPhysical) {
  const auto s = instantiate(make_world(parse_recipe("spinor_su2?n=1")));
  const TwirledWorld w = build_twirled_world(s.system("A"), su2_clifford_action());
  EXPECT_EQ(w.k, 1);
  // the maximally mixed state is the only twirled state
  Vector mixed = Vector::Zero(4);
  mixed[0] = 1.0;
  for (Index c = 0; c < w.system->state_count(); ++c) EXPECT_LE(max_abs(w.system->states().col(c) - mixed), 1e-12);
}

TEST(TwirledWorld, SpinorStatesAreBlockDiagonal) {
  const Worlds w = twirled("spinor_su2?n=2");
  const auto sectors = oracle::singlet_triplet();
  const auto& coords = w["AB"].system->coordinates();
  const Matrix& s = w["AB"].system->states();
  for (Index c = 0; c < s.cols(); ++c)
    EXPECT_LE(oracle::cross_block_max(coords.operator_from_state(s.col(c)), sectors), 1e-12);
  // the singlet is invariant, so it is a state of the twirled world
  EXPECT_TRUE(w["AB"].system->contains_state(coords.state_vector(sectors[0]), 1e-9).member);
}

TEST(TwirledWorld, BosonicStatesAreBlockDiagonalInTotalNumber) {
  for (int n = 1; n <= 2; ++n) {
    const Worlds w = twirled("bosonic_u1?N=" + std::to_string(n));
    const auto sectors = oracle::eigenspace_projectors(oracle::total_number(n).cast<std::complex<double>>());
    const auto& coords = w["AB"].system->coordinates();
    const Matrix& s = w["AB"].system->states();
    for (Index c = 0; c < s.cols(); ++c)
      EXPECT_LE(oracle::cross_block_max(coords.operator_from_state(s.col(c)), sectors), 1e-12);
    const Matrix& e = w["AB"].system->effects();
    for (Index r = 0; r < e.rows(); ++r)
      EXPECT_LE(oracle::cross_block_max(coords.operator_from_effect(e.row(r)), sectors), 1e-12);
  }
}

TEST(Oracle, SectorChecksSeeCoherence) {
  // |0><1| + |1><0| on a qubit pair couples N = 0 and N = 1
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(4, 4);
  x(0, 1) = x(1, 0) = 1.0;
  const Eigen::MatrixXcd n = oracle::total_number(1).cast<std::complex<double>>();
  EXPECT_NEAR(oracle::cross_block_max(x, oracle::eigenspace_projectors(n)), 1.0, 1e-12);
  EXPECT_NEAR(oracle::cross_block_max(x, oracle::sector_basis(n)), 1.0, 1e-12);
  const Eigen::MatrixXcd diag = oracle::total_number(1).cast<std::complex<double>>();
  EXPECT_LE(oracle::cross_block_max(diag, oracle::sector_basis(n)), 1e-12);
}

TEST(TwirledWorld, StatesAreFixedPoints) {
  const Worlds w = twirled("boxworld_reflection");
  for (const auto& [id, world] : w.w) {
    const Matrix& p = world->projector->matrix();
    EXPECT_LE(max_abs(p * world->system->states() - world->system->states()), 1e-12) << id;
    EXPECT_LE(max_abs(world->system->effects() * p - world->system->effects()), 1e-12) << id;
  }
}

TEST(Completeness, PairingRanksMatchCounts) {
  for (const char* r : {"cbit_bitflip", "pointer_discrete?n=6", "spinor_su2?n=2", "bosonic_u1?N=2",
                        "boxworld_reflection"}) {
    const Worlds w = twirled(r);
    for (const auto& [id, world] : w.w) {
      const ValidationReport rep = check_tomographic_completeness(*world);
      EXPECT_TRUE(rep.all_pass()) << r << " " << id;
      EXPECT_EQ(pairing_rank(*world), world->k) << r << " " << id;
    }
  }
}

TEST(Locality, VerdictsForCatalog) {
  struct Case {
    const char* recipe;
    const char* a;
    const char* b;
    const char* ab;
    bool fails;
  };
  const Case cases[] = {
      {"cbit_bitflip", "A", "B", "AB", true},
      {"pointer_discrete?n=6", "A", "B", "AB", true},
      {"spinor_su2?n=2", "A", "B", "AB", true},
      {"spinor_su2?n=3", "A", "BC", "ABC", true},
      {"bosonic_u1?N=2", "A", "B", "AB", true},
      {"boxworld_reflection", "A", "B", "AB", true},
  };
  for (const auto& c : cases) {
    const Worlds w = twirled(c.recipe);
    const LocalityVerdict v = locality_verdict(w[c.a], w[c.b], w[c.ab]);
    EXPECT_EQ(v.criterion_fails_locality, c.fails) << c.recipe;
    EXPECT_EQ(v.criterion_fails_locality, v.direct_fails_locality) << c.recipe;
    EXPECT_EQ(v.criterion_fails_locality, v.k_ab > v.k_a * v.k_b);
    EXPECT_LE(v.product_pairing_rank, v.k_a * v.k_b);
    ASSERT_TRUE(v.witness.has_value()) << c.recipe;
    const auto& wit = *v.witness;
    EXPECT_LE(wit.product_discrepancy, 1e-9) << c.recipe;
    EXPECT_LE(verify_local_indistinguishability(wit.omega1, wit.omega2, w[c.a], w[c.b]), 1e-9);
    EXPECT_GT(wit.separator.gap, 1e-9);
    EXPECT_NEAR(wit.separator.effect.dot(wit.omega1 - wit.omega2), wit.separator.gap, 1e-12);
    // both witnesses are states of the twirled composite
    EXPECT_TRUE(w[c.ab].system->contains_state(wit.omega1, 1e-7).member) << c.recipe;
    EXPECT_TRUE(w[c.ab].system->contains_state(wit.omega2, 1e-7).member) << c.recipe;
  }
}

TEST(Locality, SpinorWitnessUsesTheSinglet) {
  const Worlds w = twirled("spinor_su2?n=2");
  const auto v = locality_verdict(w["A"], w["B"], w["AB"]);
  ASSERT_TRUE(v.witness);
  const auto& coords = w["AB"].system->coordinates();
  const auto d = coords.operator_from_state(v.witness->omega1 - v.witness->omega2);
  // traceless and inside span{singlet, triplet}
  EXPECT_LE(std::abs(d.trace()), 1e-9);
  EXPECT_LE(oracle::cross_block_max(d, oracle::singlet_triplet()), 1e-9);
}

TEST(Locality, TrivialActionIsLocal) {
  auto inst = instantiate(make_world(parse_recipe("cbit_bitflip")));
  std::map<std::string, TwirledWorld> w;
  for (const char* id : {"A", "B", "AB"}) {
    const auto s = inst.system(id);
    w[id] = build_twirled_world(s, std::make_shared<const GroupAction>(trivial_action(s->dim())));
  }
  const auto v = locality_verdict(w["A"], w["B"], w["AB"]);
  EXPECT_EQ(v.k_a, 2);
  EXPECT_EQ(v.k_ab, 4);
  EXPECT_FALSE(v.criterion_fails_locality);
  EXPECT_FALSE(v.direct_fails_locality);
  EXPECT_FALSE(v.witness.has_value());
}

TEST(Locality, InconsistentWorlds) {
  const Worlds c = twirled("cbit_bitflip");
  const Worlds p = twirled("pointer_discrete?n=3");
  EXPECT_EQ(error_of([&] { locality_verdict(c["A"], c["B"], p["AB"]); }), ErrorCode::InconsistentWorlds);
}

TEST(Boxworld, WitnessPairsMatchClosedForm) {
  const Worlds w = twirled("boxworld_reflection");
  const auto [ep, em] = boxworld::pair_effects();
  const RowVector u = w["AB"].base->unit();
  EXPECT_LE(max_abs(ep + em - u), 1e-15);
  // e+- = (+-1, 0, ..., 0, 1) / 2
  RowVector ep_ref = RowVector::Zero(9), em_ref = RowVector::Zero(9);
  ep_ref[0] = 0.5, ep_ref[8] = 0.5, em_ref[0] = -0.5, em_ref[8] = 0.5;
  EXPECT_LE(max_abs(ep - ep_ref), 1e-15);
  EXPECT_LE(max_abs(em - em_ref), 1e-15);

  for (double s : {0.0, 0.25, 0.5}) {
    const auto pairs = boxworld::witness_pairs(s);
    ASSERT_EQ(pairs.size(), 3u);
    const double c = 1 - 2 * s;
    Vector plus_ref(9), minus_ref(9);
    plus_ref << 1, 0, 0, 0, c * c, c, 0, c, 1;
    minus_ref << -1, 0, 0, 0, c * c, c, 0, c, 1;
    EXPECT_LE(max_abs(pairs[0].plus - plus_ref), 1e-12) << s;
    EXPECT_LE(max_abs(pairs[0].minus - minus_ref), 1e-12) << s;
    for (const auto& pr : pairs) {
      EXPECT_LE(verify_local_indistinguishability(pr.plus, pr.minus, w["A"], w["B"]), 1e-12) << pr.name;
      EXPECT_NEAR(ep.dot(pr.plus), pr.expected_plus.first, 1e-12) << pr.name;
      EXPECT_NEAR(em.dot(pr.plus), pr.expected_plus.second, 1e-12) << pr.name;
      EXPECT_NEAR(ep.dot(pr.minus), pr.expected_minus.first, 1e-12) << pr.name;
      EXPECT_NEAR(em.dot(pr.minus), pr.expected_minus.second, 1e-12) << pr.name;
      EXPECT_TRUE(w["AB"].system->contains_state(pr.plus, 1e-9).member) << pr.name;
      EXPECT_TRUE(w["AB"].system->contains_state(pr.minus, 1e-9).member) << pr.name;
      const auto sep = find_separating_invariant_effect(pr.plus, pr.minus, w["AB"].base->effects(), u,
                                                        *w["AB"].projector);
      EXPECT_NEAR(sep.gap, 1.0, 1e-12) << pr.name;
    }
  }
  EXPECT_EQ(error_of([] { boxworld::witness_pairs(1.5); }), ErrorCode::BadParam);
}

TEST(Separator, Preconditions) {
  const Worlds w = twirled("boxworld_reflection");
  const auto pairs = boxworld::witness_pairs(0.0);
  const auto& p = *w["AB"].projector;
  const Matrix& e = w["AB"].base->effects();
  const RowVector& u = w["AB"].base->unit();
  EXPECT_EQ(error_of([&] { find_separating_invariant_effect(pairs[0].plus, pairs[0].plus, e, u, p); }),
            ErrorCode::PreconditionViolation);
  const Vector moved = kron(boxworld::state(1, 1), boxworld::state(1, 1));
  EXPECT_EQ(error_of([&] { find_separating_invariant_effect(moved, pairs[0].plus, e, u, p); }),
            ErrorCode::PreconditionViolation);
  Matrix trivial(2, 9);
  trivial.row(0) = u;
  trivial.row(1).setZero();
  EXPECT_EQ(error_of([&] { find_separating_invariant_effect(pairs[0].plus, pairs[0].minus, trivial, u, p); }),
            ErrorCode::NotSeparable);
}

TEST(Separator, ComplementsNegativeGap) {
  const Worlds w = twirled("boxworld_reflection");
  const auto pr = boxworld::witness_pairs(0.0)[0];
  const auto [ep, em] = boxworld::pair_effects();
  Matrix only_minus(1, 9);
  only_minus.row(0) = em;
  const RowVector& u = w["AB"].base->unit();
  const auto sep = find_separating_invariant_effect(pr.plus, pr.minus, only_minus, u, *w["AB"].projector);
  EXPECT_TRUE(sep.complemented);
  EXPECT_EQ(sep.base_index, 0);
  EXPECT_NEAR(sep.gap, 1.0, 1e-12);
  EXPECT_LE(max_abs(sep.effect - ep), 1e-12);
}

TEST(Ubiquity, CbitGapIsOneHalf) {
  ModelSpec m = make_world(parse_recipe("cbit_bitflip"));
  const AnalysisReport r = run_analysis(m, kStageWorlds);
  ASSERT_EQ(r.ubiquity.status, "ok");
  // seed delta_0: product twirl is uniform, correlated twirl (d00 + d11)/2
  Vector prod = Vector::Constant(4, 0.25);
  Vector corr(4);
  corr << 0.5, 0, 0, 0.5;
  EXPECT_LE(max_abs(r.ubiquity.witness.omega_prod - prod), 1e-12);
  EXPECT_LE(max_abs(r.ubiquity.witness.omega_corr - corr), 1e-12);
  // best coarse-grained outcome set on four points
  const Vector diff = corr - prod;
  double best = 0;
  for (int mask = 0; mask < 16; ++mask) {
    double g = 0;
    for (int i = 0; i < 4; ++i)
      if (mask >> i & 1) g += diff[i];
    best = std::max(best, std::abs(g));
  }
  EXPECT_NEAR(r.ubiquity.separator.gap, best, 1e-12);
  EXPECT_NEAR(r.ubiquity.separator.gap, 0.5, 1e-12);
  EXPECT_LE(r.ubiquity.local_indistinguishability, 1e-12);
  EXPECT_NEAR(r.ubiquity.witness.separation, 0.25, 1e-12);
}

TEST(Ubiquity, TransformationPair) {
  const AnalysisReport r = run_analysis(make_world(parse_recipe("cbit_bitflip")), kStageWorlds);
  const auto& t = r.ubiquity.transformation;
  EXPECT_TRUE(t.pass);
  EXPECT_LE(t.local_residual, 1e-12);
  EXPECT_GT(t.global_gap, 1e-9);
  ASSERT_TRUE(t.product_residual.has_value());
  EXPECT_LE(*t.product_residual, 1e-12);
}

TEST(Ubiquity, TrivialAction) {
  auto triv = std::make_shared<const GroupAction>(trivial_action(2));
  EXPECT_EQ(error_of([&] { ubiquity_witnesses(triv, Vector::Unit(2, 0)); }), ErrorCode::TrivialAction);
  EXPECT_FALSE(first_moved_state(*cbit(), *triv).has_value());
  // the flip fixes the uniform seed
  auto inst = instantiate(make_world(parse_recipe("cbit_bitflip")));
  EXPECT_EQ(error_of([&] { ubiquity_witnesses(inst.action("A"), Vector::Constant(2, 0.5)); }),
            ErrorCode::TrivialAction);
  EXPECT_EQ(first_moved_state(*inst.system("A"), *inst.action("A")), std::optional<Index>(0));
}

TEST(Ubiquity, BoxworldAndSpinor) {
  for (const char* rcp : {"boxworld_reflection", "spinor_su2?n=1", "pointer_discrete?n=6"}) {
    const AnalysisReport r = run_analysis(make_world(parse_recipe(rcp)), kStageWorlds);
    ASSERT_EQ(r.ubiquity.status, "ok") << rcp;
    EXPECT_GT(r.ubiquity.separator.gap, 1e-9) << rcp;
    EXPECT_LE(r.ubiquity.local_indistinguishability, 1e-9) << rcp;
    EXPECT_TRUE(r.ubiquity.transformation.pass) << rcp;
  }
}
