#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "twirlab/catalog/catalog.hpp"
#include "twirlab/error.hpp"
#include "twirlab/io/canonical_json.hpp"
#include "twirlab/io/model.hpp"
#include "twirlab/io/pipeline.hpp"
#include "twirlab/io/report.hpp"

using namespace twirlab;

namespace {

const std::string kSource = TWIRLAB_SOURCE_DIR;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json cbit_doc() { return Json::parse(emit_model(make_world(parse_recipe("cbit_bitflip")))); }

// First issue of a rejected document.
ModelIssue first_issue(const Json& doc) {
  try {
    parse_model(doc.dump());
  } catch (const ModelError& e) {
    EXPECT_FALSE(e.issues().empty());
    EXPECT_EQ(e.code(), e.issues().front().code);
    EXPECT_EQ(e.path(), e.issues().front().path);
    return e.issues().front();
  }
  ADD_FAILURE() << "document accepted";
  return {ErrorCode::Io, "", ""};
}

ErrorCode error_of_parse(const std::string& text) {
  try {
    parse_model(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "document accepted";
  return ErrorCode::Io;
}

bool has_issue(const Json& doc, ErrorCode code, const std::string& path) {
  try {
    parse_model(doc.dump());
  } catch (const ModelError& e) {
    for (const auto& i : e.issues())
      if (i.code == code && i.path == path) return true;
  }
  return false;
}

// Structural equality with numbers compared to an absolute tolerance.
void expect_close(const Json& a, const Json& b, const std::string& where = "$") {
  if (a.is_number() && b.is_number()) {
    EXPECT_NEAR(a.get<double>(), b.get<double>(), 1e-9) << where;
    return;
  }
  ASSERT_EQ(a.type(), b.type()) << where;
  if (a.is_object()) {
    ASSERT_EQ(a.size(), b.size()) << where;
    for (const auto& [k, v] : a.items()) {
      ASSERT_TRUE(b.contains(k)) << where << "." << k;
      expect_close(v, b[k], where + "." + k);
    }
  } else if (a.is_array()) {
    ASSERT_EQ(a.size(), b.size()) << where;
    for (std::size_t i = 0; i < a.size(); ++i) expect_close(a[i], b[i], where + "[" + std::to_string(i) + "]");
  } else {
    EXPECT_EQ(a, b) << where;
  }
}

// Rounding-level residuals ("7.85e-17") vary across libm builds.
std::string mask_tiny(const std::string& text) {
  static const std::regex tiny(R"([-+]?\d(\.\d+)?e-(1[0-9]|[2-9][0-9]|[1-9][0-9][0-9]))");
  return std::regex_replace(text, tiny, "~0");
}

}  // namespace

TEST(ModelParse, ShippedFileIsCanonical) {
  const std::string text = slurp(kSource + "/models/boxworld_reflection.json");
  const ModelSpec m = parse_model(text);
  EXPECT_EQ(emit_model(m), text);
  EXPECT_EQ(model_digest(m), model_digest(make_world(parse_recipe("boxworld_reflection"))));
  EXPECT_EQ(emit_model(load_model(kSource + "/models/boxworld_reflection.json")), text);
}

TEST(ModelParse, RoundTripsEveryBuiltin) {
  for (const char* r : {"cbit_bitflip", "pointer_discrete?n=3", "spinor_su2?n=3", "bosonic_u1?N=2",
                        "boxworld_reflection"}) {
    const ModelSpec m = load_model(std::string("builtin:") + r);
    const std::string once = emit_model(m);
    EXPECT_EQ(emit_model(parse_model(once)), once) << r;
    EXPECT_EQ(model_digest(parse_model(once)), model_digest(m)) << r;
  }
}

TEST(ModelParse, DimensionErrorCarriesPath) {
  Json doc = cbit_doc();
  doc["group"]["elements"][1]["matrices"]["A"] = Json::array({Json::array({0, 1, 0}), Json::array({1, 0, 0})});
  const ModelIssue i = first_issue(doc);
  EXPECT_EQ(i.code, ErrorCode::DimensionError);
  EXPECT_EQ(i.path, "group.elements[1].matrices.A");
}

TEST(ModelParse, SchemaErrors) {
  Json doc = cbit_doc();
  doc.erase("schema");
  EXPECT_EQ(first_issue(doc).code, ErrorCode::SchemaError);
  EXPECT_EQ(first_issue(doc).path, "schema");

  doc = cbit_doc();
  doc["schema"] = "twirlab/0";
  EXPECT_EQ(first_issue(doc).code, ErrorCode::SchemaError);

  doc = cbit_doc();
  doc["systems"][0]["colour"] = "red";
  EXPECT_TRUE(has_issue(doc, ErrorCode::SchemaError, "systems[0].colour"));

  doc = cbit_doc();
  doc["systems"][0]["states"][1][0] = "0.5x";
  EXPECT_TRUE(has_issue(doc, ErrorCode::SchemaError, "systems[0].states[1][0]"));

  doc = cbit_doc();
  doc["composites"][0]["parts"][1] = "Z";
  EXPECT_TRUE(has_issue(doc, ErrorCode::SchemaError, "composites[0].parts[1]"));

  doc = cbit_doc();
  doc["systems"][1]["id"] = "A";
  EXPECT_TRUE(has_issue(doc, ErrorCode::SchemaError, "systems[1].id"));

  EXPECT_EQ(error_of_parse("{not json"), ErrorCode::SchemaError);
}

TEST(ModelParse, ReportsSeveralIssues) {
  Json doc = cbit_doc();
  doc["systems"][0]["colour"] = "red";
  doc["systems"][1]["unit"] = Json::array({1, 1, 1});
  try {
    parse_model(doc.dump());
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_GE(e.issues().size(), 2u);
    const std::string what = e.what();
    EXPECT_NE(what.find("systems[0].colour"), std::string::npos);
    EXPECT_NE(what.find("systems[1].unit"), std::string::npos);
  }
}

TEST(ModelParse, DecimalStringsAreExact) {
  Json doc = cbit_doc();
  doc["systems"][0]["states"] = Json::array({Json::array({"0.25", "0.75"}), Json::array({"1", "0"})});
  const ModelSpec m = parse_model(doc.dump());
  EXPECT_EQ(m.systems[0].states(0, 0), 0.25);
  EXPECT_EQ(m.systems[0].states(1, 0), 0.75);
}

TEST(ModelParse, UnknownBuiltinAndIo) {
  try {
    load_model("builtin:qutrit_magic");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownBuiltin);
  }
  try {
    load_model(kSource + "/models/does_not_exist.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
  Json doc = cbit_doc();
  doc["group"] = {{"kind", "builtin"}, {"name", "so3_magic"}};
  EXPECT_EQ(first_issue(doc).code, ErrorCode::UnknownBuiltin);
}

TEST(ModelParse, ActionErrorsSurfaceAtInstantiate) {
  Json doc = cbit_doc();
  // drop the identity: {flip} alone is not closed
  doc["group"]["elements"].erase(0);
  const ModelSpec m = parse_model(doc.dump());
  try {
    instantiate(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAGroup);
  }
}

TEST(CanonicalJson, Numbers) {
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(canonical_json(Json{{"b", 1}, {"a", Json::array({1.5, 2})}}, false), R"({"a":[1.5,2],"b":1})");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Report, DeterministicAndDigest) {
  const ModelSpec m = make_world(parse_recipe("cbit_bitflip"));
  const AnalysisReport a = run_analysis(m);
  const AnalysisReport b = run_analysis(m);
  EXPECT_EQ(emit_report(a, ReportFormat::Json), emit_report(b, ReportFormat::Json));
  EXPECT_EQ(emit_report(a, ReportFormat::Text), emit_report(b, ReportFormat::Text));
  EXPECT_EQ(a.digest(), sha256_hex(a.model_digest + "\n" + tool_version()));

  ModelSpec renamed = m;
  renamed.note = "same world, new note";
  const AnalysisReport c = run_analysis(renamed, kStageValidate);
  EXPECT_NE(c.model_digest, a.model_digest);
  EXPECT_NE(c.digest(), a.digest());

  // the digest ignores which stages ran
  EXPECT_EQ(run_analysis(m, kStageValidate).digest(), a.digest());
}

TEST(Report, CbitTextLines) {
  const AnalysisReport r = run_analysis(make_world(parse_recipe("cbit_bitflip")));
  const std::string text = emit_report(r, ReportFormat::Text);
  EXPECT_NE(text.find("\nK_A=1\nK_B=1\nK_AB=2\n"), std::string::npos);
  EXPECT_NE(text.find("verdict: fails locality"), std::string::npos);
  EXPECT_EQ(text.find("\x1b["), std::string::npos);
  EXPECT_NE(emit_report(r, ReportFormat::Text, true).find("\x1b["), std::string::npos);
  EXPECT_TRUE(checks_pass(r));

  const Json j = report_json(r);
  EXPECT_EQ(j["k_table"]["K_A"], 1);
  EXPECT_EQ(j["k_table"]["K_AB"], 2);
  EXPECT_EQ(j["verdict"]["status"], "fails locality");
  EXPECT_EQ(j["digest"], r.digest());
}

TEST(Report, TrivialGroup) {
  ModelSpec m = make_world(parse_recipe("cbit_bitflip"));
  m.group.elements.resize(1);
  const AnalysisReport r = run_analysis(m);
  EXPECT_TRUE(r.trivial_action);
  EXPECT_EQ(r.verdict_text, "locality holds trivially");
  EXPECT_EQ(r.ubiquity.status, "TrivialAction");
  EXPECT_EQ(r.k.k_ab, 4);
  EXPECT_TRUE(checks_pass(r));
  EXPECT_NE(emit_report(r, ReportFormat::Text).find("verdict: locality holds trivially"), std::string::npos);
}

TEST(Report, SingleSystemIsNotBipartite) {
  const AnalysisReport r = run_analysis(make_world(parse_recipe("bosonic_u1?N=2&modes=1")));
  EXPECT_FALSE(r.bipartite);
  EXPECT_EQ(r.verdict_text, "not applicable");
  EXPECT_EQ(r.k.k_a, 3);
}

TEST(Report, BosonicRestrictedCount) {
  const AnalysisReport r = run_analysis(make_world(parse_recipe("bosonic_u1?N=2")), kStageWorlds);
  EXPECT_EQ(r.k.k_ab, 19);
  ASSERT_TRUE(r.k.restricted_k_ab.has_value());
  EXPECT_EQ(*r.k.restricted_k_ab, 14);
  EXPECT_NE(emit_report(r, ReportFormat::Text).find("K_AB on total number <= 2: 14"), std::string::npos);
}

TEST(Report, Golden) {
  const bool update = std::getenv("TWIRLAB_UPDATE_GOLDEN") != nullptr;
  const std::pair<const char*, const char*> cases[] = {
      {"cbit_bitflip", "cbit_bitflip"},
      {"spinor_su2?n=2", "spinor_su2_n2"},
      {"boxworld_reflection", "boxworld_reflection"},
  };
  for (const auto& [recipe, file] : cases) {
    const AnalysisReport r = run_analysis(make_world(parse_recipe(recipe)));
    const std::string json = emit_report(r, ReportFormat::Json);
    const std::string text = emit_report(r, ReportFormat::Text);
    const std::string base = kSource + "/tests/golden/" + file;
    if (update) {
      std::ofstream(base + ".json", std::ios::binary) << json;
      std::ofstream(base + ".txt", std::ios::binary) << text;
      continue;
    }
    const std::string want_json = slurp(base + ".json");
    const std::string want_text = slurp(base + ".txt");
    ASSERT_FALSE(want_json.empty()) << base << ".json missing";
    expect_close(Json::parse(json), Json::parse(want_json), file);
    EXPECT_EQ(mask_tiny(text), mask_tiny(want_text)) << file;
  }
}
