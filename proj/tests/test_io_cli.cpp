#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "logos/errors.hpp"
#include "logos/io.hpp"
#include "test_helpers.hpp"

using namespace logos;
using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(LOGOS_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult res{-1, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string data(const std::string& name) { return std::string(LOGOS_DATA_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

// Validates a document against the subset of JSON Schema the bundled
// schemas use: type / enum / required / properties / items / bounds.
void validate(const json& doc, const json& schema, const std::string& where) {
  INFO("at ", where);
  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& v : schema["enum"])
      if (v == doc) hit = true;
    CHECK(hit);
  }
  if (schema.contains("type")) {
    const auto matches = [&](const std::string& t) {
      if (t == "object") return doc.is_object();
      if (t == "array") return doc.is_array();
      if (t == "string") return doc.is_string();
      if (t == "number") return doc.is_number();
      if (t == "integer") return doc.is_number_integer() || doc.is_number_unsigned();
      if (t == "boolean") return doc.is_boolean();
      if (t == "null") return doc.is_null();
      return false;
    };
    bool ok = false;
    if (schema["type"].is_string()) {
      ok = matches(schema["type"].get<std::string>());
    } else {
      for (const auto& t : schema["type"])
        if (matches(t.get<std::string>())) ok = true;
    }
    CHECK(ok);
    if (!ok) return;
  }
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"]) {
        INFO("required key ", key.get<std::string>());
        CHECK(doc.contains(key.get<std::string>()));
      }
    if (schema.contains("properties"))
      for (const auto& [key, sub] : schema["properties"].items())
        if (doc.contains(key)) validate(doc.at(key), sub, where + "." + key);
  }
  if (doc.is_array() && schema.contains("items")) {
    if (schema.contains("minItems")) CHECK(doc.size() >= schema["minItems"].get<std::size_t>());
    if (schema.contains("maxItems")) CHECK(doc.size() <= schema["maxItems"].get<std::size_t>());
    for (std::size_t i = 0; i < doc.size(); ++i)
      validate(doc[i], schema["items"], where + "[" + std::to_string(i) + "]");
  }
}

void validate_against(const json& doc, const std::string& schema_name) {
  const json schema = io::parse_json_file(data("schemas/" + schema_name));
  validate(doc, schema, schema_name);
}

}  // namespace

// ---- io unit tests -----------------------------------------------------------

TEST_CASE("state json round trip") {
  const auto rho = testing::random_density({2, 2}, 2, 404);
  const auto parsed = io::state_from_json(io::state_to_json(rho));
  CHECK((parsed.matrix() - rho.matrix()).norm() == 0.0);
  CHECK(parsed.factor_dims() == rho.factor_dims());
}

TEST_CASE("state parsing names the offending field") {
  CHECK_THROWS_WITH_AS(io::state_from_json(json{{"foo", 1}}), doctest::Contains("matrix"),
                       ParseError);

  json nonsquare = json::parse(R"({"matrix": [[[1,0],[0,0]]]})");
  CHECK_THROWS_WITH_AS(io::state_from_json(nonsquare), doctest::Contains("square"), ParseError);

  json mismatch =
      json::parse(R"({"factor_dims": [3], "matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]})");
  CHECK_THROWS_WITH_AS(io::state_from_json(mismatch), doctest::Contains("factor_dims"),
                       ParseError);

  json badpair = json::parse(R"({"matrix": [[[1,0],[0]],[[0,0],[0,0]]]})");
  CHECK_THROWS_WITH_AS(io::state_from_json(badpair), doctest::Contains("matrix[0][1]"),
                       ParseError);
}

TEST_CASE("malformed json reports line and column") {
  try {
    io::parse_json_text("{\n  \"matrix\": [\n", "inline");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line >= 2);
    CHECK(e.column >= 1);
  }
}

TEST_CASE("projector sets reject mixed dimensions") {
  json mixed = json::parse(R"([[[1,0],[0,0]], [[1,0],[0,0],[0,0]]])");
  CHECK_THROWS_WITH_AS(io::projector_set_from_json(mixed), doctest::Contains("mixed"),
                       ValidationError);
}

TEST_CASE("settings files parse into dichotomic observables") {
  const auto s = io::load_setting(data("settings_canonical.json"));
  CHECK(s.a0.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(s.b0.matrix()(0, 1).real() == doctest::Approx(1.0 / std::numbers::sqrt2));
}

// ---- CLI integration -----------------------------------------------------------

TEST_CASE("cli classify: bundled fixtures hit the spec verdicts") {
  auto bell = run_cli("classify " + data("bell.json"));
  CHECK(bell.exit_code == 0);
  CHECK(bell.output.find("classification: Strong") != std::string::npos);

  auto corr = run_cli("classify " + data("classical_corr.json"));
  CHECK(corr.exit_code == 0);
  CHECK(corr.output.find("classification: Weak") != std::string::npos);

  auto prod = run_cli("classify " + data("product.json"));
  CHECK(prod.exit_code == 0);
  CHECK(prod.output.find("classification: Separable") != std::string::npos);

  auto sep = run_cli("classify " + data("sep_paper.json"));
  CHECK(sep.exit_code == 0);
  CHECK(sep.output.find("standard-separable") != std::string::npos);
}

TEST_CASE("cli classify json validates against the bundled schema") {
  auto res = run_cli("classify " + data("bell.json") + " --format json");
  REQUIRE(res.exit_code == 0);
  const json doc = json::parse(res.output);
  validate_against(doc, "classify_report.schema.json");
  CHECK(doc["verdict"]["classification"] == "Strong");
}

TEST_CASE("cli exit codes: parse, validation, unsupported") {
  const auto bad = write_temp("logos_bad.json", "{\"matrix\": [[[1,");
  auto parse = run_cli("classify " + bad);
  CHECK(parse.exit_code == 2);
  CHECK(parse.output.find(":1:") != std::string::npos);  // line/column diagnostic

  const auto nonpsd = write_temp("logos_nonpsd.json",
                                 R"({"factor_dims":[2,2],"matrix":[
    [[0.75,0],[0,0],[0,0],[0.5,0]],
    [[0,0],[0,0],[0,0],[0,0]],
    [[0,0],[0,0],[0,0],[0,0]],
    [[0.5,0],[0,0],[0,0],[0.25,0]]]})");
  auto validation = run_cli("classify " + nonpsd);
  CHECK(validation.exit_code == 3);
  CHECK(validation.output.find("positive semidefinite") != std::string::npos);

  // Two non-orthogonal qubit vectors: no identity-resolving context.
  const double s = 1.0 / std::numbers::sqrt2;
  json degenerate = json::array();
  degenerate.push_back(json::parse(R"([[1,0],[0,0]])"));
  degenerate.push_back(json{{s, 0.0}, {s, 0.0}});
  const auto unsupported = write_temp("logos_unsupported.json", degenerate.dump());
  auto ks = run_cli("ks " + unsupported);
  CHECK(ks.exit_code == 4);
}

TEST_CASE("cli ks: fixture exhaustion and single-basis valuation") {
  auto cabello = run_cli("ks " + data("cabello18.json"));
  CHECK(cabello.exit_code == 0);
  CHECK(cabello.output.find("no global binary valuation") != std::string::npos);
  CHECK(cabello.output.find("parity cross-check") != std::string::npos);

  auto basis = run_cli("ks " + data("basis_z2.json"));
  CHECK(basis.exit_code == 0);
  CHECK(basis.output.find("valuation found") != std::string::npos);

  json mixed = json::parse(R"([[[1,0],[0,0]], [[1,0],[0,0],[0,0]]])");
  auto mixed_res = run_cli("ks " + write_temp("logos_mixed.json", mixed.dump()));
  CHECK(mixed_res.exit_code == 3);

  auto ks_json = run_cli("ks " + data("cabello18.json") + " --format json");
  REQUIRE(ks_json.exit_code == 0);
  const json doc = json::parse(ks_json.output);
  validate_against(doc, "ks_result.schema.json");
  CHECK(doc["valuation_exists"] == false);
  CHECK(doc["constraint_contexts"] == 9);
}

TEST_CASE("cli chsh: optimal, bounded products, reproducible runs") {
  auto opt = run_cli("chsh " + data("bell.json") + " --optimal");
  CHECK(opt.exit_code == 0);
  CHECK(opt.output.find("2.8284271247") != std::string::npos);
  CHECK(opt.output.find("violated") != std::string::npos);

  auto prod = run_cli("chsh " + data("product.json") + " --settings " +
                      data("settings_canonical.json"));
  CHECK(prod.exit_code == 0);
  CHECK(prod.output.find("satisfied") != std::string::npos);

  const std::string run_args =
      "chsh " + data("bell.json") + " --optimal --shots 100000 --seed 7";
  auto first = run_cli(run_args);
  auto second = run_cli(run_args);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);

  auto js = run_cli("chsh " + data("bell.json") + " --optimal --shots 2000 --seed 3"
                    " --format json");
  REQUIRE(js.exit_code == 0);
  const json doc = json::parse(js.output);
  validate_against(doc, "chsh_result.schema.json");
  CHECK(doc["run"]["shots"] == 2000);

  auto csv = run_cli("chsh " + data("bell.json") + " --optimal --shots 500 --seed 3"
                     " --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.output.rfind("setting,outcome,count", 0) == 0);

  auto neither = run_cli("chsh " + data("bell.json"));
  CHECK(neither.exit_code == 3);
}

TEST_CASE("cli psa: tables, sums, schema") {
  auto mixed = run_cli("psa " + data("qubit_mixed.json") + " " + data("basis_z2.json"));
  CHECK(mixed.exit_code == 0);
  CHECK(mixed.output.find("node_index,vector_fingerprint,potentia") != std::string::npos);
  CHECK(mixed.output.find("context_nodes,resolves_identity,potentia_sum") != std::string::npos);

  auto bell = run_cli("psa " + data("bell.json") + " " + data("product_basis_2x2.json") +
                      " --format json");
  REQUIRE(bell.exit_code == 0);
  const json doc = json::parse(bell.output);
  validate_against(doc, "psa_dump.schema.json");
  CHECK(doc["nodes"][0]["potentia"].get<double>() == doctest::Approx(0.5));
  CHECK(doc["nodes"][1]["potentia"].get<double>() == doctest::Approx(0.0));
  CHECK(doc["nodes"][2]["potentia"].get<double>() == doctest::Approx(0.0));
  CHECK(doc["nodes"][3]["potentia"].get<double>() == doctest::Approx(0.5));
  CHECK(doc["contexts"][0]["potentia_sum"].get<double>() == doctest::Approx(1.0));

  auto mismatch = run_cli("psa " + data("bell.json") + " " + data("basis_z2.json"));
  CHECK(mismatch.exit_code == 3);
}

TEST_CASE("cli reconstruct: round trip and rank deficit") {
  auto ok = run_cli("reconstruct " + data("psa_example.json") + " --format json");
  REQUIRE(ok.exit_code == 0);
  const json doc = json::parse(ok.output);
  validate_against(doc, "reconstruct_result.schema.json");
  CHECK(doc["residual"].get<double>() < 1e-8);
  validate_against(doc["state"], "state.schema.json");

  // A single basis is informationally incomplete.
  json incomplete{{"projector_file", "basis_z2.json"}, {"values", {0.5, 0.5}}};
  const auto path = data("..") + "/data/psa_incomplete_tmp.json";
  std::ofstream(path) << incomplete.dump();
  auto deficit = run_cli("reconstruct " + path);
  CHECK(deficit.exit_code == 4);
  CHECK(deficit.output.find("deficit") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("cli psa dump feeds reconstruct") {
  auto dump = run_cli("psa " + data("qubit_mixed.json") + " " + data("mub_dim2.json") +
                      " --format json");
  REQUIRE(dump.exit_code == 0);
  const json doc = json::parse(dump.output);
  json psa_file{{"projector_file", "mub_dim2.json"}, {"values", json::array()}};
  for (const auto& node : doc["nodes"]) psa_file["values"].push_back(node["potentia"]);
  const auto path = data("psa_roundtrip_tmp.json");
  std::ofstream(path) << psa_file.dump();
  auto rec = run_cli("reconstruct " + path + " --format json");
  std::filesystem::remove(path);
  REQUIRE(rec.exit_code == 0);
  const json out = json::parse(rec.output);
  const auto rho = io::state_from_json(out["state"]);
  const auto original = io::load_state(data("qubit_mixed.json"));
  CHECK(trace_distance(rho, original) < 1e-8);
}
