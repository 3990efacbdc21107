#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "monodromy/theta.hpp"
#include "monodromy_lab/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("monodromy-lab");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = monodromy::lab::run(static_cast<int>(argv.size()),
                                       argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path unique_dir(const std::string& tag) {
  const fs::path dir =
      fs::temp_directory_path() / ("monodromy_cli_" + tag);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string data_file(const char* name) {
  return std::string(TEST_DATA_DIR) + "/" + name;
}

// Validates a document against the subset of JSON Schema the shipped schema
// uses: $ref into definitions, type, const, enum, required, properties,
// additionalProperties: false, items, minItems/maxItems, numeric bounds.
void check_schema(const json& schema, const json& doc, const json& root,
                  const std::string& where) {
  CAPTURE(where);
  if (schema.contains("$ref")) {
    const std::string ref = schema["$ref"].get<std::string>();
    REQUIRE_EQ(ref.rfind("#/definitions/", 0), 0u);
    check_schema(root["definitions"][ref.substr(14)], doc, root, where);
    return;
  }
  if (schema.contains("const")) CHECK_EQ(doc, schema["const"]);
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& v : schema["enum"]) found = found || doc == v;
    CHECK(found);
  }
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    if (t == "object") CHECK(doc.is_object());
    else if (t == "array") CHECK(doc.is_array());
    else if (t == "string") CHECK(doc.is_string());
    else if (t == "integer") CHECK(doc.is_number_integer());
    else if (t == "number") CHECK(doc.is_number());
    else if (t == "boolean") CHECK(doc.is_boolean());
  }
  if (schema.contains("minimum"))
    CHECK_GE(doc.get<double>(), schema["minimum"].get<double>());
  if (schema.contains("exclusiveMinimum"))
    CHECK_GT(doc.get<double>(), schema["exclusiveMinimum"].get<double>());
  if (schema.contains("exclusiveMaximum"))
    CHECK_LT(doc.get<double>(), schema["exclusiveMaximum"].get<double>());
  if (schema.contains("required"))
    for (const auto& k : schema["required"])
      CHECK(doc.contains(k.get<std::string>()));
  if (doc.is_object() && schema.contains("properties")) {
    const bool closed = schema.contains("additionalProperties") &&
                        schema["additionalProperties"].is_boolean() &&
                        !schema["additionalProperties"].get<bool>();
    for (const auto& [key, val] : doc.items()) {
      if (schema["properties"].contains(key))
        check_schema(schema["properties"][key], val, root, where + "." + key);
      else if (closed)
        FAIL_CHECK("unexpected key " << key << " at " << where);
      else if (schema.contains("additionalProperties") &&
               schema["additionalProperties"].is_object())
        check_schema(schema["additionalProperties"], val, root,
                     where + "." + key);
    }
  }
  if (doc.is_array()) {
    if (schema.contains("minItems"))
      CHECK_GE(doc.size(), schema["minItems"].get<std::size_t>());
    if (schema.contains("maxItems"))
      CHECK_LE(doc.size(), schema["maxItems"].get<std::size_t>());
    if (schema.contains("items") && schema["items"].is_object()) {
      std::size_t idx = 0;
      for (const auto& v : doc)
        check_schema(schema["items"], v, root,
                     where + "[" + std::to_string(idx++) + "]");
    }
  }
}

} // namespace

TEST_CASE("verify passes with default tolerances") {
  const CliResult r = run_cli({"verify"});
  CHECK_EQ(r.code, 0);
  CHECK_NE(r.out.find("jacobi"), std::string::npos);
  CHECK_NE(r.out.find("carlson"), std::string::npos);
  CHECK_EQ(r.out.find("false"), std::string::npos);
}

TEST_CASE("verify fails under an impossible tolerance override") {
  const CliResult r = run_cli({"verify", "--tol", "jacobi=1e-20"});
  CHECK_EQ(r.code, 1);
  CHECK_NE(r.err.find("jacobi"), std::string::npos);
}

TEST_CASE("verify rejects unknown tolerance names") {
  const CliResult r = run_cli({"verify", "--tol", "jacobian=1e-6"});
  CHECK_EQ(r.code, 2);
  const CliResult s = run_cli({"verify", "--tol", "jacobi"});
  CHECK_EQ(s.code, 2);
}

TEST_CASE("verify json report carries every check") {
  const CliResult r = run_cli({"verify", "--format", "json"});
  CHECK_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  CHECK_EQ(doc["schema"], 1);
  CHECK_EQ(doc["kind"], "verify_report");
  CHECK_EQ(doc["checks"].size(),
           monodromy::lab::default_tolerances().size());
  CHECK(doc["all_pass"].get<bool>());
  for (const auto& c : doc["checks"]) CHECK(c["pass"].get<bool>());
}

TEST_CASE("usage errors exit with code 2") {
  CHECK_EQ(run_cli({}).code, 2);
  CHECK_EQ(run_cli({"frobnicate"}).code, 2);
  CHECK_EQ(run_cli({"pendulum", "--samples", "300"}).code, 2);
  CHECK_EQ(run_cli({"pendulum", "--samples", "128"}).code, 2);
  CHECK_EQ(run_cli({"pendulum", "--epsilon", "0.2"}).code, 2);
  CHECK_EQ(run_cli({"pendulum", "--epsilon", "0"}).code, 2);
  CHECK_EQ(run_cli({"pendulum", "--turns", "0"}).code, 2);
  CHECK_EQ(run_cli({"pendulum", "--center", "0.3"}).code, 2);
  CHECK_EQ(run_cli({"pendulum", "--format", "xml"}).code, 2);
  CHECK_EQ(run_cli({"braid"}).code, 2);
  CHECK_EQ(run_cli({"curve", "--g2", "4"}).code, 2);
  CHECK_EQ(run_cli({"--help"}).code, 0);
}

TEST_CASE("pendulum certificate reports the focus-focus monodromy") {
  const CliResult r = run_cli({"pendulum", "--samples", "512",
                               "--format", "json"});
  REQUIRE_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  CHECK_EQ(doc["kind"], "certificate_report");
  CHECK_EQ(doc["certificate"]["m"], 1);
  CHECK_LT(std::abs(doc["certificate"]["delta_theta_hat"].get<double>() + 1.0),
           5e-3);
  CHECK_EQ(doc["certificate"]["classical_matrix"],
           json::parse("[[1,1],[0,1]]"));
  CHECK_EQ(doc["certificate"]["quantum_matrix"],
           json::parse("[[1,0],[-1,1]]"));
  CHECK_EQ(doc["config"]["samples"], 512);
}

TEST_CASE("pendulum emitted certificate validates against the shipped schema") {
  const CliResult r = run_cli({"pendulum", "--samples", "256",
                               "--format", "json"});
  REQUIRE_EQ(r.code, 0);
  const json schema =
      json::parse(slurp(fs::path(TEST_SCHEMA_DIR) / "certificate_report.schema.json"));
  const json doc = json::parse(r.out);
  check_schema(schema, doc, schema, "$");
}

TEST_CASE("pendulum certificate round-trips losslessly") {
  const CliResult r = run_cli({"pendulum", "--samples", "256",
                               "--format", "json"});
  REQUIRE_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  const json again = json::parse(doc.dump());
  CHECK_EQ(doc, again);
  CHECK_EQ(again["certificate"]["delta_theta_hat"].get<double>(),
           doc["certificate"]["delta_theta_hat"].get<double>());
  CHECK_EQ(again["provenance"]["max_step"].get<double>(),
           doc["provenance"]["max_step"].get<double>());
}

TEST_CASE("non-enclosing center certifies zero monodromy") {
  const CliResult r = run_cli({"pendulum", "--center", "0.3,0.5",
                               "--samples", "256", "--format", "json"});
  REQUIRE_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  CHECK_EQ(doc["certificate"]["m"], 0);
  CHECK_LT(std::abs(doc["certificate"]["delta_theta_hat"].get<double>()),
           5e-3);
}

TEST_CASE("pendulum trace artifacts are atomic, exact, and deterministic") {
  const fs::path dir = unique_dir("pendulum");
  const fs::path trace = dir / "trace.csv";
  const CliResult r1 = run_cli({"pendulum", "--samples", "256", "--out",
                                trace.string()});
  REQUIRE_EQ(r1.code, 0);
  REQUIRE(fs::exists(trace));
  REQUIRE(fs::exists(dir / "trace.csv.cert.json"));
  CHECK_FALSE(fs::exists(dir / "trace.csv.tmp"));
  const std::string body = slurp(trace);
  CHECK_EQ(body.substr(0, body.find('\n')),
           "t,j,h,x_minus,x_plus,x_zero,theta_raw,T,theta_hat_unwrapped");
  // 256 samples + closure row + header.
  CHECK_EQ(static_cast<int>(std::count(body.begin(), body.end(), '\n')), 258);
  const std::string cert1 = slurp(dir / "trace.csv.cert.json");
  const json doc = json::parse(cert1);
  CHECK_EQ(doc["certificate"]["m"], 1);

  const fs::path trace2 = dir / "trace2.csv";
  const CliResult r2 = run_cli({"pendulum", "--samples", "256", "--out",
                                trace2.string()});
  REQUIRE_EQ(r2.code, 0);
  CHECK_EQ(body, slurp(trace2));
  CHECK_EQ(cert1, slurp(dir / "trace2.csv.cert.json"));

  // Fan-out must not change a single byte.
  setenv("MONODROMY_LAB_THREADS", "2", 1);
  const fs::path trace3 = dir / "trace3.csv";
  const CliResult r3 = run_cli({"pendulum", "--samples", "256", "--out",
                                trace3.string()});
  unsetenv("MONODROMY_LAB_THREADS");
  REQUIRE_EQ(r3.code, 0);
  CHECK_EQ(body, slurp(trace3));
  fs::remove_all(dir);
}

TEST_CASE("thread environment variable is validated") {
  setenv("MONODROMY_LAB_THREADS", "abc", 1);
  const int code = run_cli({"verify"}).code;
  unsetenv("MONODROMY_LAB_THREADS");
  CHECK_EQ(code, 2);
}

TEST_CASE("json trace table carries rows and closure") {
  const fs::path dir = unique_dir("jsontrace");
  const fs::path trace = dir / "trace.json";
  const CliResult r = run_cli({"pendulum", "--samples", "256", "--format",
                               "json", "--out", trace.string()});
  REQUIRE_EQ(r.code, 0);
  const json doc = json::parse(slurp(trace));
  CHECK_EQ(doc["kind"], "circuit_trace");
  CHECK_EQ(doc["rows"].size(), 256u);
  CHECK_EQ(doc["columns"].size(), 9u);
  CHECK_EQ(doc["closure"].size(), 9u);
  CHECK_LT(std::abs(doc["delta_theta_hat"].get<double>() + 1.0), 5e-3);
  fs::remove_all(dir);
}

TEST_CASE("braid subcommand tracks the bundled loops") {
  const CliResult c2 = run_cli({"braid", "--loop", data_file("loop_c2.txt")});
  CHECK_EQ(c2.code, 0);
  CHECK_NE(c2.out.find("word,s2"), std::string::npos);
  CHECK_NE(c2.out.find("permutation,0 2 1"), std::string::npos);
  CHECK_NE(c2.out.find("matrix,[[1,1],[0,1]]"), std::string::npos);

  const CliResult id =
      run_cli({"braid", "--loop", data_file("loop_identity.txt")});
  CHECK_EQ(id.code, 0);
  CHECK_NE(id.out.find("word,(empty)"), std::string::npos);
  CHECK_NE(id.out.find("permutation,0 1 2"), std::string::npos);

  // Undersampled near-critical loop: refined automatically, same braid.
  const CliResult nc =
      run_cli({"braid", "--loop", data_file("loop_near_critical.txt")});
  CHECK_EQ(nc.code, 0);
  CHECK_NE(nc.out.find("word,s2"), std::string::npos);
  CHECK_EQ(nc.out.find("refinement_depth,0"), std::string::npos);
}

TEST_CASE("braid json report matches the csv content") {
  const CliResult r = run_cli({"braid", "--loop", data_file("loop_c2.txt"),
                               "--format", "json"});
  REQUIRE_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  CHECK_EQ(doc["kind"], "braid_report");
  CHECK_EQ(doc["word"], json::parse("[\"s2\"]"));
  CHECK_EQ(doc["permutation"], json::parse("[0,2,1]"));
  CHECK_EQ(doc["matrix"], json::parse("[[1,1],[0,1]]"));
  CHECK_EQ(doc["det"], 1);
}

TEST_CASE("braid rejects corrupt loop files") {
  const fs::path dir = unique_dir("braid");
  const fs::path bad = dir / "bad.txt";
  std::ofstream(bad) << "t_count=16\n1 0 -3 oops\n";
  CHECK_EQ(run_cli({"braid", "--loop", bad.string()}).code, 2);
  std::ofstream(bad) << "not_a_header\n";
  CHECK_EQ(run_cli({"braid", "--loop", bad.string()}).code, 2);
  std::ofstream(bad) << "t_count=16\n1 0 -3 0.5\n";
  CHECK_EQ(run_cli({"braid", "--loop", bad.string()}).code, 2); // short file
  std::ofstream(bad) << "t_count=4\n1 0 -3 0.5\n1 0 -3 0.5\n1 0 -3 0.5\n1 0 -3 0.5\n";
  CHECK_EQ(run_cli({"braid", "--loop", bad.string()}).code, 2); // too few
  CHECK_EQ(run_cli({"braid", "--loop", (dir / "absent.txt").string()}).code,
           2);
  fs::remove_all(dir);
}

TEST_CASE("gate subcommand prints powers and the theta residual") {
  const CliResult r = run_cli({"gate", "--m", "1"});
  REQUIRE_EQ(r.code, 0);
  CHECK_NE(r.out.find("classical,[[1,1],[0,1]]"), std::string::npos);
  CHECK_NE(r.out.find("quantum,[[1,0],[-1,1]]"), std::string::npos);
  // Residual row parses and is tiny.
  const auto pos = r.out.find("residual,");
  REQUIRE_NE(pos, std::string::npos);
  CHECK_LT(std::stod(r.out.substr(pos + 9)), 1e-12);

  const CliResult id = run_cli({"gate", "--m", "4", "--format", "json"});
  REQUIRE_EQ(id.code, 0);
  const json doc = json::parse(id.out);
  CHECK_EQ(doc["gate"], json::parse("[[[1,0],[0,0]],[[0,0],[1,0]]]"));
  CHECK_LT(doc["residual"].get<double>(), 1e-11);

  CHECK_EQ(run_cli({"gate"}).code, 2);
  CHECK_EQ(run_cli({"gate", "--m", "9"}).code, 2);
  CHECK_EQ(run_cli({"gate", "--m", "-9"}).code, 2);
}

TEST_CASE("gate consumes a certificate produced by pendulum") {
  const fs::path dir = unique_dir("gatecert");
  const fs::path trace = dir / "t.csv";
  REQUIRE_EQ(run_cli({"pendulum", "--samples", "256", "--out",
                      trace.string()})
                 .code,
             0);
  const CliResult direct = run_cli({"gate", "--m", "1"});
  const CliResult from_cert =
      run_cli({"gate", "--certificate", (dir / "t.csv.cert.json").string()});
  REQUIRE_EQ(from_cert.code, 0);
  CHECK_EQ(direct.out, from_cert.out);
  std::ofstream(dir / "bad.json") << "{\"certificate\":{}}";
  CHECK_EQ(run_cli({"gate", "--certificate", (dir / "bad.json").string()})
               .code,
           2);
  std::ofstream(dir / "notjson.json") << "][";
  CHECK_EQ(run_cli({"gate", "--certificate", (dir / "notjson.json").string()})
               .code,
           2);
  fs::remove_all(dir);
}

TEST_CASE("curve subcommand reports periods and residuals") {
  const CliResult r = run_cli({"curve", "--g2", "4", "--g3", "1"});
  REQUIRE_EQ(r.code, 0);
  CHECK_NE(r.out.find("omega,1.225694690993"), std::string::npos);
  CHECK_NE(r.out.find("k2,0.2920571850644"), std::string::npos);
  const CliResult degenerate = run_cli({"curve", "--g2", "3", "--g3", "1"});
  CHECK_EQ(degenerate.code, 2);
  // One real root: report roots, skip the real-lattice block.
  const CliResult complex_pair =
      run_cli({"curve", "--g2", "0", "--g3", "-4", "--format", "json"});
  REQUIRE_EQ(complex_pair.code, 0);
  const json doc = json::parse(complex_pair.out);
  CHECK_FALSE(doc["three_real_roots"].get<bool>());
  CHECK_FALSE(doc.contains("omega"));
}

TEST_CASE("theta subcommand evaluates the function family") {
  const CliResult r = run_cli({"theta", "--z", "0.13,0.21", "--tau", "0.3,0.8",
                               "--format", "json"});
  REQUIRE_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  const monodromy::Complex want = monodromy::theta(
      monodromy::Complex{0.13, 0.21},
      monodromy::ModularParameter(monodromy::Complex{0.3, 0.8}));
  // 17-significant-digit serialization must round-trip to the same double.
  CHECK_EQ(doc["theta"][0].get<double>(), want.real());
  CHECK_EQ(doc["theta"][1].get<double>(), want.imag());
  const monodromy::Complex lv = monodromy::level_theta(
      3, 1, monodromy::Complex{0.13, 0.21},
      monodromy::ModularParameter(monodromy::Complex{0.3, 0.8}));
  const CliResult rl = run_cli({"theta", "--z", "0.13,0.21", "--tau",
                                "0.3,0.8", "--level", "3", "--index", "1",
                                "--format", "json"});
  REQUIRE_EQ(rl.code, 0);
  const json dl = json::parse(rl.out);
  CHECK_EQ(dl["level_theta"][0].get<double>(), lv.real());
  CHECK_EQ(dl["level_theta"][1].get<double>(), lv.imag());
  CHECK_EQ(run_cli({"theta", "--z", "0,0", "--tau", "0,0.01"}).code, 2);
  CHECK_EQ(run_cli({"theta", "--z", "0", "--tau", "0,1"}).code, 2);
  CHECK_EQ(run_cli({"theta", "--z", "0,0", "--tau", "0,1", "--level", "19"})
               .code,
           2);
}

TEST_CASE("reports can be redirected to files atomically") {
  const fs::path dir = unique_dir("redirect");
  const fs::path out = dir / "verify.json";
  const CliResult r = run_cli({"verify", "--format", "json", "--out",
                               out.string()});
  CHECK_EQ(r.code, 0);
  const json doc = json::parse(slurp(out));
  CHECK(doc["all_pass"].get<bool>());
  CHECK_FALSE(fs::exists(dir / "verify.json.tmp"));
  fs::remove_all(dir);
}
