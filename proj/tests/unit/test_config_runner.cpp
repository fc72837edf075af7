#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <doctest.h>

#include "coe/config.hpp"
#include "coe/errors.hpp"
#include "coe/runner.hpp"

using coe::Json;

namespace fs = std::filesystem;

namespace {

Json scalar_document(const std::string& scenario)
{
  return Json::parse(R"({
    "scenario": ")" + scenario + R"(",
    "seed": 4,
    "problem": {
      "symbols": {"order": 2, "b": [0, 0, -1], "nu": 1},
      "operator": {"kind": "dense-matrix", "value": 1},
      "grid": {"half_width": 16, "n": 64}
    }
  })");
}

fs::path scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("coe_runner_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string config_error_message(const Json& doc)
{
  try {
    coe::parse_config(doc);
  } catch (const coe::ConfigError& err) {
    return err.what();
  }
  return {};
}

} // namespace

TEST_CASE("preset catalog")
{
  const auto& presets = coe::builtin_scenarios();
  std::set<std::string> names;
  for (const coe::Preset& p : presets) {
    names.insert(p.name);
    INFO("preset " << p.name);
    CHECK_NOTHROW(coe::parse_config(p.config));
  }
  for (const char* expected : {"example-4.3", "problem-3.7", "example-4.4", "problem-4.6"}) {
    CHECK(names.count(expected) == 1);
  }
  const coe::ScenarioConfig p46 = coe::parse_config(coe::find_preset("problem-4.6").config);
  CHECK(p46.symbols.order == 4);
  CHECK(p46.p == 2.0);
  CHECK(p46.scenario == coe::Scenario::SolveElliptic);
  CHECK(coe::find_preset("problem-3.7").config["problem"]["operator"]["kind"] == "periodic-sturm-liouville");
  CHECK_THROWS_AS(coe::find_preset("nope"), coe::ConfigError);
}

TEST_CASE("strict schema names the offending key")
{
  Json doc = scalar_document("solve-linear");
  doc["forcing"] = Json{{"kind", "cosine"}};
  doc["lamda"] = 1;
  const std::string msg = config_error_message(doc);
  CHECK(msg.find("lamda") != std::string::npos);

  Json nested = scalar_document("solve-linear");
  nested["forcing"] = Json{{"kind", "cosine"}};
  nested["lambda"] = 1;
  nested["problem"]["grid"]["nn"] = 3;
  CHECK(config_error_message(nested).find("$.problem.grid") != std::string::npos);

  Json bad_type = scalar_document("solve-linear");
  bad_type["forcing"] = Json{{"kind", "cosine"}};
  bad_type["lambda"] = "one";
  CHECK(config_error_message(bad_type).find("$.lambda") != std::string::npos);

  Json bad_grid = scalar_document("check-condition");
  bad_grid["problem"]["grid"]["n"] = 100;
  CHECK(!config_error_message(bad_grid).empty());

  Json missing = scalar_document("solve-linear");
  CHECK(!config_error_message(missing).empty());

  Json bad_scenario = scalar_document("check-condition");
  bad_scenario["scenario"] = "solve";
  CHECK(config_error_message(bad_scenario).find("$.scenario") != std::string::npos);
}

TEST_CASE("complex values accept numbers and pairs")
{
  Json doc = scalar_document("lambda-sweep");
  doc["forcing"] = Json{{"kind", "cosine"}};
  doc["lambdas"] = Json::array({1, Json::array({3, -4})});
  const coe::ScenarioConfig cfg = coe::parse_config(doc);
  REQUIRE(cfg.lambdas.size() == 2);
  CHECK(cfg.lambdas[1] == coe::Complex(3.0, -4.0));
}

TEST_CASE("config hash is stable")
{
  const Json doc = scalar_document("check-condition");
  const std::string h = coe::config_hash(doc);
  CHECK(h.size() == 16);
  CHECK(h == coe::config_hash(Json::parse(doc.dump())));
  Json other = doc;
  other["seed"] = 5;
  CHECK(h != coe::config_hash(other));
}

TEST_CASE("exit codes")
{
  CHECK(coe::exit_code_for(coe::ConfigError("x")) == 2);
  CHECK(coe::exit_code_for(coe::ConditionFailed("x")) == 4);
  CHECK(coe::exit_code_for(coe::ConditionNotChecked("x")) == 4);
  CHECK(coe::exit_code_for(coe::SingularResolvent("x")) == 3);
  CHECK(coe::exit_code_for(coe::BlowUp("x")) == 3);
}

TEST_CASE("check-condition scenario reports passing clauses")
{
  const fs::path dir = scratch("condition");
  const coe::RunOutcome out = coe::run_scenario(coe::parse_config(coe::find_preset("example-4.3-condition").config), dir);
  REQUIRE(out.exit_code == 0);
  const Json report = Json::parse(slurp(dir / "condition.json"));
  CHECK(report["all_pass"] == true);
  for (const auto& flag : report["pass"]) {
    CHECK(flag == true);
  }
  CHECK(report["c_mu"].get<double>() == doctest::Approx(1.0));
  const Json manifest = Json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["status"] == "ok");
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(manifest.contains("timings"));
  CHECK(manifest["version"] == coe::kVersion);
}

TEST_CASE("failing condition exits with code 4")
{
  Json doc = scalar_document("check-condition");
  doc["problem"]["symbols"]["nu"] = 0;
  const fs::path dir = scratch("failing");
  const coe::RunOutcome out = coe::run_scenario(coe::parse_config(doc), dir);
  CHECK(out.exit_code == 4);
  CHECK(Json::parse(slurp(dir / "manifest.json"))["exit_code"] == 4);

  Json solve = scalar_document("solve-linear");
  solve["problem"]["symbols"]["nu"] = 0;
  solve["forcing"] = Json{{"kind", "cosine"}};
  solve["lambda"] = 1;
  CHECK(coe::run_scenario(coe::parse_config(solve), scratch("failing_solve")).exit_code == 4);
}

TEST_CASE("module errors exit with code 3 and carry the scenario")
{
  Json doc = scalar_document("solve-linear");
  doc["forcing"] = Json{{"kind", "cosine"}};
  doc["lambda"] = -1;
  const coe::RunOutcome out = coe::run_scenario(coe::parse_config(doc), scratch("numerical"));
  CHECK(out.exit_code == 3);
  CHECK(out.message.find("solve-linear") == 0);
}

TEST_CASE("lambda sweep writes one row per lambda")
{
  Json doc = scalar_document("lambda-sweep");
  doc["forcing"] = Json{{"kind", "random-bandlimited"}, {"modes", 6}};
  doc["lambdas"] = Json::array({1, 10, 100, 1000});
  const fs::path dir = scratch("sweep");
  REQUIRE(coe::run_scenario(coe::parse_config(doc), dir).exit_code == 0);
  std::ifstream in(dir / "sweep.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
  }
  CHECK(lines == 5);
}

TEST_CASE("every output is listed in the manifest and runs are byte-identical")
{
  for (const char* name : {"scalar-solve-linear", "gaussian-norms", "example-4.3-rbound"}) {
    const coe::ScenarioConfig cfg = coe::parse_config(coe::find_preset(name).config);
    const fs::path a = scratch(std::string(name) + "_a");
    const fs::path b = scratch(std::string(name) + "_b");
    const coe::RunOutcome ra = coe::run_scenario(cfg, a);
    const coe::RunOutcome rb = coe::run_scenario(cfg, b);
    REQUIRE(ra.exit_code == 0);
    std::set<std::string> listed(ra.outputs.begin(), ra.outputs.end());
    listed.insert("manifest.json");
    std::set<std::string> present;
    for (const auto& entry : fs::directory_iterator(a)) {
      present.insert(entry.path().filename().string());
    }
    CHECK(listed == present);
    for (const std::string& file : ra.outputs) {
      CHECK(slurp(a / file) == slurp(b / file));
    }
    Json ma = Json::parse(slurp(a / "manifest.json"));
    Json mb = Json::parse(slurp(b / "manifest.json"));
    ma.erase("timings");
    mb.erase("timings");
    CHECK(ma == mb);
  }
}

TEST_CASE("the seed drives random fields")
{
  Json doc = scalar_document("solve-linear");
  doc["forcing"] = Json{{"kind", "random-bandlimited"}, {"modes", 6}};
  doc["lambda"] = 1;
  const fs::path a = scratch("seed_a");
  const fs::path b = scratch("seed_b");
  coe::ScenarioConfig ca = coe::parse_config(doc);
  doc["seed"] = 99;
  coe::ScenarioConfig cb = coe::parse_config(doc);
  REQUIRE(coe::run_scenario(ca, a).exit_code == 0);
  REQUIRE(coe::run_scenario(cb, b).exit_code == 0);
  CHECK(slurp(a / "solution.csv") != slurp(b / "solution.csv"));
}
