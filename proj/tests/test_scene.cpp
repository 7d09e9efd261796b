#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "ppchain/scene.hpp"
#include "ppchain/svg.hpp"

using namespace ppchain;

namespace {
int run_cli(const std::string& args) {
  std::string cmd = std::string(PPCHAIN_CLI_PATH) + " " + args +
                    " > /dev/null 2> /dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
}  // namespace

TEST_CASE("fixtures round-trip through JSON") {
  for (const char* name : fixture_names()) {
    INFO(name);
    SceneConfig scene = emit_fixture(name);
    json j1 = to_json(scene);
    SceneConfig back = scene_from_json(j1);
    CHECK(to_json(back) == j1);
  }
  CHECK_THROWS_AS(emit_fixture("no-such-fixture"), SceneError);
}

TEST_CASE("malformed configs are rejected with field context") {
  CHECK_THROWS_AS(scene_from_json(json::parse("{}")), SceneError);
  json bad = to_json(emit_fixture("steiner-6"));
  bad["objects"][0]["type"] = "dodecahedron";
  CHECK_THROWS_AS(run_scene(scene_from_json(bad), kDefaultTol), SceneError);
}

TEST_CASE("all fixtures verify in-process") {
  for (const char* name : fixture_names()) {
    INFO(name);
    RunReport rep = run_scene(emit_fixture(name), kDefaultTol);
    CHECK(rep.overall);
  }
}

TEST_CASE("run reports carry the schema fields") {
  RunReport rep = run_scene(emit_fixture("steiner-6"), kDefaultTol);
  json j = run_report_to_json(rep);
  CHECK(j.at("schema_version").is_number_integer());
  CHECK(j.at("tool_version").is_string());
  CHECK(j.at("input_hash").is_string());
  CHECK(j.at("overall_pass").get<bool>());
  CHECK(j.at("checks").is_array());
  REQUIRE_FALSE(j.at("checks").empty());
  const auto& c0 = j.at("checks").at(0);
  CHECK(c0.contains("check"));
  CHECK(c0.contains("pass"));
  CHECK(c0.contains("ok"));
  CHECK(c0.contains("max_residual"));
  CHECK(c0.contains("residuals"));
}

TEST_CASE("counterexample fixture fails as declared") {
  SceneConfig scene = emit_fixture("counterexample");
  RunReport rep = run_scene(scene, kDefaultTol);
  CHECK(rep.overall);  // expect_fail flips failing checks to ok
  bool saw_expected_failure = false;
  for (const auto& [spec, report] : rep.reports)
    if (spec.expect_fail && !report.pass) saw_expected_failure = true;
  CHECK(saw_expected_failure);
}

TEST_CASE("SVG rendering is byte-deterministic") {
  for (const char* name : {"pappus-basic", "ortho-pair", "locus-default"}) {
    INFO(name);
    SceneConfig scene = emit_fixture(name);
    std::string a = render_scene(scene);
    std::string b = render_scene(scene);
    CHECK(a == b);
    CHECK(a.find("<svg") != std::string::npos);
    CHECK(a.find("</svg>") != std::string::npos);
  }
}

TEST_CASE("CLI exit codes") {
  CHECK(run_cli("verify steiner-6") == 0);
  CHECK(run_cli("verify pappus-basic") == 0);
  CHECK(run_cli("fixture locus-default") == 0);
  CHECK(run_cli("fixture bogus") == 2);
  CHECK(run_cli("verify") == 2);
  CHECK(run_cli("verify pappus --outer 0,0,1") == 2);  // missing --inner
  CHECK(run_cli("--nonsense") == 2);
}

TEST_CASE("a wrong declared conic kind fails the run") {
  json j = to_json(emit_fixture("pappus-basic"));
  j["checks"] = json::array({{{"check", "center_conic"},
                              {"target", "chain"},
                              {"params",
                               {{"family", "omega"},
                                {"k", 1},
                                {"rule", "fixed_difference"},
                                {"expected", "hyperbola"}}}}});
  SceneConfig scene = scene_from_json(j);
  RunReport rep = run_scene(scene, kDefaultTol);
  CHECK_FALSE(rep.overall);

  SECTION("and surfaces as exit code 1 at the CLI") {
    std::string path = std::string(PPCHAIN_CLI_PATH) + ".failing-scene.json";
    {
      std::ofstream f(path);
      f << to_json(scene).dump(2);
    }
    CHECK(run_cli("verify --config " + path) == 1);
    std::remove(path.c_str());
  }
}
