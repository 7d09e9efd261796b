// Command-line front end: build configurations from flags or a JSON config,
// run checks, emit JSON reports and SVG figures.
//
// Exit codes: 0 all checks pass (expect_fail honored), 1 check failure,
// 2 configuration or usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ppchain/scene.hpp"
#include "ppchain/svg.hpp"

namespace {

using ppchain::SceneConfig;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

SceneConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ppchain::SceneError("config", "cannot open '" + path + "'");
  ppchain::json j;
  try {
    j = ppchain::json::parse(f);
  } catch (const ppchain::json::exception& e) {
    throw ppchain::SceneError("config", std::string("parse error: ") + e.what());
  }
  return ppchain::scene_from_json(j);
}

void emit_outputs(const SceneConfig& scene, const ppchain::json& report,
                  const std::string& json_out, const std::string& svg_out) {
  if (!json_out.empty()) {
    std::ofstream f(json_out, std::ios::binary);
    if (!f) throw ppchain::SceneError("json-out", "cannot open '" + json_out + "'");
    f << report.dump(2) << "\n";
  }
  if (!svg_out.empty()) ppchain::write_svg(scene, svg_out);
}

struct CircleFlag {
  std::vector<double> v;
  bool given() const { return !v.empty(); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tangent-circle chain verifier and renderer"};
  app.require_subcommand(1);

  std::string json_out, svg_out;
  double tol = ppchain::kDefaultTol;
  unsigned seed = 7;
  app.add_option("--tol", tol, "global check tolerance");
  app.add_option("--json-out", json_out, "write the JSON report to this path");
  app.add_option("--svg-out", svg_out, "write an SVG rendering to this path");
  app.add_option("--seed", seed, "seed for randomized property checks");

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "build a configuration and run checks");
  verify->fallthrough();
  std::string v_target, v_config;
  CircleFlag v_outer, v_inner, v_omega;
  int v_n = 12;
  bool v_all = false;
  verify->add_option("target", v_target,
                     "fixture name, 'pappus', or 'counterexample'");
  verify->add_option("--config", v_config, "scene config JSON path");
  verify->add_option("--outer", v_outer.v, "outer parent as cx,cy,r")->delimiter(',');
  verify->add_option("--inner", v_inner.v, "inner parent as cx,cy,r")->delimiter(',');
  verify->add_option("--omega", v_omega.v,
                     "counterexample inversion circle center cx,cy (radius derived)")
      ->delimiter(',');
  verify->add_option("-n,--n", v_n, "member count");
  verify->add_flag("--all", v_all, "run the full check set for the target");

  // render ------------------------------------------------------------------
  auto* render = app.add_subcommand("render", "render a scene to SVG");
  render->fallthrough();
  std::string r_target, r_config;
  render->add_option("target", r_target, "fixture name");
  render->add_option("--config", r_config, "scene config JSON path");

  // fixture -----------------------------------------------------------------
  auto* fixture = app.add_subcommand("fixture", "print a built-in scene config");
  fixture->fallthrough();
  std::string f_name;
  fixture->add_option("name", f_name, "fixture name")->required();

  // locus -------------------------------------------------------------------
  auto* locus = app.add_subcommand("locus", "run the chord-image locus check");
  locus->fallthrough();
  double l_chord = 1.0, l_offset = 2.0, l_rho = 1.0;
  std::vector<double> l_center{0.0, 3.0};
  std::string l_branch = "plus";
  locus->add_option("--chord", l_chord, "chord length d in (0,2)");
  locus->add_option("--offset", l_offset, "line offset a");
  locus->add_option("--omega", l_center, "inversion circle center cx,cy")
      ->delimiter(',');
  locus->add_option("--rho", l_rho, "inversion circle radius");
  locus->add_option("--branch", l_branch, "plus or minus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (fixture->parsed()) {
      SceneConfig scene = ppchain::emit_fixture(f_name);
      ppchain::json j = ppchain::to_json(scene);
      std::cout << j.dump(2) << "\n";
      if (!json_out.empty() || !svg_out.empty())
        emit_outputs(scene, j, json_out, svg_out);
      return kExitPass;
    }

    if (render->parsed()) {
      SceneConfig scene;
      if (!r_config.empty())
        scene = load_config(r_config);
      else if (!r_target.empty())
        scene = ppchain::emit_fixture(r_target);
      else
        throw ppchain::SceneError("render", "need a fixture name or --config");
      if (svg_out.empty())
        std::cout << ppchain::render_scene(scene);
      else
        ppchain::write_svg(scene, svg_out);
      return kExitPass;
    }

    if (locus->parsed()) {
      if (l_center.size() != 2)
        throw ppchain::SceneError("locus.omega", "expected cx,cy");
      SceneConfig scene;
      scene.name = "locus";
      scene.objects.push_back(
          {"locus", "locus",
           ppchain::json{{"chord_length", l_chord},
                         {"line_offset", l_offset},
                         {"omega_center", {l_center[0], l_center[1]}},
                         {"omega_radius", l_rho},
                         {"branch", l_branch}}});
      scene.checks.push_back({"locus", "locus", ppchain::json::object(), {}, false});
      scene.render.layers.conics = true;
      ppchain::RunReport rep = ppchain::run_scene(scene, tol);
      ppchain::json j = ppchain::run_report_to_json(rep);
      std::cout << j.dump(2) << "\n";
      emit_outputs(scene, j, json_out, svg_out);
      return rep.overall ? kExitPass : kExitCheckFailure;
    }

    // verify
    SceneConfig scene;
    if (!v_config.empty()) {
      scene = load_config(v_config);
    } else if (v_target == "pappus") {
      if (!v_outer.given() || v_outer.v.size() != 3)
        throw ppchain::SceneError("verify.outer", "required: --outer cx,cy,r");
      if (!v_inner.given() || v_inner.v.size() != 3)
        throw ppchain::SceneError("verify.inner", "required: --inner cx,cy,r");
      scene.name = "pappus";
      scene.objects.push_back(
          {"chain", "pappus",
           ppchain::json{{"outer", v_outer.v}, {"inner", v_inner.v}, {"n", v_n}}});
      if (v_all) {
        scene.checks.push_back(
            {"pappus_concurrency", "chain", ppchain::json::object(), {}, false});
        scene.checks.push_back(
            {"ortho_circle", "chain", ppchain::json::object(), {}, false});
        scene.checks.push_back(
            {"varpi_angle", "chain", ppchain::json{{"i", 0}, {"j", 1}}, {}, false});
        scene.checks.push_back(
            {"omega_tangency", "chain", ppchain::json{{"i", 0}, {"j", 0}}, {}, false});
        scene.checks.push_back({"center_conic", "chain",
                                ppchain::json{{"family", "omega"},
                                              {"k", 1},
                                              {"rule", "fixed_difference"},
                                              {"expected", "ellipse"},
                                              {"foci_line", "lm"}},
                                1e-7, false});
      } else {
        scene.checks.push_back(
            {"pappus_concurrency", "chain", ppchain::json::object(), {}, false});
      }
    } else if (v_target == "counterexample" && v_omega.given()) {
      if (v_omega.v.size() < 2)
        throw ppchain::SceneError("verify.omega", "expected --omega cx,cy");
      scene = ppchain::emit_fixture("counterexample");
      auto& params = scene.objects.at(0).params;
      params["n"] = v_n;
      // Radius forced by orthogonality to the shared circle Circle{(c,0),r}.
      double R = params.at("outer_radius").get<double>();
      double kappa = ppchain::steiner_ratio(v_n);
      double c = R * (1.0 + kappa) / 2.0, r = R * (1.0 - kappa) / 2.0;
      double d2 = (v_omega.v[0] - c) * (v_omega.v[0] - c) + v_omega.v[1] * v_omega.v[1];
      if (d2 <= r * r)
        throw ppchain::SceneError("verify.omega",
                                  "center too close to the shared circle");
      params["omega"] = {v_omega.v[0], v_omega.v[1], std::sqrt(d2 - r * r)};
    } else if (!v_target.empty()) {
      scene = ppchain::emit_fixture(v_target);
    } else {
      throw ppchain::SceneError("verify", "need a target or --config");
    }

    ppchain::RunReport rep = ppchain::run_scene(scene, tol);
    ppchain::json j = ppchain::run_report_to_json(rep);
    std::cout << j.dump(2) << "\n";
    emit_outputs(scene, j, json_out, svg_out);
    return rep.overall ? kExitPass : kExitCheckFailure;
  } catch (const ppchain::SceneError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ppchain::GeomError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
