// Scene configuration (JSON schema v1), built-in fixtures, and the check
// runner that turns a SceneConfig into a RunReport.
#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ppchain/chain.hpp"
#include "ppchain/incidence.hpp"

namespace ppchain {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

class SceneError : public std::runtime_error {
 public:
  SceneError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ObjectSpec {
  std::string name;
  std::string type;
  json params;
};

struct CheckSpec {
  std::string check;
  std::string target;
  json params;
  std::optional<double> tolerance;
  bool expect_fail = false;
};

struct RenderLayers {
  bool chains = true;
  bool points = true;
  bool secondary = false;
  bool conics = false;
};

struct RenderSpec {
  int width_px = 800;
  std::array<double, 4> viewbox{-1.6, -1.6, 3.2, 3.2};
  double stroke_width = 0.008;
  RenderLayers layers;
};

struct SceneConfig {
  int version = 1;
  std::string name;
  std::vector<ObjectSpec> objects;
  std::vector<CheckSpec> checks;
  RenderSpec render;
};

// ---------------------------------------------------------------------------
// JSON round trip

inline json to_json(const RenderSpec& r) {
  return json{{"width_px", r.width_px},
              {"viewbox", r.viewbox},
              {"stroke_width", r.stroke_width},
              {"layers",
               json{{"chains", r.layers.chains},
                    {"points", r.layers.points},
                    {"secondary", r.layers.secondary},
                    {"conics", r.layers.conics}}}};
}

inline json to_json(const SceneConfig& s) {
  json objs = json::array();
  for (const auto& o : s.objects)
    objs.push_back(json{{"name", o.name}, {"type", o.type}, {"params", o.params}});
  json checks = json::array();
  for (const auto& c : s.checks) {
    json jc{{"check", c.check}, {"target", c.target}, {"params", c.params}};
    if (c.tolerance) jc["tolerance"] = *c.tolerance;
    jc["expect_fail"] = c.expect_fail;
    checks.push_back(jc);
  }
  return json{{"version", s.version},
              {"name", s.name},
              {"objects", objs},
              {"checks", checks},
              {"render", to_json(s.render)}};
}

inline RenderSpec render_from_json(const json& j) {
  RenderSpec r;
  if (j.contains("width_px")) r.width_px = j.at("width_px").get<int>();
  if (j.contains("viewbox")) {
    auto v = j.at("viewbox");
    if (!v.is_array() || v.size() != 4)
      throw SceneError("render.viewbox", "expected [x, y, w, h]");
    for (int i = 0; i < 4; ++i) r.viewbox[i] = v[i].get<double>();
  }
  if (j.contains("stroke_width")) r.stroke_width = j.at("stroke_width").get<double>();
  if (j.contains("layers")) {
    const auto& l = j.at("layers");
    if (l.contains("chains")) r.layers.chains = l.at("chains").get<bool>();
    if (l.contains("points")) r.layers.points = l.at("points").get<bool>();
    if (l.contains("secondary")) r.layers.secondary = l.at("secondary").get<bool>();
    if (l.contains("conics")) r.layers.conics = l.at("conics").get<bool>();
  }
  return r;
}

inline SceneConfig scene_from_json(const json& j) {
  SceneConfig s;
  if (!j.contains("version"))
    throw SceneError("version", "missing required field");
  s.version = j.at("version").get<int>();
  if (s.version != 1) throw SceneError("version", "schema version must be 1");
  if (j.contains("name")) s.name = j.at("name").get<std::string>();
  if (j.contains("objects")) {
    for (const auto& jo : j.at("objects")) {
      ObjectSpec o;
      if (!jo.contains("name")) throw SceneError("objects[].name", "missing");
      if (!jo.contains("type")) throw SceneError("objects[].type", "missing");
      o.name = jo.at("name").get<std::string>();
      o.type = jo.at("type").get<std::string>();
      o.params = jo.value("params", json::object());
      s.objects.push_back(std::move(o));
    }
  }
  if (j.contains("checks")) {
    for (const auto& jc : j.at("checks")) {
      CheckSpec c;
      if (!jc.contains("check")) throw SceneError("checks[].check", "missing");
      c.check = jc.at("check").get<std::string>();
      c.target = jc.value("target", std::string{});
      c.params = jc.value("params", json::object());
      if (jc.contains("tolerance")) c.tolerance = jc.at("tolerance").get<double>();
      c.expect_fail = jc.value("expect_fail", false);
      s.checks.push_back(std::move(c));
    }
  }
  if (j.contains("render")) s.render = render_from_json(j.at("render"));
  return s;
}

// ---------------------------------------------------------------------------
// object construction

struct BuiltObjects {
  std::map<std::string, GeneralizedCircle> circles;
  std::map<std::string, Chain> chains;
  std::map<std::string, ChainPair> pairs;
  std::map<std::string, LocusProblem> loci;
};

namespace detail {

inline Point param_point(const json& p, const std::string& field) {
  if (!p.is_array() || p.size() != 2)
    throw SceneError(field, "expected [x, y]");
  return {p[0].get<double>(), p[1].get<double>()};
}

inline CircleShape param_circle(const json& p, const std::string& field) {
  if (!p.is_array() || p.size() != 3)
    throw SceneError(field, "expected [cx, cy, r]");
  double r = p[2].get<double>();
  if (r <= 0.0) throw SceneError(field, "radius must be positive");
  return {{p[0].get<double>(), p[1].get<double>()}, r};
}

inline Inversion param_inversion(const json& p, const std::string& field) {
  if (!p.is_array() || p.size() != 3)
    throw SceneError(field, "expected [cx, cy, power]");
  double pw = p[2].get<double>();
  if (pw <= 0.0) throw SceneError(field, "power must be positive");
  return Inversion({p[0].get<double>(), p[1].get<double>()}, pw);
}

inline Family parse_family(const std::string& f, const std::string& field) {
  if (f == "omega") return Family::Omega;
  if (f == "varpi") return Family::Varpi;
  if (f == "c_i") return Family::C_i;
  if (f == "c_ll") return Family::C_LL;
  if (f == "c_mm") return Family::C_MM;
  if (f == "c_nn") return Family::C_NN;
  if (f == "c_l") return Family::C_L;
  if (f == "c_m") return Family::C_M;
  throw SceneError(field, "unknown family '" + f + "'");
}

inline IndexRule parse_rule(const std::string& r, const std::string& field) {
  if (r == "fixed_difference") return IndexRule::FixedDifference;
  if (r == "pappus_pair") return IndexRule::PappusPairRule;
  if (r == "steiner_cyclic") return IndexRule::SteinerCyclicRule;
  throw SceneError(field, "unknown index rule '" + r + "'");
}

inline ExpectedKind parse_expected(const std::string& e, const std::string& field) {
  if (e == "ellipse") return ExpectedKind::Ellipse;
  if (e == "hyperbola") return ExpectedKind::Hyperbola;
  if (e == "any") return ExpectedKind::Any;
  throw SceneError(field, "unknown expected kind '" + e + "'");
}

}  // namespace detail

inline BuiltObjects build_objects(const SceneConfig& scene) {
  BuiltObjects built;
  for (const auto& o : scene.objects) {
    const std::string where = "objects." + o.name;
    try {
      if (o.type == "circle") {
        built.circles.emplace(
            o.name, GeneralizedCircle{detail::param_circle(o.params.at("circle"),
                                                           where + ".circle")});
      } else if (o.type == "pappus") {
        CircleShape outer = detail::param_circle(o.params.at("outer"), where + ".outer");
        CircleShape inner = detail::param_circle(o.params.at("inner"), where + ".inner");
        int n = o.params.at("n").get<int>();
        Side side = o.params.value("side", "up") == std::string("down") ? Side::Down
                                                                        : Side::Up;
        built.chains.emplace(o.name,
                             build_pappus(GeneralizedCircle{outer},
                                          GeneralizedCircle{inner}, n, side));
      } else if (o.type == "steiner") {
        int n = o.params.at("n").get<int>();
        double R = o.params.at("outer_radius").get<double>();
        double start = o.params.value("start_angle", 0.0);
        Chain c = build_steiner_concentric(n, R, start);
        if (o.params.contains("transplant"))
          c = transplant(c, detail::param_inversion(o.params.at("transplant"),
                                                    where + ".transplant"));
        built.chains.emplace(o.name, std::move(c));
      } else if (o.type == "steiner_annulus") {
        double R = o.params.at("outer_radius").get<double>();
        double r_in = o.params.at("inner_radius").get<double>();
        int count = o.params.at("count").get<int>();
        double start = o.params.value("start_angle", 0.0);
        bool closed = o.params.value("closed", false);
        Point center = o.params.contains("center")
                           ? detail::param_point(o.params.at("center"), where + ".center")
                           : Point{0, 0};
        Chain c = build_steiner_annulus(R, r_in, count, start, center, closed);
        if (o.params.contains("transplant"))
          c = transplant(c, detail::param_inversion(o.params.at("transplant"),
                                                    where + ".transplant"));
        built.chains.emplace(o.name, std::move(c));
      } else if (o.type == "ortho_pair") {
        CircleShape outer = detail::param_circle(o.params.at("outer"), where + ".outer");
        CircleShape inner = detail::param_circle(o.params.at("inner"), where + ".inner");
        int n = o.params.at("n").get<int>();
        int shared = o.params.value("shared_index", 0);
        March m = o.params.value("march", "left") == std::string("right")
                      ? March::Right
                      : March::Left;
        Chain base = build_pappus(GeneralizedCircle{outer}, GeneralizedCircle{inner},
                                  n, Side::Up);
        built.pairs.emplace(o.name, build_orthogonal_pappus_pair(base, shared, m));
      } else if (o.type == "mirrored_pair") {
        int n = o.params.at("n").get<int>();
        double R = o.params.at("outer_radius").get<double>();
        double shared = o.params.value("shared_angle", 0.0);
        double mirror = o.params.at("mirror_angle").get<double>();
        std::optional<Inversion> post;
        if (o.params.contains("post_inversion"))
          post = detail::param_inversion(o.params.at("post_inversion"),
                                         where + ".post_inversion");
        built.pairs.emplace(o.name,
                            build_mirrored_steiner_pair(n, R, shared, mirror, post));
      } else if (o.type == "transplanted_pair") {
        int n = o.params.at("n").get<int>();
        double R = o.params.at("outer_radius").get<double>();
        double shared = o.params.value("shared_angle", 0.0);
        CircleShape omega = detail::param_circle(o.params.at("omega"), where + ".omega");
        built.pairs.emplace(
            o.name, build_transplanted_pair(n, R, shared, GeneralizedCircle{omega}));
      } else if (o.type == "locus") {
        LocusProblem prob;
        prob.chord_length = o.params.at("chord_length").get<double>();
        prob.line_offset = o.params.at("line_offset").get<double>();
        prob.omega_center =
            detail::param_point(o.params.at("omega_center"), where + ".omega_center");
        prob.omega_radius = o.params.at("omega_radius").get<double>();
        prob.branch = o.params.value("branch", "plus") == std::string("minus")
                          ? LocusBranch::Minus
                          : LocusBranch::Plus;
        built.loci.emplace(o.name, prob);
      } else {
        throw SceneError(where + ".type", "unknown object type '" + o.type + "'");
      }
    } catch (const json::exception& e) {
      throw SceneError(where, std::string("bad or missing parameter: ") + e.what());
    }
  }
  return built;
}

// ---------------------------------------------------------------------------
// check dispatch

inline IncidenceReport run_check(const CheckSpec& spec, const BuiltObjects& built,
                                 double global_tol) {
  const std::string where = "checks." + spec.check;
  double tol = spec.tolerance.value_or(global_tol);
  auto chain = [&]() -> const Chain& {
    auto it = built.chains.find(spec.target);
    if (it == built.chains.end())
      throw SceneError(where + ".target", "no chain named '" + spec.target + "'");
    return it->second;
  };
  auto pair = [&]() -> const ChainPair& {
    auto it = built.pairs.find(spec.target);
    if (it == built.pairs.end())
      throw SceneError(where + ".target", "no pair named '" + spec.target + "'");
    return it->second;
  };

  try {
    if (spec.check == "pappus_concurrency") return check_pappus_concurrency(chain(), tol);
    if (spec.check == "ortho_circle") return check_ortho_circle(chain(), tol);
    if (spec.check == "varpi_angle")
      return check_varpi_angle(chain(), spec.params.at("i").get<int>(),
                               spec.params.at("j").get<int>(), tol);
    if (spec.check == "omega_tangency")
      return check_omega_tangency(chain(), spec.params.at("i").get<int>(),
                                  spec.params.at("j").get<int>(), tol);
    if (spec.check == "pair_concyclic")
      return check_pair_concyclic(
          pair(),
          detail::parse_family(spec.params.at("family").get<std::string>(),
                               where + ".family"),
          spec.params.at("i").get<int>(), spec.params.at("j").get<int>(), tol);
    if (spec.check == "center_conic") {
      FamilySelector sel;
      sel.family = detail::parse_family(spec.params.at("family").get<std::string>(),
                                        where + ".family");
      sel.k = spec.params.value("k", 1);
      sel.rule = detail::parse_rule(spec.params.value("rule", "fixed_difference"),
                                    where + ".rule");
      ExpectedKind expected = detail::parse_expected(
          spec.params.value("expected", "any"), where + ".expected");
      ConicCheckOptions opts;
      opts.tolerance = tol;
      std::optional<LineSeg2> foci_line;
      std::string fl = spec.params.value("foci_line", "none");
      bool on_pair = built.pairs.count(spec.target) > 0;
      if (fl == "lm") {
        const Chain& c = on_pair ? pair().first : chain();
        foci_line = LineSeg2::through(detail::gcircle_center(c.outer),
                                      detail::gcircle_center(c.inner));
      } else if (fl == "chord_bisector") {
        const ChainPair& p = pair();
        foci_line = LineSeg2::through(detail::gcircle_center(p.first.outer),
                                      detail::gcircle_center(p.second.outer));
      } else if (fl != "none") {
        throw SceneError(where + ".foci_line", "expected lm, chord_bisector, or none");
      }
      if (on_pair) return check_center_conic(pair(), sel, expected, foci_line, opts);
      return check_center_conic(chain(), sel, expected, foci_line, opts);
    }
    if (spec.check == "no_orthogonal_annulus") {
      auto find_circle = [&](const std::string& key) -> const GeneralizedCircle& {
        std::string name = spec.params.at(key).get<std::string>();
        auto it = built.circles.find(name);
        if (it == built.circles.end())
          throw SceneError(where + "." + key, "no circle named '" + name + "'");
        return it->second;
      };
      return check_no_orthogonal_annulus(find_circle("inner"), find_circle("outer"),
                                         spec.params.value("trials", 16),
                                         spec.params.value("seed", 7u), tol);
    }
    if (spec.check == "locus") {
      auto it = built.loci.find(spec.target);
      if (it == built.loci.end())
        throw SceneError(where + ".target", "no locus named '" + spec.target + "'");
      LocusOptions opts;
      opts.tolerance = spec.tolerance.value_or(opts.tolerance);
      opts.holdout = spec.params.value("holdout", opts.holdout);
      opts.y_min = spec.params.value("y_min", opts.y_min);
      opts.y_max = spec.params.value("y_max", opts.y_max);
      return locus_lemma45(it->second, opts);
    }
  } catch (const json::exception& e) {
    throw SceneError(where, std::string("bad or missing parameter: ") + e.what());
  }
  throw SceneError(where, "unknown check '" + spec.check + "'");
}

// ---------------------------------------------------------------------------
// reports

inline json artifact_to_json(const Artifact& a) {
  if (std::holds_alternative<double>(a)) return std::get<double>(a);
  if (std::holds_alternative<Point>(a)) {
    const auto& p = std::get<Point>(a);
    return json::array({p.x, p.y});
  }
  if (std::holds_alternative<GeneralizedCircle>(a)) {
    const auto& g = std::get<GeneralizedCircle>(a);
    if (is_circle(g)) {
      const auto& c = as_circle(g);
      return json{{"type", "circle"}, {"center", {c.center.x, c.center.y}},
                  {"radius", c.radius}};
    }
    const auto& l = as_line(g);
    return json{{"type", "line"}, {"normal", {l.normal.x, l.normal.y}},
                {"offset", l.offset}};
  }
  if (std::holds_alternative<Conic>(a)) {
    const auto& c = std::get<Conic>(a);
    return json{{"type", "conic"}, {"coefficients", c.coeffs},
                {"kind", to_string(c.kind)}};
  }
  return std::get<std::string>(a);
}

inline json report_to_json(const IncidenceReport& r) {
  json residuals = json::array();
  for (const auto& [label, value] : r.residuals)
    residuals.push_back(json{{"label", label}, {"value", value}});
  json artifacts = json::object();
  for (const auto& [name, art] : r.artifacts) artifacts[name] = artifact_to_json(art);
  return json{{"check", r.check_name},     {"pass", r.pass},
              {"tolerance", r.tolerance},  {"max_residual", r.max_residual},
              {"residuals", residuals},    {"artifacts", artifacts}};
}

struct RunReport {
  std::string tool_version = kToolVersion;
  std::uint64_t input_hash = 0;
  std::vector<std::pair<CheckSpec, IncidenceReport>> reports;
  bool overall = true;
  double wall_ms = 0.0;
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline RunReport run_scene(const SceneConfig& scene, double global_tol = kDefaultTol) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport out;
  out.input_hash = fnv1a(to_json(scene).dump());
  BuiltObjects built = build_objects(scene);
  for (const auto& spec : scene.checks) {
    IncidenceReport rep = run_check(spec, built, global_tol);
    bool ok = spec.expect_fail ? !rep.pass : rep.pass;
    out.overall = out.overall && ok;
    out.reports.emplace_back(spec, std::move(rep));
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

inline json run_report_to_json(const RunReport& r) {
  json checks = json::array();
  for (const auto& [spec, rep] : r.reports) {
    json jc = report_to_json(rep);
    jc["expect_fail"] = spec.expect_fail;
    jc["ok"] = spec.expect_fail ? !rep.pass : rep.pass;
    checks.push_back(jc);
  }
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(r.input_hash));
  return json{{"schema_version", 1},
              {"tool_version", r.tool_version},
              {"input_hash", std::string(hash)},
              {"checks", checks},
              {"overall_pass", r.overall},
              {"wall_ms", r.wall_ms}};
}

// ---------------------------------------------------------------------------
// fixtures

inline SceneConfig emit_fixture(const std::string& name) {
  SceneConfig s;
  s.version = 1;
  s.name = name;
  if (name == "pappus-basic") {
    s.objects.push_back({"chain", "pappus",
                         json{{"outer", {0.0, 0.0, 1.0}},
                              {"inner", {0.5, 0.0, 0.5}},
                              {"n", 12},
                              {"side", "up"}}});
    s.checks.push_back({"pappus_concurrency", "chain", json::object(), {}, false});
    s.checks.push_back({"ortho_circle", "chain", json::object(), {}, false});
    s.checks.push_back({"varpi_angle", "chain", json{{"i", 0}, {"j", 1}}, {}, false});
    s.checks.push_back({"omega_tangency", "chain", json{{"i", 0}, {"j", 0}}, {}, false});
    s.checks.push_back({"center_conic", "chain",
                        json{{"family", "omega"},
                             {"k", 1},
                             {"rule", "fixed_difference"},
                             {"expected", "ellipse"},
                             {"foci_line", "lm"}},
                        1e-7, false});
    s.render.viewbox = {-1.3, -1.3, 2.6, 2.6};
  } else if (name == "ortho-pair") {
    s.objects.push_back({"pair", "ortho_pair",
                         json{{"outer", {0.0, 0.0, 1.0}},
                              {"inner", {0.5, 0.0, 0.5}},
                              {"n", 30},
                              {"shared_index", 0},
                              {"march", "left"}}});
    s.checks.push_back({"pair_concyclic", "pair",
                        json{{"family", "c_i"}, {"i", 1}, {"j", 1}}, {}, false});
    s.checks.push_back({"pair_concyclic", "pair",
                        json{{"family", "c_nn"}, {"i", 1}, {"j", 3}}, {}, false});
    s.checks.push_back({"center_conic", "pair",
                        json{{"family", "c_nn"},
                             {"k", 2},
                             {"rule", "pappus_pair"},
                             {"expected", "hyperbola"}},
                        1e-7, false});
    s.render.viewbox = {-3.4, -3.4, 6.8, 6.8};
    s.render.layers.secondary = true;
  } else if (name == "steiner-6") {
    s.objects.push_back({"chain", "steiner",
                         json{{"n", 6}, {"outer_radius", 3.0}, {"start_angle", 0.0}}});
    s.checks.push_back({"omega_tangency", "chain", json{{"i", 0}, {"j", 0}}, {}, false});
    s.checks.push_back({"omega_tangency", "chain", json{{"i", 1}, {"j", 3}}, {}, false});
    s.render.viewbox = {-3.4, -3.4, 6.8, 6.8};
  } else if (name == "mirrored-60") {
    s.objects.push_back({"pair", "mirrored_pair",
                         json{{"n", 6},
                              {"outer_radius", 3.0},
                              {"shared_angle", 0.0},
                              {"mirror_angle", 1.0471975511965976},
                              {"post_inversion", {7.0, 0.0, 1.0}}}});
    s.checks.push_back({"pair_concyclic", "pair",
                        json{{"family", "c_nn"}, {"i", 2}, {"j", 4}}, {}, false});
    s.checks.push_back({"center_conic", "pair",
                        json{{"family", "c_nn"},
                             {"k", 2},
                             {"rule", "steiner_cyclic"},
                             {"expected", "any"}},
                        1e-7, false});
    s.render.viewbox = {-0.1, -0.35, 0.7, 0.7};
  } else if (name == "counterexample") {
    s.objects.push_back({"pair", "transplanted_pair",
                         json{{"n", 6},
                              {"outer_radius", 3.0},
                              {"shared_angle", 0.0},
                              {"omega", {5.0, 1.0, 3.0}}}});
    s.checks.push_back({"pair_concyclic", "pair",
                        json{{"family", "c_mm"}, {"i", 1}, {"j", 3}}, {}, true});
    s.checks.push_back({"pair_concyclic", "pair",
                        json{{"family", "c_ll"}, {"i", 1}, {"j", 3}}, {}, true});
    s.checks.push_back({"center_conic", "pair",
                        json{{"family", "c_nn"},
                             {"k", 2},
                             {"rule", "steiner_cyclic"},
                             {"expected", "any"}},
                        1e-7, true});
    s.render.viewbox = {-4.0, -4.5, 9.0, 9.0};
  } else if (name == "locus-default") {
    s.objects.push_back({"locus", "locus",
                         json{{"chord_length", 1.0},
                              {"line_offset", 2.0},
                              {"omega_center", {0.0, 3.0}},
                              {"omega_radius", 1.0},
                              {"branch", "plus"}}});
    s.checks.push_back({"locus", "locus", json::object(), {}, false});
    s.render.viewbox = {-3.0, -1.0, 6.0, 6.0};
    s.render.layers.conics = true;
  } else {
    throw SceneError("fixture", "unknown fixture '" + name + "'");
  }
  return s;
}

inline const std::array<const char*, 6>& fixture_names() {
  static const std::array<const char*, 6> names{
      "pappus-basic", "ortho-pair",     "steiner-6",
      "mirrored-60",  "counterexample", "locus-default"};
  return names;
}

}  // namespace ppchain
