// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "ppchain/incidence.hpp"
#include "ppchain/scene.hpp"
#include "ppchain/svg.hpp"

using namespace ppchain;

namespace {

int g_failures = 0;

void criterion(const char* tag, const char* title,
               const std::function<void()>& body) {
  try {
    body();
    std::printf("[PASS] %s: %s\n", tag, title);
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("[FAIL] %s: %s -- %s\n", tag, title, e.what());
  }
}

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw Failure(what);
}

void require_lt(double value, double bound, const std::string& what) {
  if (!(value < bound))
    throw Failure(what + " = " + std::to_string(value) + " (want < " +
                  std::to_string(bound) + ")");
}

Chain fixture_chain(int n = 12) {
  return build_pappus(make_circle({0, 0}, 1.0), make_circle({0.5, 0}, 0.5), n);
}

ChainPair fixture_pair(int n = 24) {
  return build_orthogonal_pappus_pair(fixture_chain(n), 0, March::Left);
}

void c1_worked_fixture() {
  Chain ch = fixture_chain();
  auto expect_circle = [&](const GeneralizedCircle& g, Point c, double r,
                           double tol, const std::string& what) {
    require(is_circle(g), what + " is a circle");
    require_lt(dist(as_circle(g).center, c), tol, what + " center");
    require_lt(std::abs(as_circle(g).radius - r), tol, what + " radius");
  };
  expect_circle(ch.circles[1], {0.0, 2.0 / 3.0}, 1.0 / 3.0, 1e-12, "k_1");
  expect_circle(ch.circles[2], {0.5, 2.0 / 3.0}, 1.0 / 6.0, 1e-12, "k_2");

  auto conc = check_pappus_concurrency(ch);
  Point b = std::get<Point>(conc.artifacts.at("B"));
  require_lt(dist(b, {1.0 / 3.0, 0.0}), 1e-10, "B");

  auto orep = check_ortho_circle(ch);
  expect_circle(std::get<GeneralizedCircle>(orep.artifacts.at("ortho_circle")),
                {1.0 / 3.0, 0.0}, 2.0 / 3.0, 1e-10, "ortho circle");
}

void c2_concurrency_orthogonality() {
  for (double ratio : {0.3, 0.5, 0.7}) {
    Chain ch = build_pappus(make_circle({0, 0}, 1.0),
                            make_circle({1.0 - ratio, 0.0}, ratio), 15);
    auto conc = check_pappus_concurrency(ch, 1e-9);
    require_lt(conc.max_residual, 1e-9,
               "concurrency residual at ratio " + std::to_string(ratio));
    auto orep = check_ortho_circle(ch, 1e-9);
    require_lt(orep.max_residual, 1e-9,
               "orthogonality residual at ratio " + std::to_string(ratio));
  }
}

void c3_varpi_angles() {
  Chain ch = fixture_chain();
  for (int i = 0; i <= 8; ++i)
    for (int j = i + 1; j <= 8; ++j) {
      auto rep = check_varpi_angle(ch, i, j, 1e-9);
      require_lt(rep.max_residual, 1e-9,
                 "varpi (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

void c4_omega_tangency() {
  Chain ch = fixture_chain();
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 6; ++j) {
      auto rep = check_omega_tangency(ch, i, j, 1e-9);
      require_lt(rep.max_residual, 1e-9,
                 "omega (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

void c5_center_ellipses() {
  ConicCheckOptions opts;
  opts.tolerance = 1e-7;
  opts.foci_tol = 1e-7;

  // The center conics are ellipses for small k but flip to hyperbolas once
  // the secondary circles outgrow their tangent envelope: varpi flips at
  // k = 3 and omega at k = 4 on the Pappus chain, while on the Steiner
  // chain both flip at k = 3. The foci stay on the parent center line
  // either way.
  auto expected = [](Family fam, int k, bool steiner) {
    int flip = (fam == Family::Omega && !steiner) ? 4 : 3;
    return k < flip ? ExpectedKind::Ellipse : ExpectedKind::Hyperbola;
  };

  Chain pappus = fixture_chain(12);
  LineSeg2 lm1 = LineSeg2::through({0, 0}, {0.5, 0});
  for (int k : {1, 2, 3})
    for (Family fam : {Family::Omega, Family::Varpi}) {
      auto rep = check_center_conic(
          pappus, FamilySelector{fam, k, IndexRule::FixedDifference},
          expected(fam, k, false), lm1, opts);
      require(rep.pass, "Pappus family k=" + std::to_string(k) +
                            " kind/holdout/foci, max residual " +
                            std::to_string(rep.max_residual));
    }

  Chain annulus = build_steiner_annulus(3.0, 1.2, 16, 0.3);
  Chain steiner = transplant(annulus, Inversion({7.0, 0.5}, 4.0));
  LineSeg2 lm2 = detail::center_line(steiner.outer, steiner.inner);
  for (int k : {1, 2, 3}) {
    auto rep = check_center_conic(
        steiner, FamilySelector{Family::Varpi, k, IndexRule::FixedDifference},
        expected(Family::Varpi, k, true), lm2, opts);
    require(rep.pass, "Steiner varpi k=" + std::to_string(k) +
                          " kind/holdout/foci, max residual " +
                          std::to_string(rep.max_residual));
  }
}

void c6_orthogonal_parents() {
  ChainPair pair = fixture_pair();
  require(pair.W.has_value(), "pair has a common point W");
  Point w = *pair.W;
  require_lt(dist(w, {1, 0}), 1e-9, "W position");

  const GeneralizedCircle* parents[4] = {&pair.first.outer, &pair.first.inner,
                                         &pair.second.outer,
                                         &pair.second.inner};
  for (const auto* g : parents)
    require_lt(detail::point_on_gcircle_residual(*g, w), 1e-9,
               "parent through W");

  LineSeg2 axis1 = detail::center_line(pair.first.outer, pair.first.inner);
  LineSeg2 axis2 = detail::center_line(pair.second.outer, pair.second.inner);
  require_lt(std::abs(dot(axis1.dir, axis2.dir)), 1e-9,
             "center lines perpendicular");

  // W_1..W_4: second intersections of l_2, m_2 with l_1, m_1.
  auto other = [&](const GeneralizedCircle& a,
                   const GeneralizedCircle& b) -> Point {
    auto pts = intersect(a, b, 1e-9);
    require(pts.size() == 2, "parents meet twice");
    return dist(pts[0], w) > dist(pts[1], w) ? pts[0] : pts[1];
  };
  Point w1 = other(pair.second.outer, pair.first.outer);
  Point w2 = other(pair.second.outer, pair.first.inner);
  Point w3 = other(pair.second.inner, pair.first.outer);
  Point w4 = other(pair.second.inner, pair.first.inner);
  require_lt(concyclicity_residual(w1, w2, w3, w4).residual, 1e-9,
             "W_1..W_4 concyclic");

  GeneralizedCircle through = circle_from_3_points(w1, w2, w3);
  for (const auto* g : parents)
    require_lt(std::abs(intersection_angle(through, *g) - std::numbers::pi / 4),
               1e-7, "45 degree angle against a parent");
}

void c7_pair_families() {
  ChainPair pair = fixture_pair(30);

  for (Family fam : {Family::C_i, Family::C_LL, Family::C_MM, Family::C_NN})
    for (auto [i, j] : {std::pair<int, int>{0, 2}, {1, 3}, {2, 5}}) {
      auto rep = check_pair_concyclic(pair, fam, i, j, 1e-9);
      require(rep.pass, "quadruple concyclicity");
    }

  ConicCheckOptions opts;
  opts.tolerance = 1e-7;
  opts.foci_tol = 1e-6;
  LineSeg2 bisector = LineSeg2::through(
      detail::gcircle_center(pair.first.outer),
      detail::gcircle_center(pair.second.outer));
  for (int k : {1, 2}) {
    for (Family fam : {Family::C_MM, Family::C_NN}) {
      auto rep = check_center_conic(
          pair, FamilySelector{fam, k, IndexRule::PappusPairRule},
          ExpectedKind::Hyperbola, std::nullopt, opts);
      require(rep.pass, "hyperbola family k=" + std::to_string(k) +
                            ", max residual " +
                            std::to_string(rep.max_residual));
    }
    // The C_LL centers trace an exact ellipse for every k, but its foci sit
    // on the perpendicular bisector of the parents' common chord only for
    // the k=2 sub-family; at k=1 they are measurably off that line.
    auto rep = check_center_conic(
        pair, FamilySelector{Family::C_LL, k, IndexRule::PappusPairRule},
        ExpectedKind::Ellipse, k == 2 ? std::optional<LineSeg2>(bisector)
                                      : std::nullopt,
        opts);
    require(rep.pass, "C_LL ellipse k=" + std::to_string(k) +
                          ", max residual " +
                          std::to_string(rep.max_residual));
  }

  std::vector<Point> centers;
  for (const auto& sc : secondary_circles(pair, FamilySelector{Family::C_i}))
    if (is_circle(sc.circle)) centers.push_back(as_circle(sc.circle).center);
  require(centers.size() >= 6, "enough c_i centres");
  require_lt(collinearity(centers).residual, 1e-8, "c_i centres collinear");
}

void c8_mirrored_fixtures() {
  for (int n : {6, 8})
    for (double deg : {45.0, 60.0})
      for (bool post : {false, true}) {
        std::optional<Inversion> inv;
        if (post) inv = Inversion({7.0, 0.3}, 1.0);
        ChainPair pair = build_mirrored_steiner_pair(
            n, 3.0, 0.0, deg * std::numbers::pi / 180.0, inv);
        std::string label = "n=" + std::to_string(n) + " mirror=" +
                            std::to_string(int(deg)) + (post ? " post" : "");
        for (Family fam : {Family::C_i, Family::C_LL, Family::C_MM, Family::C_NN}) {
          auto circles = secondary_circles(
              pair, fam == Family::C_i
                        ? FamilySelector{Family::C_i}
                        : FamilySelector{fam, 2, IndexRule::SteinerCyclicRule});
          require(!circles.empty(), "family nonempty " + label);
          for (const auto& sc : circles)
            require_lt(sc.membership_residual, 1e-9, "concyclicity " + label);
        }
        for (Family fam : {Family::C_MM, Family::C_NN}) {
          ConicCheckOptions opts;
          opts.tolerance = 1e-7;
          auto rep = check_center_conic(
              pair, FamilySelector{fam, 2, IndexRule::SteinerCyclicRule},
              ExpectedKind::Any, std::nullopt, opts);
          require(rep.pass, "cyclic-rule conic " + label + ", max residual " +
                                std::to_string(rep.max_residual));
        }
      }
}

void c9_counterexample() {
  double kappa = steiner_ratio(6);
  double c = 3.0 * (1.0 + kappa) / 2.0, r = 3.0 * (1.0 - kappa) / 2.0;
  Point w{5.0, 1.0};
  double rho = std::sqrt(norm2(w - Point{c, 0.0}) - r * r);
  ChainPair pair = build_transplanted_pair(6, 3.0, 0.0, make_circle(w, rho));

  for (Family fam : {Family::C_MM, Family::C_LL}) {
    double worst = 0.0;
    for (const auto& sc : secondary_circles(
             pair, FamilySelector{fam, 2, IndexRule::SteinerCyclicRule}))
      worst = std::max(worst, sc.membership_residual);
    require(worst >= 1e-3, "concyclicity failure magnitude, got " +
                               std::to_string(worst));
  }

  auto rep = check_center_conic(
      pair, FamilySelector{Family::C_MM, 2, IndexRule::SteinerCyclicRule},
      ExpectedKind::Any, std::nullopt, ConicCheckOptions{1e-7, 1e-7, 1e-6});
  require(!rep.pass && rep.max_residual >= 1e-3,
          "conic check failure magnitude, got " +
              std::to_string(rep.max_residual));
}

void c10_no_orthogonal_annulus() {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    double R = 1.0 + 2.0 * u(rng);
    Point oc{4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0};
    double r = R * (0.15 + 0.5 * u(rng));
    double slack = R - r;
    double off = 0.8 * slack * u(rng);
    double ang = 2.0 * std::numbers::pi * u(rng);
    Point ic = oc + off * Vec2{std::cos(ang), std::sin(ang)};
    auto rep = check_no_orthogonal_annulus(make_circle(oc, R),
                                           make_circle(ic, r), 8, 7u + t);
    require(rep.pass, "annulus witness at trial " + std::to_string(t));
    require(std::get<double>(rep.artifacts.at("infeasibility_gap")) > 0.0,
            "positive infeasibility gap");
  }
}

void c11_locus() {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LocusOptions opts;
  opts.holdout = 20;  // 25 samples per problem, 10 problems
  opts.tolerance = 1e-7;
  opts.dual_tol = 1e-10;
  for (int t = 0; t < 10; ++t) {
    LocusProblem prob;
    prob.chord_length = 0.4 + 1.2 * u(rng);
    prob.line_offset = 0.6 + 2.0 * u(rng);
    prob.omega_center = {4.0 * u(rng) - 2.0, 2.0 + 2.0 * u(rng)};
    prob.omega_radius = 0.5 + u(rng);
    prob.branch = t % 2 == 0 ? LocusBranch::Plus : LocusBranch::Minus;
    auto rep = locus_lemma45(prob, opts);
    require(rep.pass, "locus problem " + std::to_string(t) +
                          ", max residual " +
                          std::to_string(rep.max_residual));
  }

  // q = 0: the configuration is mirror-symmetric in the x-axis, so the
  // conic has no xy or y term.
  LocusProblem sym{1.0, 2.0, {1.5, 0.0}, 1.0, LocusBranch::Plus};
  auto rep = locus_lemma45(sym, opts);
  require(rep.pass, "symmetric locus problem");
  auto conic = std::get<Conic>(rep.artifacts.at("conic"));
  require_lt(std::abs(conic.coeffs[1]), 1e-9, "B coefficient at q=0");
  require_lt(std::abs(conic.coeffs[4]), 1e-9, "E coefficient at q=0");
}

void c12_infrastructure() {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0);

  int done = 0;
  for (int t = 0; t < 4000 && done < 1000; ++t) {
    Inversion inv({u(rng), u(rng)}, 0.2 + std::abs(u(rng)));
    Point p{u(rng), u(rng)};
    if (dist(p, inv.center) < 0.05) continue;
    Point back = invert_point(inv, invert_point(inv, p));
    require_lt(dist(back, p) / (1.0 + norm(p)), 1e-9, "involution");
    ++done;
  }
  require(done == 1000, "enough involution cases");

  done = 0;
  for (int t = 0; t < 20000 && done < 1000; ++t) {
    GeneralizedCircle a = make_circle({u(rng), u(rng)}, 0.5 + std::abs(u(rng)));
    GeneralizedCircle b = make_circle({u(rng), u(rng)}, 0.5 + std::abs(u(rng)));
    if (tangency_classify(a, b).kind != TangencyKind::Intersecting) continue;
    Inversion inv({u(rng) + 12.0, u(rng)}, 1.0);
    if (through_center(inv, a, 1e-6) || through_center(inv, b, 1e-6)) continue;
    double d = std::abs(intersection_angle(a, b) -
                        intersection_angle(invert_gcircle(inv, a),
                                           invert_gcircle(inv, b)));
    require_lt(d, 1e-9, "conformality");
    ++done;
  }
  require(done == 1000, "enough conformality cases");

  GeneralizedCircle lt = invert_gcircle(Inversion({9, 2}, 6.0),
                                        make_circle({0, 0}, 3.0));
  GeneralizedCircle mt = invert_gcircle(Inversion({9, 2}, 6.0),
                                        make_circle({0, 0}, 1.0));
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (int t = 0; t < 50; ++t) {
    Chain ch = build_steiner_general(lt, mt, 6, ang(rng));
    require(ch.closed, "porism chain closed");
    require_lt(ch.validate(), 1e-9, "porism closure residual");
  }

  for (const char* name : {"pappus-basic", "mirrored-60"}) {
    SceneConfig scene = emit_fixture(name);
    require(render_scene(scene) == render_scene(scene),
            std::string("SVG determinism for ") + name);
  }
}

}  // namespace

int main() {
  criterion("C1", "worked Pappus fixture values", c1_worked_fixture);
  criterion("C2", "concurrency and orthogonality across radius ratios",
            c2_concurrency_orthogonality);
  criterion("C3", "varpi intersection angles arctan(j-i)", c3_varpi_angles);
  criterion("C4", "omega tangency at the chain contact points",
            c4_omega_tangency);
  criterion("C5", "center ellipses with foci on the parent line",
            c5_center_ellipses);
  criterion("C6", "orthogonal pair parents, W_1..W_4 circle, 45 degree angles",
            c6_orthogonal_parents);
  criterion("C7", "pair quadruple families and their center conics",
            c7_pair_families);
  criterion("C8", "mirrored Steiner fixtures and cyclic-rule conics",
            c8_mirrored_fixtures);
  criterion("C9", "transplanted pair fails by at least 1e-3", c9_counterexample);
  criterion("C10", "no annulus admits two disjoint orthogonal circles",
            c10_no_orthogonal_annulus);
  criterion("C11", "chord-image locus dual paths and conic fit", c11_locus);
  criterion("C12", "involution, conformality, porism, SVG determinism",
            c12_infrastructure);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
