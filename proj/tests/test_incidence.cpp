#include <catch2/catch_amalgamated.hpp>

#include "ppchain/incidence.hpp"

using namespace ppchain;

namespace {
Chain fixture_chain(int n = 12) {
  return build_pappus(make_circle({0, 0}, 1.0), make_circle({0.5, 0}, 0.5), n);
}
}  // namespace

TEST_CASE("chord/tangent concurrency on the fixture chain") {
  auto rep = check_pappus_concurrency(fixture_chain());
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-9);
  Point b = std::get<Point>(rep.artifacts.at("B"));
  CHECK(dist(b, {1.0 / 3.0, 0.0}) < 1e-10);
}

TEST_CASE("orthogonal circle through the tangency points") {
  auto rep = check_ortho_circle(fixture_chain());
  CHECK(rep.pass);
  const auto& ortho = as_circle(
      std::get<GeneralizedCircle>(rep.artifacts.at("ortho_circle")));
  CHECK(dist(ortho.center, {1.0 / 3.0, 0.0}) < 1e-10);
  CHECK(std::abs(ortho.radius - 2.0 / 3.0) < 1e-10);
}

TEST_CASE("varpi intersection angles") {
  Chain ch = fixture_chain();
  for (auto [i, j] : {std::pair<int, int>{0, 1}, {0, 3}, {2, 5}}) {
    auto rep = check_varpi_angle(ch, i, j);
    CHECK(rep.pass);
    double angle = std::get<double>(rep.artifacts.at("angle"));
    CHECK(std::abs(angle - std::atan(double(j - i))) < 1e-15);
  }
  CHECK_THROWS_AS(check_varpi_angle(ch, 2, 2), GeomError);
}

TEST_CASE("omega tangency at the chain contact points") {
  Chain ch = fixture_chain();
  for (auto [i, j] : {std::pair<int, int>{0, 0}, {0, 2}, {3, 1}, {4, 6}}) {
    auto rep = check_omega_tangency(ch, i, j);
    INFO("i=" << i << " j=" << j);
    CHECK(rep.pass);
    CHECK(rep.max_residual < 1e-9);
  }
  CHECK_THROWS_AS(check_omega_tangency(ch, 0, 99), GeomError);
}

TEST_CASE("omega center conic is an ellipse with foci on the parent line") {
  Chain ch = fixture_chain();
  LineSeg2 lm = LineSeg2::through({0, 0}, {0.5, 0});
  for (int k : {1, 2}) {
    auto rep = check_center_conic(
        ch, FamilySelector{Family::Omega, k, IndexRule::FixedDifference},
        ExpectedKind::Ellipse, lm);
    INFO("k=" << k);
    CHECK(rep.pass);
    CHECK(std::get<std::string>(rep.artifacts.at("kind")) == "ellipse");
  }
}

TEST_CASE("orthogonal pair quadruple families") {
  ChainPair pair =
      build_orthogonal_pappus_pair(fixture_chain(24), 0, March::Left);
  for (Family fam : {Family::C_i, Family::C_LL, Family::C_MM, Family::C_NN}) {
    auto rep = check_pair_concyclic(pair, fam, 1, 3);
    CHECK(rep.pass);
  }

  SECTION("hyperbola families under the pair rule") {
    for (Family fam : {Family::C_MM, Family::C_NN}) {
      auto rep = check_center_conic(
          pair, FamilySelector{fam, 1, IndexRule::PappusPairRule},
          ExpectedKind::Hyperbola);
      CHECK(rep.pass);
    }
  }
  SECTION("C_LL foci on the perpendicular bisector of the common chord") {
    LineSeg2 bisector = LineSeg2::through(
        detail::gcircle_center(pair.first.outer),
        detail::gcircle_center(pair.second.outer));
    auto rep = check_center_conic(
        pair, FamilySelector{Family::C_LL, 2, IndexRule::PappusPairRule},
        ExpectedKind::Ellipse, bisector, ConicCheckOptions{1e-7, 1e-6, 1e-6});
    CHECK(rep.pass);
  }
}

TEST_CASE("mirrored Steiner pair families") {
  ChainPair plain = build_mirrored_steiner_pair(6, 3.0, 0.0, std::numbers::pi / 3);
  auto rep = check_center_conic(
      plain, FamilySelector{Family::C_NN, 2, IndexRule::SteinerCyclicRule},
      ExpectedKind::Any);
  CHECK(rep.pass);
  // concentric chains put the centres on a line: degenerate conic
  CHECK(std::get<std::string>(rep.artifacts.at("kind")) == "degenerate-lines");

  ChainPair moved = build_mirrored_steiner_pair(
      8, 3.0, 0.0, std::numbers::pi / 4, Inversion({7, 0}, 1.0));
  auto rep2 = check_center_conic(
      moved, FamilySelector{Family::C_NN, 2, IndexRule::SteinerCyclicRule},
      ExpectedKind::Any);
  CHECK(rep2.pass);
}

TEST_CASE("transplanted pair is a genuine counterexample") {
  double kappa = steiner_ratio(6);
  double c = 3.0 * (1.0 + kappa) / 2.0, r = 3.0 * (1.0 - kappa) / 2.0;
  Point w{5.0, 1.0};
  double rho = std::sqrt(norm2(w - Point{c, 0.0}) - r * r);
  ChainPair pair = build_transplanted_pair(6, 3.0, 0.0, make_circle(w, rho));
  double worst = 0.0;
  for (const auto& sc : secondary_circles(
           pair, FamilySelector{Family::C_MM, 2, IndexRule::SteinerCyclicRule}))
    worst = std::max(worst, sc.membership_residual);
  CHECK(worst >= 1e-3);

  CHECK_THROWS_AS(build_transplanted_pair(6, 3.0, 0.0, make_circle(w, 1.0)),
                  GeomError);
}

TEST_CASE("no annulus admits two disjoint common-orthogonal circles") {
  auto rep = check_no_orthogonal_annulus(make_circle({0, 0}, 2.0),
                                         make_circle({0.4, 0.1}, 0.8), 12);
  CHECK(rep.pass);
  CHECK(std::get<double>(rep.artifacts.at("infeasibility_gap")) > 0.0);
  CHECK_THROWS_AS(check_no_orthogonal_annulus(make_circle({0, 0}, 1.0),
                                              make_circle({5, 0}, 1.0), 4),
                  GeomError);
}

TEST_CASE("chord-image centre locus") {
  LocusProblem prob{1.0, 2.0, {0.0, 3.0}, 1.0, LocusBranch::Plus};
  auto rep = locus_lemma45(prob);
  CHECK(rep.pass);

  LocusProblem minus = prob;
  minus.branch = LocusBranch::Minus;
  CHECK(locus_lemma45(minus).pass);

  CHECK_THROWS_AS(locus_lemma45({2.5, 2.0, {0, 3}, 1.0}), GeomError);
  CHECK_THROWS_AS(locus_lemma45({1.0, -1.0, {0, 3}, 1.0}), GeomError);
}
