// One checker per theorem. Each consumes a Chain or ChainPair, builds the
// construction the statement names, and returns an IncidenceReport with
// labelled residuals, the effective tolerance, a pass flag and the derived
// artifacts (points, circles, fitted conics).
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ppchain/chain.hpp"
#include "ppchain/conic.hpp"
#include "ppchain/geom.hpp"
#include "ppchain/inversion.hpp"

namespace ppchain {

using Artifact =
    std::variant<double, Point, GeneralizedCircle, Conic, std::string>;

struct IncidenceReport {
  std::string check_name;
  std::vector<std::pair<std::string, double>> residuals;
  double max_residual = 0.0;
  double tolerance = kDefaultTol;
  bool pass = true;
  std::map<std::string, Artifact> artifacts;
};

namespace detail {

// Residuals measured against a secondary tolerance are weighted so that one
// report-level tolerance decides the pass flag.
class ReportBuilder {
 public:
  ReportBuilder(std::string name, double tolerance) {
    r_.check_name = std::move(name);
    r_.tolerance = tolerance;
  }
  void add(const std::string& label, double value, double own_tol = 0.0) {
    double weight = own_tol > 0.0 ? r_.tolerance / own_tol : 1.0;
    r_.residuals.emplace_back(label, value);
    r_.max_residual = std::max(r_.max_residual, value * weight);
  }
  void artifact(const std::string& key, Artifact a) {
    r_.artifacts.emplace(key, std::move(a));
  }
  IncidenceReport finish() {
    r_.pass = r_.max_residual <= r_.tolerance;
    return std::move(r_);
  }

 private:
  IncidenceReport r_;
};

inline LineSeg2 center_line(const GeneralizedCircle& l,
                            const GeneralizedCircle& m) {
  return LineSeg2::through(gcircle_center(l), gcircle_center(m));
}

inline double config_scale(const Chain& ch) {
  if (is_circle(ch.outer)) return as_circle(ch.outer).radius;
  return 1.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Theorem: the chords L_iM_i and the common tangents t_i of a Pappus chain
// are concurrent in a point B on the parents' center line.

inline IncidenceReport check_pappus_concurrency(const Chain& chain,
                                                double tol = kDefaultTol) {
  if (chain.kind != ChainKind::Pappus)
    throw GeomError(Errc::WrongKind, "concurrency check needs a Pappus chain");
  if (chain.count() < 2)
    throw GeomError(Errc::BadCount, "need at least 2 chain members");

  std::vector<LineSeg2> lines = chain.p_lines;
  lines.insert(lines.end(), chain.t_lines.begin(), chain.t_lines.end());
  auto conc = concurrency(lines);

  detail::ReportBuilder rb("pappus_concurrency", tol);
  rb.add("concurrency", conc.residual);
  LineSeg2 axis = detail::center_line(chain.outer, chain.inner);
  rb.add("B_on_center_line", axis.distance(conc.point) / detail::config_scale(chain));
  rb.artifact("B", conc.point);
  return rb.finish();
}

// ---------------------------------------------------------------------------
// Lemma: the circle centered at B through the N_i is orthogonal to every
// chain member, and meets the parents at A.

inline IncidenceReport check_ortho_circle(const Chain& chain,
                                          double tol = kDefaultTol) {
  IncidenceReport conc = check_pappus_concurrency(chain, tol);
  Point b = std::get<Point>(conc.artifacts.at("B"));
  if (chain.N.empty())
    throw GeomError(Errc::BadCount, "need at least 2 chain members");
  double radius = dist(b, chain.N[0]);
  GeneralizedCircle ortho = make_circle(b, radius);

  detail::ReportBuilder rb("ortho_circle", tol);
  for (std::size_t i = 0; i < chain.N.size(); ++i)
    rb.add("N" + std::to_string(i) + "_on_circle",
           std::abs(dist(b, chain.N[i]) - radius) / radius);
  for (int i = 0; i < chain.count(); ++i)
    rb.add("orthogonal_k" + std::to_string(i),
           orthogonality_residual(ortho, chain.circles[i]));
  if (chain.A)
    rb.add("A_on_circle", std::abs(dist(b, *chain.A) - radius) / radius);
  rb.artifact("B", b);
  rb.artifact("ortho_circle", ortho);
  return rb.finish();
}

// ---------------------------------------------------------------------------
// Proposition: varpi_{i,j} through L_j, L_i, M_i, M_j meets k_i and k_j at
// the angle arctan(j - i).

inline IncidenceReport check_varpi_angle(const Chain& chain, int i, int j,
                                         double tol = kDefaultTol) {
  if (!(j > i && i >= 0 && j < chain.count()))
    throw GeomError(Errc::IndexOutOfRange, "need 0 <= i < j < count");
  GeneralizedCircle varpi =
      circle_from_3_points(chain.L[j], chain.L[i], chain.M[i]);
  double target = std::atan(double(j - i));

  detail::ReportBuilder rb("varpi_angle", tol);
  rb.add("M_j_on_varpi", detail::point_on_gcircle_residual(varpi, chain.M[j]));
  rb.add("angle_k_i",
         std::abs(intersection_angle(varpi, chain.circles[i], 1e-7) - target));
  rb.add("angle_k_j",
         std::abs(intersection_angle(varpi, chain.circles[j], 1e-7) - target));
  rb.artifact("varpi", varpi);
  rb.artifact("angle", target);
  return rb.finish();
}

// ---------------------------------------------------------------------------
// Proposition: the circumcircle omega_{i,j} of L_i M_i N_j is tangent to k_j
// and k_{j+1} at N_j.

inline IncidenceReport check_omega_tangency(const Chain& chain, int i, int j,
                                            double tol = kDefaultTol) {
  int n = chain.count();
  if (i < 0 || i >= n || j < 0 || j >= int(chain.N.size()))
    throw GeomError(Errc::IndexOutOfRange, "omega check needs valid i and j+1");
  int jn = (j + 1) % n;
  GeneralizedCircle omega =
      circle_from_3_points(chain.L[i], chain.M[i], chain.N[j]);
  double scale = detail::config_scale(chain);

  detail::ReportBuilder rb("omega_tangency", tol);
  for (auto [label, idx] : {std::pair<const char*, int>{"k_j", j},
                            std::pair<const char*, int>{"k_j1", jn}}) {
    auto cls = tangency_classify(omega, chain.circles[idx], 1e-6);
    rb.add(std::string("tangent_") + label, cls.residual);
    if (!cls.tangent()) continue;
    // When i == j the triangle L_i M_i N_j is inscribed in k_j itself, so
    // omega coincides with k_j and the contact point degenerates to "N_j
    // lies on the circle".
    bool coincident = false;
    if (is_circle(omega) && is_circle(chain.circles[idx])) {
      const auto& a = as_circle(omega);
      const auto& b = as_circle(chain.circles[idx]);
      coincident = dist(a.center, b.center) < 1e-9 * scale &&
                   std::abs(a.radius - b.radius) < 1e-9 * scale;
    }
    double pres =
        coincident
            ? std::abs(detail::point_on_gcircle_residual(omega, chain.N[j]))
            : dist(tangency_point(omega, chain.circles[idx], 1e-6), chain.N[j]) /
                  scale;
    rb.add(std::string("point_") + label, pres);
  }
  rb.artifact("omega", omega);
  return rb.finish();
}

// ---------------------------------------------------------------------------
// "centres lie on the same conic" checks

enum class ExpectedKind { Ellipse, Hyperbola, Any };

struct ConicCheckOptions {
  double tolerance = 1e-7;    // holdout Sampson residual
  double foci_tol = 1e-7;     // distance of foci to the stated line
  double focal_sum_tol = 1e-6;  // relative spread of focal sums/differences
};

inline IncidenceReport check_center_conic(
    const std::vector<SecondaryCircle>& family, ExpectedKind expected,
    const std::optional<LineSeg2>& foci_line = std::nullopt,
    const ConicCheckOptions& opts = {}) {
  if (family.size() < 6)
    throw GeomError(Errc::InvalidArgument,
                    "conic check needs >= 6 family circles (5 fit + holdout)");
  // A family member can degenerate to a line (center at infinity); those are
  // excluded from the centre fit but still counted in the membership report.
  std::vector<Point> centers;
  int skipped_lines = 0;
  detail::ReportBuilder rb("center_conic", opts.tolerance);
  for (const auto& sc : family) {
    rb.add("membership_" + std::to_string(sc.i) + "_" + std::to_string(sc.j),
           sc.membership_residual, 1e-9);
    if (is_circle(sc.circle))
      centers.push_back(as_circle(sc.circle).center);
    else
      ++skipped_lines;
  }
  if (skipped_lines > 0) rb.artifact("line_members_skipped", double(skipped_lines));
  if (centers.size() < 2)
    throw GeomError(Errc::InvalidArgument,
                    "conic check needs >= 2 proper circle centres");

  auto coll = collinearity(centers);
  if (coll.residual < 1e-9) {
    // Collinear centres: the degenerate (doubled line) conic. Legal outcome
    // for the concentric mirrored configurations.
    LineShape l = coll.line.to_line();
    Conic conic;
    conic.coeffs = detail::canonicalize(
        {l.normal.x * l.normal.x, 2.0 * l.normal.x * l.normal.y,
         l.normal.y * l.normal.y, -2.0 * l.offset * l.normal.x,
         -2.0 * l.offset * l.normal.y, l.offset * l.offset});
    conic.kind = ConicKind::DegenerateLines;
    for (std::size_t i = 0; i < centers.size(); ++i)
      rb.add("holdout_" + std::to_string(i), coll.line.distance(centers[i]));
    rb.add("kind_match", expected == ExpectedKind::Any ? 0.0 : 1.0);
    rb.artifact("conic", conic);
    rb.artifact("kind", std::string(to_string(conic.kind)));
    rb.artifact("centers_collinear", 1.0);
    return rb.finish();
  }
  if (centers.size() < 6)
    throw GeomError(Errc::InvalidArgument,
                    "conic check needs >= 6 proper circle centres");

  std::vector<Point> head(centers.begin(), centers.begin() + 5);
  Conic conic = fit_exact_5(head);
  for (std::size_t i = 5; i < centers.size(); ++i)
    rb.add("holdout_" + std::to_string(i), residual(conic, centers[i]));

  ConicKind kind = classify(conic);
  bool kind_ok = expected == ExpectedKind::Any ||
                 (expected == ExpectedKind::Ellipse &&
                  (kind == ConicKind::Ellipse || kind == ConicKind::Circle)) ||
                 (expected == ExpectedKind::Hyperbola && kind == ConicKind::Hyperbola);
  rb.add("kind_match", kind_ok ? 0.0 : 1.0);
  rb.artifact("conic", conic);
  rb.artifact("kind", std::string(to_string(kind)));

  if (kind == ConicKind::Ellipse || kind == ConicKind::Hyperbola ||
      kind == ConicKind::Circle) {
    CentralFoci foci = central_foci(conic);
    rb.artifact("focus1", foci.f1);
    rb.artifact("focus2", foci.f2);
    if (foci_line) {
      rb.add("focus1_on_line", foci_line->distance(foci.f1), opts.foci_tol);
      rb.add("focus2_on_line", foci_line->distance(foci.f2), opts.foci_tol);
    }
    // Geometric content: sum (ellipse) / |difference| (hyperbola) of focal
    // distances is the same for every holdout centre.
    if (kind != ConicKind::Circle && centers.size() > 5) {
      std::vector<double> vals;
      for (std::size_t i = 0; i < centers.size(); ++i) {
        double d1 = dist(centers[i], foci.f1), d2 = dist(centers[i], foci.f2);
        vals.push_back(kind == ConicKind::Ellipse ? d1 + d2 : std::abs(d1 - d2));
      }
      double lo = vals[0], hi = vals[0];
      for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi > 0.0)
        rb.add("focal_distance_spread", (hi - lo) / hi, opts.focal_sum_tol);
    }
  }
  return rb.finish();
}

inline IncidenceReport check_center_conic(
    const Chain& chain, const FamilySelector& sel, ExpectedKind expected,
    const std::optional<LineSeg2>& foci_line = std::nullopt,
    const ConicCheckOptions& opts = {}) {
  return check_center_conic(secondary_circles(chain, sel), expected, foci_line,
                            opts);
}

inline IncidenceReport check_center_conic(
    const ChainPair& pair, const FamilySelector& sel, ExpectedKind expected,
    const std::optional<LineSeg2>& foci_line = std::nullopt,
    const ConicCheckOptions& opts = {}) {
  return check_center_conic(secondary_circles(pair, sel), expected, foci_line,
                            opts);
}

// ---------------------------------------------------------------------------
// quadruple concyclicity on pairs

namespace detail {

// Circle (or line) through w orthogonal to two given circles; solves the two
// linear power conditions 2 X.(w - o_i) = r_i^2 - |o_i|^2 + |w|^2.
inline std::optional<GeneralizedCircle> circle_through_orthogonal(
    Point w, const CircleShape& c1, const CircleShape& c2) {
  double a11 = 2.0 * (w.x - c1.center.x), a12 = 2.0 * (w.y - c1.center.y);
  double a21 = 2.0 * (w.x - c2.center.x), a22 = 2.0 * (w.y - c2.center.y);
  double b1 = c1.radius * c1.radius - norm2(c1.center) + norm2(w);
  double b2 = c2.radius * c2.radius - norm2(c2.center) + norm2(w);
  double det = a11 * a22 - a12 * a21;
  double scale = std::abs(a11) + std::abs(a12) + std::abs(a21) + std::abs(a22);
  if (std::abs(det) < 1e-12 * scale * scale) return std::nullopt;
  Point x{(b1 * a22 - b2 * a12) / det, (b2 * a11 - b1 * a21) / det};
  double r = dist(x, w);
  if (r < 1e-12) return std::nullopt;
  return make_circle(x, r);
}

}  // namespace detail

inline IncidenceReport check_pair_concyclic(const ChainPair& pair,
                                            Family family, int i, int j,
                                            double tol = kDefaultTol) {
  detail::ReportBuilder rb("pair_concyclic", tol);
  const Chain& c1 = pair.first;
  const Chain& c2 = pair.second;
  auto need = [&](int idx, int limit) {
    if (idx < 0 || idx >= limit)
      throw GeomError(Errc::IndexOutOfRange, "quadruple index out of range");
  };
  Point a, b, c, d;
  switch (family) {
    case Family::C_i:
      need(i, std::min(c1.count(), c2.count()));
      a = c1.L[i], b = c1.M[i], c = c2.L[i], d = c2.M[i];
      break;
    case Family::C_LL:
    case Family::C_L:
      need(i, std::min(c1.count(), c2.count()));
      need(j, std::min(c1.count(), c2.count()));
      a = c1.L[i], b = c1.L[j], c = c2.L[i], d = c2.L[j];
      break;
    case Family::C_MM:
    case Family::C_M:
      need(i, std::min(c1.count(), c2.count()));
      need(j, std::min(c1.count(), c2.count()));
      a = c1.M[i], b = c1.M[j], c = c2.M[i], d = c2.M[j];
      break;
    case Family::C_NN:
      need(i, std::min(int(c1.N.size()), int(c2.N.size())));
      need(j, std::min(int(c1.N.size()), int(c2.N.size())));
      a = c1.N[i], b = c1.N[j], c = c2.N[i], d = c2.N[j];
      break;
    default:
      throw GeomError(Errc::InvalidArgument, "family not valid for concyclicity");
  }
  auto cy = concyclicity_residual(a, b, c, d);
  rb.add("concyclic", cy.residual);
  rb.artifact("circle", circle_from_3_points(a, b, c));

  if (family == Family::C_i && pair.pair_kind == PairKind::OrthogonalPappus &&
      pair.W) {
    // Companion claims: the c_i centres are collinear and there is a circle
    // (or line) through W orthogonal to every c_i and to the shared circle.
    auto fam = secondary_circles(pair, FamilySelector{Family::C_i, 1,
                                                      IndexRule::FixedDifference});
    std::vector<Point> centers;
    std::vector<CircleShape> cs;
    for (auto& sc : fam)
      if (is_circle(sc.circle)) {
        centers.push_back(as_circle(sc.circle).center);
        cs.push_back(as_circle(sc.circle));
      }
    if (centers.size() >= 3)
      rb.add("c_i_centers_collinear", collinearity(centers).residual, 1e-8);
    if (cs.size() >= 2) {
      auto witness = detail::circle_through_orthogonal(*pair.W, cs[0], cs[1]);
      if (witness) {
        for (std::size_t t = 0; t < cs.size(); ++t)
          rb.add("witness_orthogonal_c" + std::to_string(t),
                 orthogonality_residual(*witness, GeneralizedCircle{cs[t]}));
        rb.add("witness_orthogonal_shared",
               orthogonality_residual(*witness, pair.shared_circle()));
        rb.artifact("orthogonal_witness", *witness);
      } else {
        LineSeg2 line = LineSeg2::through(*pair.W, cs[0].center);
        for (std::size_t t = 0; t < cs.size(); ++t)
          rb.add("witness_orthogonal_c" + std::to_string(t),
                 line.distance(cs[t].center) / cs[t].radius);
        rb.artifact("orthogonal_witness", GeneralizedCircle{line.to_line()});
      }
    }
  }
  return rb.finish();
}

// ---------------------------------------------------------------------------
// Lemma: two circles orthogonal to both members of a nested pair always meet
// in exactly two points (so "orthogonal Steiner chains" cannot exist).

inline IncidenceReport check_no_orthogonal_annulus(const GeneralizedCircle& l,
                                                   const GeneralizedCircle& k,
                                                   int trials,
                                                   unsigned seed = 7u,
                                                   double tol = kDefaultTol) {
  auto cls = tangency_classify(l, k);
  if (cls.kind != TangencyKind::Nested)
    throw GeomError(Errc::NotNested, "need a strictly nested pair");

  Inversion inv = concentricizing_inversion(l, k);
  CircleShape li = as_circle(invert_gcircle(inv, l));
  CircleShape ki = as_circle(invert_gcircle(inv, k));
  double gap = std::abs(ki.radius * ki.radius - li.radius * li.radius);

  detail::ReportBuilder rb("no_orthogonal_annulus", tol);
  rb.add("infeasibility_gap_positive", gap > 0.0 ? 0.0 : 1.0);
  rb.artifact("infeasibility_gap", gap);

  Point common_center = 0.5 * (li.center + ki.center);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, std::numbers::pi);
  std::vector<GeneralizedCircle> ortho;
  for (int t = 0; t < trials; ++t) {
    double a = ang(rng);
    Vec2 dir{std::cos(a), std::sin(a)};
    LineShape line{perp(dir), dot(perp(dir), common_center)};
    ortho.push_back(invert_gcircle(inv, GeneralizedCircle{line}));
  }
  int bad_pairs = 0;
  for (std::size_t x = 0; x < ortho.size(); ++x)
    for (std::size_t y = x + 1; y < ortho.size(); ++y)
      if (intersect(ortho[x], ortho[y], 1e-7).size() != 2) ++bad_pairs;
  rb.add("pairs_without_two_intersections", double(bad_pairs));
  rb.artifact("trials", double(trials));
  return rb.finish();
}

// ---------------------------------------------------------------------------
// Lemma: locus of the inverted chord-circle centres is a conic. Two paths per
// sample: the closed-form radius formula and an independent geometric
// construction (chord line intersected with the unit circle, then inverted).

enum class LocusBranch { Plus, Minus };

struct LocusProblem {
  double chord_length;   // d in (0,2), chord of the unit circle
  double line_offset;    // a > 0, the line p: x = a
  Point omega_center;    // c
  double omega_radius;   // rho > 0
  LocusBranch branch = LocusBranch::Plus;
};

struct LocusOptions {
  int holdout = 100;
  double y_min = -3.0, y_max = 3.0;
  double tolerance = 1e-7;   // holdout Sampson residual
  double dual_tol = 1e-10;   // formula vs geometric path agreement
  double pole_guard = 1e-6;
};

inline IncidenceReport locus_lemma45(const LocusProblem& prob,
                                     const LocusOptions& opts = {}) {
  if (!(prob.chord_length > 0.0 && prob.chord_length < 2.0))
    throw GeomError(Errc::BadChord, "chord length must lie in (0,2)");
  if (!(prob.line_offset > 0.0))
    throw GeomError(Errc::InvalidArgument, "line offset a must be positive");
  if (!(prob.omega_radius > 0.0))
    throw GeomError(Errc::InvalidArgument, "omega radius must be positive");

  const double d = prob.chord_length;
  const double a = prob.line_offset;
  const Point c = prob.omega_center;
  const double rho2 = prob.omega_radius * prob.omega_radius;
  const double t = std::sqrt(1.0 - d * d / 4.0);  // chord distance from O
  const double s = 2.0 * t;
  const double sign = prob.branch == LocusBranch::Plus ? 1.0 : -1.0;
  Inversion inv(c, rho2);
  GeneralizedCircle unit = make_circle({0, 0}, 1.0);

  detail::ReportBuilder rb("locus_lemma45", opts.tolerance);
  std::vector<Point> samples;
  int skipped = 0;
  double worst_dual = 0.0;
  const int want = 5 + opts.holdout;
  const int grid = want * 2;  // oversample; poles are skipped
  for (int g = 0; g < grid && int(samples.size()) < want; ++g) {
    double y = opts.y_min + (opts.y_max - opts.y_min) * (g + 0.5) / grid;
    Point m{a, y};
    double mm = norm(m);
    if (mm < 1e-9) {
      ++skipped;
      continue;
    }
    double r2 = mm * mm + sign * s * mm + 1.0;
    double denom = norm2(m - c) - r2;
    if (std::abs(denom) < opts.pole_guard || r2 <= 0.0) {
      ++skipped;
      continue;
    }
    Point formula = c + (rho2 / denom) * (m - c);

    // Geometric oracle: the chord sits at signed offset -sign*t along m/|m|.
    Vec2 u = m / mm;
    LineShape chord{u, -sign * t};
    auto ends = intersect(unit, GeneralizedCircle{chord}, 1e-9);
    if (ends.size() != 2) {
      ++skipped;
      continue;
    }
    GeneralizedCircle circ = make_circle(m, dist(m, ends[0]));
    if (through_center(inv, circ, 1e-9)) {
      ++skipped;
      continue;
    }
    Point geometric = detail::gcircle_center(invert_gcircle(inv, circ));
    worst_dual = std::max(
        worst_dual, dist(formula, geometric) / (1.0 + norm(formula)));
    samples.push_back(formula);
  }
  if (int(samples.size()) < want)
    throw GeomError(Errc::InvalidArgument,
                    "too many pole-adjacent samples in the requested range");
  rb.add("dual_path_agreement", worst_dual, opts.dual_tol);

  // Fit on five spread-out samples, hold out the rest.
  std::vector<Point> fit_pts, hold;
  std::vector<int> fit_idx;
  for (int q = 0; q < 5; ++q)
    fit_idx.push_back(int((samples.size() - 1) * q / 4));
  for (int idx = 0; idx < int(samples.size()); ++idx) {
    if (std::find(fit_idx.begin(), fit_idx.end(), idx) != fit_idx.end())
      fit_pts.push_back(samples[idx]);
    else
      hold.push_back(samples[idx]);
  }
  Conic conic = fit_exact_5(fit_pts);
  double worst_hold = 0.0;
  for (const auto& p : hold) worst_hold = std::max(worst_hold, residual(conic, p));
  rb.add("holdout_residual", worst_hold);
  rb.artifact("conic", conic);
  rb.artifact("kind", std::string(to_string(classify(conic))));
  rb.artifact("skipped_samples", double(skipped));
  return rb.finish();
}

}  // namespace ppchain
