// Chain constructors: Pappus chains via the strip frame, concentric and
// general Steiner chains, orthogonal Pappus pairs, mirrored Steiner pairs and
// the transplanted counterexample pair, plus extraction of the named tangency
// points, chord/tangent lines and secondary circle families.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "ppchain/geom.hpp"
#include "ppchain/inversion.hpp"

namespace ppchain {

enum class ChainKind { Pappus, Steiner };
enum class Side { Up, Down };
enum class March { Left, Right };

struct Chain {
  ChainKind kind;
  GeneralizedCircle outer;  // l
  GeneralizedCircle inner;  // m
  std::vector<GeneralizedCircle> circles;
  std::vector<Point> L;  // tangency with l
  std::vector<Point> M;  // tangency with m
  std::vector<Point> N;  // tangency of consecutive circles (wraps when closed)
  std::vector<LineSeg2> p_lines;  // L_i M_i
  std::vector<LineSeg2> t_lines;  // common tangent at N_i
  bool closed = false;
  std::optional<Point> A;  // tangency of l and m (Pappus only)

  int count() const { return int(circles.size()); }

  // Max over all tangency residuals and point-membership defects.
  double validate(double tol = kDefaultTol) const;
};

namespace detail {

inline double point_on_gcircle_residual(const GeneralizedCircle& g, Point p) {
  if (is_circle(g)) {
    const auto& c = as_circle(g);
    return std::abs(dist(p, c.center) - c.radius) / c.radius;
  }
  return std::abs(as_line(g).signed_dist(p));
}

inline Point gcircle_center(const GeneralizedCircle& g) {
  if (!is_circle(g))
    throw GeomError(Errc::DegenerateMember, "expected a circle, found a line");
  return as_circle(g).center;
}

}  // namespace detail

inline double Chain::validate(double tol) const {
  (void)tol;
  double worst = 0.0;
  auto bump = [&](double r) { worst = std::max(worst, r); };
  int n = count();
  for (int i = 0; i < n; ++i) {
    bump(tangency_classify(circles[i], outer, 1.0).residual);
    bump(tangency_classify(circles[i], inner, 1.0).residual);
    bump(detail::point_on_gcircle_residual(circles[i], L[i]));
    bump(detail::point_on_gcircle_residual(outer, L[i]));
    bump(detail::point_on_gcircle_residual(circles[i], M[i]));
    bump(detail::point_on_gcircle_residual(inner, M[i]));
  }
  int nn = int(N.size());
  for (int i = 0; i < nn; ++i) {
    int j = (i + 1) % n;
    bump(tangency_classify(circles[i], circles[j], 1.0).residual);
    bump(detail::point_on_gcircle_residual(circles[i], N[i]));
    bump(detail::point_on_gcircle_residual(circles[j], N[i]));
  }
  return worst;
}

namespace detail {

// Fill L/M/N and the p/t lines from circles + parents.
inline void finalize_chain(Chain& ch, double tol = 1e-7) {
  int n = ch.count();
  ch.L.clear();
  ch.M.clear();
  ch.N.clear();
  ch.p_lines.clear();
  ch.t_lines.clear();
  for (int i = 0; i < n; ++i) {
    ch.L.push_back(tangency_point(ch.circles[i], ch.outer, tol));
    ch.M.push_back(tangency_point(ch.circles[i], ch.inner, tol));
    ch.p_lines.push_back(LineSeg2::through(ch.L.back(), ch.M.back()));
  }
  int nn = ch.closed ? n : n - 1;
  for (int i = 0; i < nn; ++i) {
    int j = (i + 1) % n;
    ch.N.push_back(tangency_point(ch.circles[i], ch.circles[j], tol));
    ch.t_lines.push_back(tangent_line_at(ch.circles[i], ch.N.back(), tol));
  }
  if (ch.kind == ChainKind::Pappus)
    ch.A = tangency_point(ch.outer, ch.inner, tol);
}

// Orientation data of the strip frame for a tangent parent pair: both image
// lines share a normal n oriented from the strip toward the inversion center.
struct StripFrame {
  Inversion inv;             // centered at A
  Vec2 n;                    // unit normal of both image lines
  double off_l, off_m;       // offsets of the images of l and m
  double width() const { return std::abs(off_l - off_m); }
  double mid() const { return 0.5 * (off_l + off_m); }
  Vec2 up() const { return perp(n); }
};

inline StripFrame strip_frame(const GeneralizedCircle& l,
                              const GeneralizedCircle& m) {
  Inversion inv = tangent_pair_frame(l, m);
  GeneralizedCircle li = invert_gcircle(inv, l);
  GeneralizedCircle mi = invert_gcircle(inv, m);
  LineShape ll = as_line(li), ml = as_line(mi);
  if (dot(ll.normal, ml.normal) < 0.0) {
    ml.normal = {-ml.normal.x, -ml.normal.y};
    ml.offset = -ml.offset;
  }
  StripFrame f{inv, ll.normal, ll.offset, ml.offset};
  // Orient n from the strip midline toward A.
  if (dot(f.n, inv.center) - f.mid() < 0.0) {
    f.n = {-f.n.x, -f.n.y};
    f.off_l = -f.off_l;
    f.off_m = -f.off_m;
  }
  return f;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// constructors

inline Chain build_pappus(const GeneralizedCircle& outer,
                          const GeneralizedCircle& inner, int count,
                          Side side = Side::Up) {
  if (count < 2)
    throw GeomError(Errc::BadCount, "Pappus chain needs count >= 2");
  auto cls = tangency_classify(outer, inner);
  if (cls.kind != TangencyKind::InternallyTangent)
    throw GeomError(Errc::NotTangent, "parents must be internally tangent");

  detail::StripFrame f = detail::strip_frame(outer, inner);
  double h = f.width();
  Point a = f.inv.center;
  // k'_0 sits on the axis through A; the others stack on the chosen side.
  Point c0 = a + (f.mid() - dot(f.n, a)) * f.n;
  Vec2 step = (side == Side::Up ? 1.0 : -1.0) * f.up();

  Chain ch;
  ch.kind = ChainKind::Pappus;
  ch.outer = outer;
  ch.inner = inner;
  for (int j = 0; j < count; ++j) {
    CircleShape img{c0 + (j * h) * step, h / 2.0};
    if (through_center(f.inv, GeneralizedCircle{img}, 1e-9))
      throw GeomError(Errc::DegenerateMember, "chain member through inversion center");
    ch.circles.push_back(invert_gcircle(f.inv, GeneralizedCircle{img}));
  }
  detail::finalize_chain(ch);
  return ch;
}

inline double steiner_ratio(int n) {
  double s = std::sin(std::numbers::pi / n);
  return (1.0 - s) / (1.0 + s);
}

// Open chain of `count` circles in the annulus between concentric radii
// R > r_in, starting at `start_angle`. Closes only for the porism ratio.
inline Chain build_steiner_annulus(double outer_radius, double inner_radius,
                                   int count, double start_angle,
                                   Point center = {0.0, 0.0},
                                   bool closed = false) {
  if (count < 2) throw GeomError(Errc::BadCount, "Steiner chain needs count >= 2");
  if (!(inner_radius > 0.0) || !(outer_radius > inner_radius))
    throw GeomError(Errc::InvalidArgument, "need 0 < inner_radius < outer_radius");
  double rho_m = (outer_radius - inner_radius) / 2.0;
  double rho_c = (outer_radius + inner_radius) / 2.0;
  double gamma = std::asin(rho_m / rho_c);

  Chain ch;
  ch.kind = ChainKind::Steiner;
  ch.outer = make_circle(center, outer_radius);
  ch.inner = make_circle(center, inner_radius);
  ch.closed = closed;
  for (int j = 0; j < count; ++j) {
    double ang = start_angle + 2.0 * gamma * j;
    ch.circles.push_back(
        make_circle(center + rho_c * Vec2{std::cos(ang), std::sin(ang)}, rho_m));
  }
  detail::finalize_chain(ch);
  return ch;
}

inline Chain build_steiner_concentric(int n, double outer_radius,
                                      double start_angle) {
  if (n < 3) throw GeomError(Errc::BadCount, "closed Steiner chain needs n >= 3");
  return build_steiner_annulus(outer_radius, outer_radius * steiner_ratio(n), n,
                               start_angle, {0.0, 0.0}, /*closed=*/true);
}

inline Chain transplant(const Chain& chain, const Inversion& inv) {
  auto guard = [&](const GeneralizedCircle& g, const char* what) {
    if (through_center(inv, g, 1e-9))
      throw GeomError(Errc::DegenerateMember,
                      std::string(what) + " passes through the inversion center");
  };
  guard(chain.outer, "parent");
  guard(chain.inner, "parent");
  for (const auto& k : chain.circles) guard(k, "chain member");

  Chain out;
  out.kind = chain.kind;
  out.closed = chain.closed;
  out.outer = invert_gcircle(inv, chain.outer);
  out.inner = invert_gcircle(inv, chain.inner);
  for (const auto& k : chain.circles)
    out.circles.push_back(invert_gcircle(inv, k));
  for (const auto& p : chain.L) out.L.push_back(invert_point(inv, p));
  for (const auto& p : chain.M) out.M.push_back(invert_point(inv, p));
  for (const auto& p : chain.N) out.N.push_back(invert_point(inv, p));
  for (std::size_t i = 0; i < out.L.size(); ++i)
    out.p_lines.push_back(LineSeg2::through(out.L[i], out.M[i]));
  for (std::size_t i = 0; i < out.N.size(); ++i)
    out.t_lines.push_back(tangent_line_at(out.circles[i], out.N[i], 1e-7));
  if (chain.A) out.A = invert_point(inv, *chain.A);
  return out;
}

// Steiner chain between an arbitrary nested pair: concentricize, check the
// porism ratio, build in the concentric frame and transplant back.
inline Chain build_steiner_general(const GeneralizedCircle& l,
                                   const GeneralizedCircle& m, int n,
                                   double start_angle, double tol = 1e-6) {
  Inversion inv = concentricizing_inversion(l, m);
  CircleShape li = as_circle(invert_gcircle(inv, l));
  CircleShape mi = as_circle(invert_gcircle(inv, m));
  double R = std::max(li.radius, mi.radius);
  double r = std::min(li.radius, mi.radius);
  if (std::abs(r / R - steiner_ratio(n)) > tol)
    throw GeomError(Errc::NotClosable, "annulus ratio does not close for this n");
  Chain conc = build_steiner_annulus(R, R * steiner_ratio(n), n, start_angle,
                                     li.center, /*closed=*/true);
  return transplant(conc, inv);
}

// ---------------------------------------------------------------------------
// reflections (used by the mirrored pair)

inline Point reflect_point(Point p, Point q, Vec2 u) {
  Vec2 d = p - q;
  return q + 2.0 * dot(u, d) * u - d;
}

inline GeneralizedCircle reflect_gcircle(const GeneralizedCircle& g, Point q,
                                         Vec2 u) {
  if (is_circle(g)) {
    const auto& c = as_circle(g);
    return CircleShape{reflect_point(c.center, q, u), c.radius};
  }
  const auto& l = as_line(g);
  Point a = reflect_point(l.foot(q), q, u);
  Point b = reflect_point(l.foot(q) + perp(l.normal), q, u);
  return LineSeg2::through(a, b).to_line();
}

inline Chain reflect_chain(const Chain& chain, Point q, Vec2 u) {
  Chain out;
  out.kind = chain.kind;
  out.closed = chain.closed;
  out.outer = reflect_gcircle(chain.outer, q, u);
  out.inner = reflect_gcircle(chain.inner, q, u);
  for (const auto& k : chain.circles) out.circles.push_back(reflect_gcircle(k, q, u));
  for (const auto& p : chain.L) out.L.push_back(reflect_point(p, q, u));
  for (const auto& p : chain.M) out.M.push_back(reflect_point(p, q, u));
  for (const auto& p : chain.N) out.N.push_back(reflect_point(p, q, u));
  for (std::size_t i = 0; i < out.L.size(); ++i)
    out.p_lines.push_back(LineSeg2::through(out.L[i], out.M[i]));
  for (std::size_t i = 0; i < out.N.size(); ++i)
    out.t_lines.push_back(tangent_line_at(out.circles[i], out.N[i], 1e-7));
  if (chain.A) out.A = reflect_point(*chain.A, q, u);
  return out;
}

// ---------------------------------------------------------------------------
// pairs

enum class PairKind { OrthogonalPappus, MirroredSteiner, TransplantedSteiner };

struct ChainPair {
  Chain first;
  Chain second;
  int shared_index_first = 0;
  int shared_index_second = 0;
  PairKind pair_kind;
  std::optional<Point> W;  // common point (orthogonal-Pappus only)
  bool mirror_degenerate = false;

  const GeneralizedCircle& shared_circle() const {
    return first.circles[shared_index_first];
  }
};

inline ChainPair build_orthogonal_pappus_pair(const Chain& base,
                                              int shared_index,
                                              March direction) {
  if (base.kind != ChainKind::Pappus)
    throw GeomError(Errc::WrongKind, "orthogonal pair needs a Pappus base chain");
  if (shared_index < 0 || shared_index >= base.count())
    throw GeomError(Errc::IndexOutOfRange, "shared_index out of range");
  if (base.count() < 2)
    throw GeomError(Errc::BadCount, "base chain needs >= 2 members");

  detail::StripFrame f = detail::strip_frame(base.outer, base.inner);
  double h = f.width();
  Point a = f.inv.center;

  auto img_center = [&](int i) {
    return as_circle(invert_gcircle(f.inv, base.circles[i])).center;
  };
  Point cs = img_center(shared_index);
  // Direction the base chain stacks in the strip frame.
  Vec2 side_dir = normalized(img_center(std::min(shared_index + 1, base.count() - 1)) -
                             img_center(std::max(shared_index - 1, 0)));
  // Right marches along +e where e points from the outer parent's center to A.
  Vec2 e = f.n;  // oriented strip -> A, i.e. along (A - outer center)
  Vec2 march = (direction == March::Right ? 1.0 : -1.0) * e;

  // The parents of the orthogonal chain are the tangents of the shared image
  // circle perpendicular to the strip lines. Label l_2/m_2 by the strip-frame
  // reflection that carries chain 1 onto chain 2 (it maps l_1 to l_2 and m_1
  // to m_2); this labeling is what makes the mixed L/M quadruple families
  // concyclic.
  Vec2 mirror_dir = normalized(side_dir + march);
  GeneralizedCircle l2_img =
      reflect_gcircle(GeneralizedCircle{LineShape{f.n, f.off_l}}, cs, mirror_dir);
  GeneralizedCircle m2_img =
      reflect_gcircle(GeneralizedCircle{LineShape{f.n, f.off_m}}, cs, mirror_dir);

  Chain second;
  second.kind = ChainKind::Pappus;
  second.outer = invert_gcircle(f.inv, l2_img);
  second.inner = invert_gcircle(f.inv, m2_img);
  for (int j = 0; j < base.count(); ++j) {
    CircleShape img{cs + (j * h) * march, h / 2.0};
    if (through_center(f.inv, GeneralizedCircle{img}, 1e-9))
      throw GeomError(Errc::DegenerateMember,
                      "second-chain member passes through A; choose the other direction");
    second.circles.push_back(invert_gcircle(f.inv, GeneralizedCircle{img}));
  }
  detail::finalize_chain(second);

  ChainPair pair;
  pair.first = base;
  pair.second = std::move(second);
  pair.shared_index_first = shared_index;
  pair.shared_index_second = 0;
  pair.pair_kind = PairKind::OrthogonalPappus;
  pair.W = a;
  return pair;
}

inline ChainPair build_mirrored_steiner_pair(
    int n, double outer_radius, double shared_angle, double mirror_angle,
    const std::optional<Inversion>& post_inversion = std::nullopt) {
  Chain first = build_steiner_concentric(n, outer_radius, shared_angle);
  Point q = as_circle(first.circles[0]).center;
  Vec2 u{std::cos(mirror_angle), std::sin(mirror_angle)};
  Chain second = reflect_chain(first, q, u);

  ChainPair pair;
  // Mirror through both centers: the second chain coincides with the first.
  LineSeg2 mirror{q, u};
  pair.mirror_degenerate = mirror.distance({0.0, 0.0}) < 1e-9 * outer_radius;
  if (post_inversion) {
    first = transplant(first, *post_inversion);
    second = transplant(second, *post_inversion);
  }
  pair.first = std::move(first);
  pair.second = std::move(second);
  pair.shared_index_first = 0;
  pair.shared_index_second = 0;
  pair.pair_kind = PairKind::MirroredSteiner;
  return pair;
}

inline ChainPair build_transplanted_pair(int n, double outer_radius,
                                         double shared_angle,
                                         const GeneralizedCircle& omega) {
  if (!is_circle(omega))
    throw GeomError(Errc::NotOrthogonal, "omega must be a circle");
  Chain first = build_steiner_concentric(n, outer_radius, shared_angle);
  const GeneralizedCircle& shared = first.circles[0];
  if (orthogonality_residual(omega, shared) > 1e-9)
    throw GeomError(Errc::NotOrthogonal, "omega is not orthogonal to the shared circle");
  const auto& oc = as_circle(omega);
  Inversion inv(oc.center, oc.radius * oc.radius);
  Chain second = transplant(first, inv);
  // A pure inversion image is still concyclic with its preimage (circles
  // through a point and its inverse are invariant), so the pair would satisfy
  // every quadruple check. A quarter turn about the shared circle's center
  // keeps that circle shared while destroying the residual symmetry; this is
  // what makes the pair a genuine counterexample.
  Point s = detail::gcircle_center(shared);
  second = reflect_chain(second, s, Vec2{1.0, 0.0});
  second = reflect_chain(second, s, normalized(Vec2{1.0, 1.0}));

  ChainPair pair;
  pair.first = std::move(first);
  pair.second = std::move(second);
  pair.shared_index_first = 0;
  pair.shared_index_second = 0;
  pair.pair_kind = PairKind::TransplantedSteiner;
  return pair;
}

// ---------------------------------------------------------------------------
// secondary circle families

enum class Family { Omega, Varpi, C_i, C_LL, C_MM, C_NN, C_L, C_M };
enum class IndexRule { FixedDifference, PappusPairRule, SteinerCyclicRule };

struct FamilySelector {
  Family family;
  int k = 1;
  IndexRule rule = IndexRule::FixedDifference;
};

struct SecondaryCircle {
  int i, j;
  GeneralizedCircle circle;
  double membership_residual;  // of the fourth defining point, 0 when only 3
};

namespace detail {

inline std::vector<std::pair<int, int>> family_index_pairs(
    const FamilySelector& sel, int limit_i, int limit_j, bool closed_cycle,
    int cycle_n) {
  std::vector<std::pair<int, int>> out;
  switch (sel.rule) {
    case IndexRule::FixedDifference:
      if (sel.k < 1)
        throw GeomError(Errc::InvalidArgument, "difference family needs k >= 1");
      for (int i = 0; i + sel.k < limit_j && i < limit_i; ++i)
        out.emplace_back(i, i + sel.k);
      break;
    case IndexRule::PappusPairRule:
      // The family (i, i(k+1)-1) in 1-based labels; 0-based (a, a(k+1)+k-1).
      if (sel.k < 1)
        throw GeomError(Errc::InvalidArgument, "pair rule needs k >= 1");
      for (int a = 0;; ++a) {
        long long b = 1LL * a * (sel.k + 1) + sel.k - 1;
        if (a >= limit_i || b >= limit_j) break;
        if (b <= a) continue;
        out.emplace_back(a, int(b));
      }
      break;
    case IndexRule::SteinerCyclicRule: {
      if (!closed_cycle)
        throw GeomError(Errc::InvalidArgument, "cyclic rule needs a closed chain");
      int n = cycle_n;
      for (int a = 0; a < n; ++a) {
        int b = ((a + sel.k - 1) % n + n) % n;
        if (a == b) continue;
        out.emplace_back(a, b);
      }
      break;
    }
  }
  return out;
}

inline SecondaryCircle fit_quadruple(int i, int j, Point a, Point b, Point c,
                                     Point d) {
  std::array<Point, 4> pts{a, b, c, d};
  double scale = 1.0 + std::max({norm(a), norm(b), norm(c), norm(d)});
  std::vector<Point> uniq;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : uniq)
      if (dist(p, q) < 1e-9 * scale) dup = true;
    if (!dup) uniq.push_back(p);
  }
  if (uniq.size() < 3)
    throw GeomError(Errc::DuplicatePoints,
                    "quadruple collapses to fewer than three points");
  GeneralizedCircle circ = circle_from_3_points(uniq[0], uniq[1], uniq[2]);
  double res = 0.0;
  for (std::size_t t = 3; t < uniq.size(); ++t)
    res = std::max(res, point_on_gcircle_residual(circ, uniq[t]));
  return {i, j, circ, res};
}

}  // namespace detail

inline std::vector<SecondaryCircle> secondary_circles(const Chain& chain,
                                                      const FamilySelector& sel) {
  int n = chain.count();
  int nn = int(chain.N.size());
  std::vector<SecondaryCircle> out;
  auto pairs = detail::family_index_pairs(sel, n, n, chain.closed, n);
  switch (sel.family) {
    case Family::Omega:
      // omega_{i,j}: circumcircle of L_i M_i N_j. Family pairs are
      // (j, i) = (i-k, i); generate as (lo, hi) with i = hi.
      for (auto [lo, hi] : pairs) {
        if (lo >= nn) throw GeomError(Errc::IndexOutOfRange, "N index out of range");
        GeneralizedCircle circ =
            circle_from_3_points(chain.L[hi], chain.M[hi], chain.N[lo]);
        out.push_back({hi, lo, circ, 0.0});
      }
      break;
    case Family::Varpi:
      for (auto [lo, hi] : pairs)
        out.push_back(detail::fit_quadruple(hi, lo, chain.L[hi], chain.L[lo],
                                            chain.M[lo], chain.M[hi]));
      break;
    default:
      throw GeomError(Errc::InvalidArgument, "family needs a chain pair");
  }
  return out;
}

inline std::vector<SecondaryCircle> secondary_circles(const ChainPair& pair,
                                                      const FamilySelector& sel) {
  const Chain& c1 = pair.first;
  const Chain& c2 = pair.second;
  int limit = std::min(c1.count(), c2.count());
  int nn = std::min(int(c1.N.size()), int(c2.N.size()));
  bool closed = c1.closed && c2.closed;
  std::vector<SecondaryCircle> out;

  if (sel.family == Family::C_i) {
    for (int i = 0; i < limit; ++i) {
      try {
        out.push_back(
            detail::fit_quadruple(i, i, c1.L[i], c1.M[i], c2.L[i], c2.M[i]));
      } catch (const GeomError& e) {
        if (e.code() != Errc::DuplicatePoints) throw;
      }
    }
    return out;
  }

  int pt_limit = sel.family == Family::C_NN ? nn : limit;
  auto pairs = detail::family_index_pairs(sel, pt_limit, pt_limit, closed,
                                          sel.family == Family::C_NN && closed
                                              ? nn
                                              : c1.count());
  for (auto [i, j] : pairs) {
    if (i >= pt_limit || j >= pt_limit)
      throw GeomError(Errc::IndexOutOfRange, "family index out of range");
    try {
    switch (sel.family) {
      case Family::C_LL:
      case Family::C_L:
        out.push_back(detail::fit_quadruple(i, j, c1.L[i], c1.L[j], c2.L[i], c2.L[j]));
        break;
      case Family::C_MM:
      case Family::C_M:
        out.push_back(detail::fit_quadruple(i, j, c1.M[i], c1.M[j], c2.M[i], c2.M[j]));
        break;
      case Family::C_NN:
        out.push_back(detail::fit_quadruple(i, j, c1.N[i], c1.N[j], c2.N[i], c2.N[j]));
        break;
      default:
        throw GeomError(Errc::InvalidArgument, "family not valid for a pair");
    }
    } catch (const GeomError& e) {
      if (e.code() != Errc::DuplicatePoints) throw;
    }
  }
  return out;
}

}  // namespace ppchain
