// Circle inversion as a map on points and generalized circles, plus the two
// derived inversions the chain constructions rely on: tangent pair -> parallel
// lines and nested pair -> concentric circles.
#pragma once

#include <cmath>

#include "ppchain/geom.hpp"

namespace ppchain {

struct Inversion {
  Point center;
  double power = 1.0;  // rho^2 > 0

  Inversion(Point c, double p) : center(c), power(p) {
    if (!(power > 0.0) || !finite(center))
      throw GeomError(Errc::InvalidArgument, "inversion needs finite center, power > 0");
  }
};

inline Point invert_point(const Inversion& inv, Point p) {
  Vec2 d = p - inv.center;
  double d2 = norm2(d);
  double scale = 1.0 + norm(p) + norm(inv.center);
  if (std::sqrt(d2) < 1e-14 * scale)
    throw GeomError(Errc::CenterIsSingular, "point at inversion center");
  return inv.center + (inv.power / d2) * d;
}

// "passes through the inversion center" is decided at 1e-12 relative.
inline bool through_center(const Inversion& inv, const GeneralizedCircle& g,
                           double tol = 1e-12) {
  if (is_circle(g)) {
    const auto& c = as_circle(g);
    double d = dist(c.center, inv.center);
    return std::abs(d - c.radius) <= tol * (d + c.radius);
  }
  const auto& l = as_line(g);
  return std::abs(l.signed_dist(inv.center)) <= tol * (1.0 + std::abs(l.offset));
}

inline GeneralizedCircle invert_gcircle(const Inversion& inv,
                                        const GeneralizedCircle& g) {
  if (is_circle(g)) {
    const auto& c = as_circle(g);
    Vec2 d = c.center - inv.center;
    double pw = norm2(d) - c.radius * c.radius;  // power of the center w.r.t. g
    if (through_center(inv, g)) {
      // Image is a line; anchor it at the image of the point opposite the center.
      Vec2 u = normalized(d);
      Point far = c.center + c.radius * u;
      Point q = invert_point(inv, far);
      return LineShape{u, dot(u, q)};
    }
    Point center = inv.center + (inv.power / pw) * d;
    double radius = inv.power * c.radius / std::abs(pw);
    return CircleShape{center, radius};
  }
  const auto& l = as_line(g);
  double s = l.signed_dist(inv.center);
  if (through_center(inv, g)) return g;
  Point center = inv.center - (inv.power / (2.0 * s)) * l.normal;
  double radius = inv.power / (2.0 * std::abs(s));
  return CircleShape{center, radius};
}

// Inversion centered at the tangency point of l and m (power 1). Sends both
// parents to parallel lines.
inline Inversion tangent_pair_frame(const GeneralizedCircle& l,
                                    const GeneralizedCircle& m,
                                    double tol = kDefaultTol) {
  auto cls = tangency_classify(l, m, tol);
  if (!cls.tangent())
    throw GeomError(Errc::NotTangent, "parents are not tangent");
  return Inversion(tangency_point(l, m, tol), 1.0);
}

// Inversion centered at the limiting point of the coaxal pencil of a nested
// pair, chosen inside the inner circle so both images stay bounded circles.
inline Inversion concentricizing_inversion(const GeneralizedCircle& l,
                                           const GeneralizedCircle& m,
                                           double tol = kDefaultTol) {
  if (!is_circle(l) || !is_circle(m))
    throw GeomError(Errc::NotNested, "concentricizing needs two circles");
  auto cls = tangency_classify(l, m, tol);
  if (cls.kind != TangencyKind::Nested)
    throw GeomError(Errc::NotNested, "circles are not strictly nested");
  const auto& cl = as_circle(l);
  const auto& cm = as_circle(m);
  const CircleShape& outer = cl.radius >= cm.radius ? cl : cm;
  const CircleShape& inner = cl.radius >= cm.radius ? cm : cl;

  double delta = dist(outer.center, inner.center);
  if (delta < tol * outer.radius) return Inversion(outer.center, 1.0);

  // Coordinates along the center line, outer center at u=0.
  Vec2 e = normalized(inner.center - outer.center);
  double u1 = 0.0, R = outer.radius;
  double u2 = delta, r = inner.radius;
  double cL = u1 * u1 - R * R;
  double cM = u2 * u2 - r * r;
  double du = u2 - u1, dc = cM - cL;
  // Point-circles of the pencil: (u1 + t du)^2 = cL + t dc.
  double a = du * du, b = 2.0 * u1 * du - dc, c0 = R * R;
  double disc = b * b - 4.0 * a * c0;
  if (disc < 0.0)
    throw GeomError(Errc::NotNested, "no real limiting point (pencil not nested)");
  double sq = std::sqrt(disc);
  double t1 = (-b + sq) / (2.0 * a), t2 = (-b - sq) / (2.0 * a);
  Point x1 = outer.center + (u1 + t1 * du) * e;
  Point x2 = outer.center + (u1 + t2 * du) * e;
  Point pick = dist(x1, inner.center) < dist(x2, inner.center) ? x1 : x2;
  return Inversion(pick, 1.0);
}

}  // namespace ppchain
