// Plane primitives (points, circles, lines) and the numeric predicates
// every incidence checker is built from. All predicates are tolerance-based
// with scale-aware normalization; default relative tolerance 1e-9.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ppchain {

inline constexpr double kDefaultTol = 1e-9;

enum class Errc {
  DuplicatePoints,
  NotTangent,
  NotOrthogonal,
  NotNested,
  NotClosable,
  NoIntersection,
  AllParallel,
  PointNotOnCircle,
  CoincidentObjects,
  CenterIsSingular,
  DegenerateMember,
  RankDeficient,
  NotCentral,
  IndexOutOfRange,
  WrongKind,
  BadCount,
  BadChord,
  InvalidArgument,
};

class GeomError : public std::runtime_error {
 public:
  GeomError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend Point operator*(Point p, double s) { return {s * p.x, s * p.y}; }
  friend Point operator/(Point p, double s) { return {p.x / s, p.y / s}; }
};

using Vec2 = Point;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline Vec2 normalized(Vec2 a) {
  double n = norm(a);
  if (n == 0.0)
    throw GeomError(Errc::InvalidArgument, "cannot normalize zero vector");
  return a / n;
}

struct CircleShape {
  Point center;
  double radius = 1.0;  // > 0
};

// nx*x + ny*y = offset, with (nx,ny) a unit vector.
struct LineShape {
  Vec2 normal{1.0, 0.0};
  double offset = 0.0;

  double signed_dist(Point p) const { return dot(normal, p) - offset; }
  Point foot(Point p) const { return p - signed_dist(p) * normal; }
};

using GeneralizedCircle = std::variant<CircleShape, LineShape>;

inline bool is_circle(const GeneralizedCircle& g) {
  return std::holds_alternative<CircleShape>(g);
}
inline bool is_line(const GeneralizedCircle& g) {
  return std::holds_alternative<LineShape>(g);
}
inline const CircleShape& as_circle(const GeneralizedCircle& g) {
  return std::get<CircleShape>(g);
}
inline const LineShape& as_line(const GeneralizedCircle& g) {
  return std::get<LineShape>(g);
}

inline GeneralizedCircle make_circle(Point c, double r) {
  if (!(r > 0.0) || !finite(c))
    throw GeomError(Errc::InvalidArgument, "circle needs finite center and radius > 0");
  return CircleShape{c, r};
}

inline GeneralizedCircle make_line(Vec2 normal, double offset) {
  return LineShape{normalized(normal), offset};
}

// Line through a point with a direction; used for the chords p_i and the
// common tangents t_i.
struct LineSeg2 {
  Point anchor;
  Vec2 dir{1.0, 0.0};  // unit

  static LineSeg2 through(Point a, Point b) {
    if (dist(a, b) <= 1e-12 * (1.0 + norm(a) + norm(b)))
      throw GeomError(Errc::DuplicatePoints, "line through coincident points");
    return {a, normalized(b - a)};
  }

  LineShape to_line() const {
    Vec2 n = perp(dir);
    return LineShape{n, dot(n, anchor)};
  }

  double distance(Point p) const { return std::abs(to_line().signed_dist(p)); }
};

// ---------------------------------------------------------------------------
// circle_from_3_points

inline GeneralizedCircle circle_from_3_points(Point p1, Point p2, Point p3,
                                              double tol = 1e-10) {
  double scale = 1.0 + std::max({norm(p1), norm(p2), norm(p3)});
  if (dist(p1, p2) < tol * scale || dist(p1, p3) < tol * scale ||
      dist(p2, p3) < tol * scale)
    throw GeomError(Errc::DuplicatePoints, "three points must be pairwise distinct");

  Vec2 u = p2 - p1, v = p3 - p1;
  double det = 2.0 * cross(u, v);
  // The collinearity test compares the parallelogram area to the span.
  double span = std::max({dist(p1, p2), dist(p1, p3), dist(p2, p3)});
  if (std::abs(det) < tol * span * span * 2.0) {
    return GeneralizedCircle{LineSeg2::through(p1, p2).to_line()};
  }
  double u2 = norm2(u), v2 = norm2(v);
  Point center = p1 + Point{(v.y * u2 - u.y * v2) / det, (u.x * v2 - v.x * u2) / det};
  double r = (dist(center, p1) + dist(center, p2) + dist(center, p3)) / 3.0;
  return CircleShape{center, r};
}

// ---------------------------------------------------------------------------
// tangency

enum class TangencyKind {
  ExternallyTangent,
  InternallyTangent,
  Intersecting,
  Disjoint,
  Nested,
};

struct TangencyResult {
  TangencyKind kind;
  double residual;  // scale-free distance from the nearest tangent class

  bool tangent() const {
    return kind == TangencyKind::ExternallyTangent ||
           kind == TangencyKind::InternallyTangent;
  }
};

inline TangencyResult tangency_classify(const GeneralizedCircle& g1,
                                        const GeneralizedCircle& g2,
                                        double tol = kDefaultTol) {
  if (is_circle(g1) && is_circle(g2)) {
    const auto& c1 = as_circle(g1);
    const auto& c2 = as_circle(g2);
    double d = dist(c1.center, c2.center);
    double sum = c1.radius + c2.radius;
    double dif = std::abs(c1.radius - c2.radius);
    double residual = std::min(std::abs(d - sum), std::abs(d - dif)) / sum;
    if (std::abs(d - sum) <= tol * sum)
      return {TangencyKind::ExternallyTangent, residual};
    if (std::abs(d - dif) <= tol * sum)
      return {TangencyKind::InternallyTangent, residual};
    if (d > sum) return {TangencyKind::Disjoint, residual};
    if (d < dif) return {TangencyKind::Nested, residual};
    return {TangencyKind::Intersecting, residual};
  }
  if (is_line(g1) && is_line(g2)) {
    const auto& l1 = as_line(g1);
    const auto& l2 = as_line(g2);
    double c = std::abs(cross(l1.normal, l2.normal));
    if (c < tol) {
      double gap = std::abs(std::abs(l1.offset * dot(l1.normal, l2.normal)) -
                            std::abs(l2.offset));
      return {TangencyKind::Disjoint, gap};
    }
    return {TangencyKind::Intersecting, c};
  }
  const auto& c = is_circle(g1) ? as_circle(g1) : as_circle(g2);
  const auto& l = is_line(g1) ? as_line(g1) : as_line(g2);
  double h = std::abs(l.signed_dist(c.center));
  double residual = std::abs(h - c.radius) / c.radius;
  if (residual <= tol) return {TangencyKind::ExternallyTangent, residual};
  if (h > c.radius) return {TangencyKind::Disjoint, residual};
  return {TangencyKind::Intersecting, residual};
}

inline Point tangency_point(const GeneralizedCircle& g1,
                            const GeneralizedCircle& g2,
                            double tol = kDefaultTol) {
  auto cls = tangency_classify(g1, g2, tol);
  if (!cls.tangent())
    throw GeomError(Errc::NotTangent, "objects are not tangent");
  if (is_circle(g1) && is_circle(g2)) {
    const auto& c1 = as_circle(g1);
    const auto& c2 = as_circle(g2);
    Vec2 u = normalized(c2.center - c1.center);
    if (cls.kind == TangencyKind::ExternallyTangent || c1.radius >= c2.radius)
      return c1.center + c1.radius * u;
    return c2.center - c2.radius * u;  // from the larger circle toward c1
  }
  const auto& c = is_circle(g1) ? as_circle(g1) : as_circle(g2);
  const auto& l = is_line(g1) ? as_line(g1) : as_line(g2);
  return l.foot(c.center);
}

// ---------------------------------------------------------------------------
// orthogonality and angles

inline double orthogonality_residual(const GeneralizedCircle& g1,
                                     const GeneralizedCircle& g2) {
  if (is_circle(g1) && is_circle(g2)) {
    const auto& c1 = as_circle(g1);
    const auto& c2 = as_circle(g2);
    double d2 = norm2(c1.center - c2.center);
    double rr = c1.radius * c1.radius + c2.radius * c2.radius;
    return std::abs(d2 - rr) / rr;
  }
  if (is_line(g1) && is_line(g2)) {
    return std::abs(dot(as_line(g1).normal, as_line(g2).normal));
  }
  // A line is orthogonal to a circle iff it passes through the center.
  const auto& c = is_circle(g1) ? as_circle(g1) : as_circle(g2);
  const auto& l = is_line(g1) ? as_line(g1) : as_line(g2);
  return std::abs(l.signed_dist(c.center)) / c.radius;
}

inline double intersection_angle(const GeneralizedCircle& g1,
                                 const GeneralizedCircle& g2,
                                 double tol = kDefaultTol) {
  if (is_circle(g1) && is_circle(g2)) {
    const auto& c1 = as_circle(g1);
    const auto& c2 = as_circle(g2);
    double d2 = norm2(c1.center - c2.center);
    double v = std::abs(c1.radius * c1.radius + c2.radius * c2.radius - d2) /
               (2.0 * c1.radius * c2.radius);
    if (v > 1.0 + tol)
      throw GeomError(Errc::NoIntersection, "circles do not meet");
    return std::acos(std::min(v, 1.0));
  }
  if (is_line(g1) && is_line(g2)) {
    double c = std::abs(dot(as_line(g1).normal, as_line(g2).normal));
    return std::acos(std::min(c, 1.0));
  }
  const auto& c = is_circle(g1) ? as_circle(g1) : as_circle(g2);
  const auto& l = is_line(g1) ? as_line(g1) : as_line(g2);
  double h = std::abs(l.signed_dist(c.center)) / c.radius;
  if (h > 1.0 + tol)
    throw GeomError(Errc::NoIntersection, "line and circle do not meet");
  return std::acos(std::min(h, 1.0));
}

// ---------------------------------------------------------------------------
// concyclicity

struct ConcyclicityResult {
  double residual;  // |det| after centroid/unit-RMS normalization
  bool collinear;   // the "infinite radius" degenerate case
};

inline ConcyclicityResult concyclicity_residual(Point p1, Point p2, Point p3,
                                                Point p4) {
  std::array<Point, 4> pts{p1, p2, p3, p4};
  Point centroid = 0.25 * (p1 + p2 + p3 + p4);
  double rms = 0.0;
  for (auto& p : pts) rms += norm2(p - centroid);
  rms = std::sqrt(rms / 4.0);
  if (rms <= 0.0)
    throw GeomError(Errc::DuplicatePoints, "all four points coincide");
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (dist(pts[i], pts[j]) < 1e-12 * rms)
        throw GeomError(Errc::DuplicatePoints, "concyclicity needs distinct points");
  for (auto& p : pts) p = (p - centroid) / rms;

  // 4x4 determinant with rows [x^2+y^2, x, y, 1], reduced by the last row.
  Vec2 a = pts[0] - pts[3], b = pts[1] - pts[3], c = pts[2] - pts[3];
  double qa = norm2(a) + 2.0 * dot(a, pts[3]);
  double qb = norm2(b) + 2.0 * dot(b, pts[3]);
  double qc = norm2(c) + 2.0 * dot(c, pts[3]);
  double det = qa * cross(b, c) - qb * cross(a, c) + qc * cross(a, b);

  double max_area = std::max({std::abs(cross(b - a, c - a)),
                              std::abs(cross(a, b)), std::abs(cross(a, c)),
                              std::abs(cross(b, c))});
  return {std::abs(det), max_area < 1e-9};
}

// ---------------------------------------------------------------------------
// concurrency

struct ConcurrencyResult {
  Point point;
  double residual;  // max line distance / configuration diameter
};

inline ConcurrencyResult concurrency(const std::vector<LineSeg2>& lines) {
  if (lines.size() < 2)
    throw GeomError(Errc::InvalidArgument, "concurrency needs at least 2 lines");
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (const auto& seg : lines) {
    LineShape l = seg.to_line();
    a11 += l.normal.x * l.normal.x;
    a12 += l.normal.x * l.normal.y;
    a22 += l.normal.y * l.normal.y;
    b1 += l.normal.x * l.offset;
    b2 += l.normal.y * l.offset;
  }
  double det = a11 * a22 - a12 * a12;
  double tr = a11 + a22;
  if (det < 1e-12 * tr * tr)
    throw GeomError(Errc::AllParallel, "lines are (nearly) all parallel");
  Point x{(a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det};

  double diameter = 0.0;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      diameter = std::max(diameter, dist(lines[i].anchor, lines[j].anchor));
  if (diameter == 0.0) diameter = 1.0;

  double worst = 0.0;
  for (const auto& seg : lines) worst = std::max(worst, seg.distance(x));
  return {x, worst / diameter};
}

// ---------------------------------------------------------------------------
// tangent lines and intersections

inline LineSeg2 tangent_line_at(const GeneralizedCircle& g, Point p,
                                double tol = kDefaultTol) {
  if (is_line(g)) {
    const auto& l = as_line(g);
    if (std::abs(l.signed_dist(p)) > tol * (1.0 + std::abs(l.offset)))
      throw GeomError(Errc::PointNotOnCircle, "point not on line");
    return {p, perp(l.normal)};
  }
  const auto& c = as_circle(g);
  if (std::abs(dist(p, c.center) - c.radius) > tol * c.radius)
    throw GeomError(Errc::PointNotOnCircle, "point not on circle");
  return {p, perp(normalized(p - c.center))};
}

inline std::vector<Point> intersect(const GeneralizedCircle& g1,
                                    const GeneralizedCircle& g2,
                                    double tol = kDefaultTol) {
  if (is_circle(g1) && is_circle(g2)) {
    const auto& c1 = as_circle(g1);
    const auto& c2 = as_circle(g2);
    double d = dist(c1.center, c2.center);
    if (d < tol * (c1.radius + c2.radius)) {
      if (std::abs(c1.radius - c2.radius) < tol * c1.radius)
        throw GeomError(Errc::CoincidentObjects, "circles coincide");
      return {};
    }
    double a = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
    double h2 = c1.radius * c1.radius - a * a;
    Vec2 u = (c2.center - c1.center) / d;
    Point mid = c1.center + a * u;
    if (h2 < 0.0) {
      if (h2 > -tol * c1.radius * c1.radius) return {mid};
      return {};
    }
    double h = std::sqrt(h2);
    if (h < tol * c1.radius) return {mid};
    Vec2 v = perp(u);
    return {mid + h * v, mid - h * v};
  }
  if (is_line(g1) && is_line(g2)) {
    const auto& l1 = as_line(g1);
    const auto& l2 = as_line(g2);
    double det = cross(l1.normal, l2.normal);
    if (std::abs(det) < tol) {
      if (std::abs(l1.signed_dist(l2.foot({0, 0}))) < tol * (1.0 + std::abs(l1.offset)))
        throw GeomError(Errc::CoincidentObjects, "lines coincide");
      return {};
    }
    return {Point{(l1.offset * l2.normal.y - l2.offset * l1.normal.y) / det,
                  (l2.offset * l1.normal.x - l1.offset * l2.normal.x) / det}};
  }
  const auto& c = is_circle(g1) ? as_circle(g1) : as_circle(g2);
  const auto& l = is_line(g1) ? as_line(g1) : as_line(g2);
  double s = l.signed_dist(c.center);
  double h2 = c.radius * c.radius - s * s;
  Point foot = c.center - s * l.normal;
  if (h2 < 0.0) {
    if (h2 > -tol * c.radius * c.radius) return {foot};
    return {};
  }
  double h = std::sqrt(h2);
  if (h < tol * c.radius) return {foot};
  Vec2 v = perp(l.normal);
  return {foot + h * v, foot - h * v};
}

// Best-fit line through >= 2 points together with the worst deviation,
// normalized by the spread. Used for "centres lie on the same line" claims.
struct CollinearityResult {
  LineSeg2 line;
  double residual;
};

inline CollinearityResult collinearity(const std::vector<Point>& pts) {
  if (pts.size() < 2)
    throw GeomError(Errc::InvalidArgument, "collinearity needs >= 2 points");
  Point centroid{0, 0};
  for (auto& p : pts) centroid = centroid + p;
  centroid = centroid / double(pts.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (auto& p : pts) {
    Vec2 d = p - centroid;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  // dominant eigenvector of the 2x2 scatter matrix
  double tr = sxx + syy, df = sxx - syy;
  double disc = std::sqrt(df * df + 4.0 * sxy * sxy);
  double lmax = 0.5 * (tr + disc);
  Vec2 dir = (std::abs(sxy) > 1e-300 || df >= 0.0)
                 ? Vec2{lmax - syy, sxy}
                 : Vec2{sxy, lmax - sxx};
  if (norm(dir) < 1e-300) dir = {1.0, 0.0};
  LineSeg2 line{centroid, normalized(dir)};
  double spread = std::sqrt(tr / double(pts.size()));
  if (spread == 0.0) spread = 1.0;
  double worst = 0.0;
  for (auto& p : pts) worst = std::max(worst, line.distance(p));
  return {line, worst / spread};
}

}  // namespace ppchain
