// Conic fitting, classification, Sampson residuals and foci extraction.
// Fits run in a normalized frame (centroid at the origin, RMS radius sqrt(2))
// and the coefficient vector is transformed back; residual() evaluates the
// Sampson distance in that frame so it is similarity-invariant.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "ppchain/geom.hpp"

namespace ppchain {

enum class ConicKind { Ellipse, Hyperbola, Parabola, DegenerateLines, Circle };

inline const char* to_string(ConicKind k) {
  switch (k) {
    case ConicKind::Ellipse: return "ellipse";
    case ConicKind::Hyperbola: return "hyperbola";
    case ConicKind::Parabola: return "parabola";
    case ConicKind::DegenerateLines: return "degenerate-lines";
    case ConicKind::Circle: return "circle";
  }
  return "?";
}

struct Conic {
  // A x^2 + B xy + C y^2 + D x + E y + F = 0, unit norm, first nonzero
  // coefficient positive.
  std::array<double, 6> coeffs{1, 0, 1, 0, 0, -1};
  ConicKind kind = ConicKind::Circle;
  // Normalization frame recorded at fit time: q = scale * (p - shift).
  Point shift{0, 0};
  double scale = 1.0;

  double eval(Point p) const {
    auto [A, B, C, D, E, F] = coeffs;
    return A * p.x * p.x + B * p.x * p.y + C * p.y * p.y + D * p.x + E * p.y + F;
  }
  Vec2 gradient(Point p) const {
    auto [A, B, C, D, E, F] = coeffs;
    return {2 * A * p.x + B * p.y + D, B * p.x + 2 * C * p.y + E};
  }
};

namespace detail {

inline std::array<double, 6> canonicalize(std::array<double, 6> c) {
  double n = 0.0;
  for (double v : c) n += v * v;
  n = std::sqrt(n);
  if (n == 0.0) throw GeomError(Errc::RankDeficient, "zero conic");
  double sign = 1.0;
  for (double v : c) {
    if (std::abs(v) > 1e-14 * n) {
      sign = v > 0 ? 1.0 : -1.0;
      break;
    }
  }
  for (double& v : c) v = v * sign / n;
  return c;
}

// Conic as the symmetric 3x3 matrix [A B/2 D/2; B/2 C E/2; D/2 E/2 F].
inline Eigen::Matrix3d conic_matrix(const std::array<double, 6>& c) {
  Eigen::Matrix3d m;
  m << c[0], c[1] / 2, c[3] / 2, c[1] / 2, c[2], c[4] / 2, c[3] / 2, c[4] / 2,
      c[5];
  return m;
}

inline std::array<double, 6> from_matrix(const Eigen::Matrix3d& m) {
  return {m(0, 0), 2 * m(0, 1), m(1, 1), 2 * m(0, 2), 2 * m(1, 2), m(2, 2)};
}

struct Frame {
  Point shift;
  double scale;
};

inline Frame normalize_frame(const std::vector<Point>& pts) {
  Point centroid{0, 0};
  for (auto& p : pts) centroid = centroid + p;
  centroid = centroid / double(pts.size());
  double rms = 0.0;
  for (auto& p : pts) rms += norm2(p - centroid);
  rms = std::sqrt(rms / double(pts.size()));
  if (rms <= 0.0) throw GeomError(Errc::DuplicatePoints, "coincident sample points");
  return {centroid, std::numbers::sqrt2 / rms};
}

}  // namespace detail

inline ConicKind classify_coeffs(const std::array<double, 6>& c,
                                 double tol = 1e-10) {
  Eigen::Matrix3d m = detail::conic_matrix(c);
  double disc = c[1] * c[1] - 4.0 * c[0] * c[2];
  if (std::abs(m.determinant()) < tol) return ConicKind::DegenerateLines;
  if (disc > tol) return ConicKind::Hyperbola;
  if (disc < -tol) {
    if (std::abs(c[1]) < tol && std::abs(c[0] - c[2]) < tol)
      return ConicKind::Circle;
    return ConicKind::Ellipse;
  }
  return ConicKind::Parabola;
}

inline ConicKind classify(const Conic& conic, double tol = 1e-10) {
  // Classification is similarity-invariant; use the well-scaled frame.
  Point s = conic.shift;
  double sc = conic.scale;
  Eigen::Matrix3d h;
  h << 1.0 / sc, 0, s.x, 0, 1.0 / sc, s.y, 0, 0, 1;  // maps normalized -> world
  Eigen::Matrix3d mw = detail::conic_matrix(conic.coeffs);
  Eigen::Matrix3d mn = h.transpose() * mw * h;
  return classify_coeffs(detail::canonicalize(detail::from_matrix(mn)), tol);
}

namespace detail {

inline Conic fit_impl(const std::vector<Point>& pts, bool exact5) {
  const std::size_t n = pts.size();
  Frame fr = normalize_frame(pts);
  Eigen::MatrixXd d(n, 6);
  for (std::size_t i = 0; i < n; ++i) {
    double x = fr.scale * (pts[i].x - fr.shift.x);
    double y = fr.scale * (pts[i].y - fr.shift.y);
    d(long(i), 0) = x * x;
    d(long(i), 1) = x * y;
    d(long(i), 2) = y * y;
    d(long(i), 3) = x;
    d(long(i), 4) = y;
    d(long(i), 5) = 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (exact5 && sv(4) < 1e-10 * sv(0))
    throw GeomError(Errc::RankDeficient, "conic through the points is not unique");
  if (!exact5 && sv(4) < 1e-12 * sv(0))
    throw GeomError(Errc::RankDeficient, "sample points do not determine a conic");
  Eigen::VectorXd v = svd.matrixV().col(5);

  // Transform the normalized-frame conic back to world coordinates via
  // q = s*(p - t):  M_world = H^T M_norm H with H = [s 0 -s t; ...].
  std::array<double, 6> cn{v(0), v(1), v(2), v(3), v(4), v(5)};
  Eigen::Matrix3d hn;
  hn << fr.scale, 0, -fr.scale * fr.shift.x, 0, fr.scale, -fr.scale * fr.shift.y,
      0, 0, 1;
  Eigen::Matrix3d mw = hn.transpose() * conic_matrix(cn) * hn;

  Conic out;
  out.coeffs = canonicalize(from_matrix(mw));
  out.shift = fr.shift;
  out.scale = fr.scale;
  out.kind = classify_coeffs(canonicalize(cn));
  return out;
}

}  // namespace detail

inline Conic fit_exact_5(const std::vector<Point>& pts) {
  if (pts.size() != 5)
    throw GeomError(Errc::InvalidArgument, "fit_exact_5 needs exactly 5 points");
  return detail::fit_impl(pts, true);
}

inline Conic fit_min_residual(const std::vector<Point>& pts) {
  if (pts.size() < 6)
    throw GeomError(Errc::InvalidArgument, "fit_min_residual needs >= 6 points");
  return detail::fit_impl(pts, false);
}

// Sampson distance evaluated in the conic's normalized frame.
inline double residual(const Conic& conic, Point p) {
  Point q{conic.scale * (p.x - conic.shift.x), conic.scale * (p.y - conic.shift.y)};
  // Express the world conic in the normalized frame.
  Eigen::Matrix3d h;
  h << 1.0 / conic.scale, 0, conic.shift.x, 0, 1.0 / conic.scale, conic.shift.y,
      0, 0, 1;
  Eigen::Matrix3d mn = h.transpose() * detail::conic_matrix(conic.coeffs) * h;
  Conic local;
  local.coeffs = detail::canonicalize(detail::from_matrix(mn));
  double val = std::abs(local.eval(q));
  double g = norm(local.gradient(q));
  if (g < 1e-12) return val;
  return val / g;
}

// Center and foci of a central conic, in world coordinates, lexicographic
// order.
struct CentralFoci {
  Point f1, f2;
  Point center;
};

inline CentralFoci central_foci(const Conic& conic) {
  auto [A, B, C, D, E, F] = conic.coeffs;
  ConicKind kind = classify(conic);
  if (kind != ConicKind::Ellipse && kind != ConicKind::Hyperbola &&
      kind != ConicKind::Circle)
    throw GeomError(Errc::NotCentral, "conic has no central foci");

  double det = 4.0 * A * C - B * B;
  Point center{(B * E - 2.0 * C * D) / det, (B * D - 2.0 * A * E) / det};
  double f0 = F + 0.5 * (D * center.x + E * center.y);

  // Eigen-decomposition of the quadratic part [[A, B/2], [B/2, C]].
  double tr = A + C, df = A - C;
  double disc = std::sqrt(df * df + B * B);
  double l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
  Vec2 v1 = std::abs(B) > 1e-14 * std::abs(tr) + 1e-300
                ? normalized(Vec2{B / 2.0, l1 - A})
                : (A >= C ? Vec2{1, 0} : Vec2{0, 1});
  Vec2 v2 = perp(v1);

  // l1 u^2 + l2 v^2 + f0 = 0.
  double a2 = -f0 / l1;  // semi-axis^2 along v1
  double b2 = -f0 / l2;  // along v2
  double c;
  Vec2 axis;
  if (kind == ConicKind::Circle || std::abs(a2 - b2) < 1e-12 * std::abs(a2 + b2)) {
    return {center, center, center};
  }
  if (a2 > 0.0 && b2 > 0.0) {  // ellipse
    if (a2 >= b2) {
      c = std::sqrt(a2 - b2);
      axis = v1;
    } else {
      c = std::sqrt(b2 - a2);
      axis = v2;
    }
  } else {  // hyperbola: transverse axis where the squared semi-axis is positive
    double t2 = a2 > 0.0 ? a2 : b2;
    double u2 = a2 > 0.0 ? -b2 : -a2;
    c = std::sqrt(t2 + u2);
    axis = a2 > 0.0 ? v1 : v2;
  }
  Point f1 = center + c * axis;
  Point f2 = center - c * axis;
  if (f2.x < f1.x || (f2.x == f1.x && f2.y < f1.y)) std::swap(f1, f2);
  return {f1, f2, center};
}

}  // namespace ppchain
