// Deterministic SVG 1.1 rendering of scene configurations. All coordinates
// are written with fixed 6-fractional-digit formatting so identical scenes
// produce byte-identical files.
#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ppchain/conic.hpp"
#include "ppchain/scene.hpp"

namespace ppchain {
namespace svgdetail {

inline std::string num(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct Canvas {
  std::string body;
  std::array<double, 4> vb;  // x, y, w, h (world coordinates)
  double stroke;

  double flip_y(double y) const { return 2.0 * vb[1] + vb[3] - y; }

  void circle(Point c, double r, const char* cls) {
    body += "  <circle class=\"" + std::string(cls) + "\" cx=\"" + num(c.x) +
            "\" cy=\"" + num(flip_y(c.y)) + "\" r=\"" + num(r) + "\"/>\n";
  }

  void dot(Point p, double r) {
    body += "  <circle class=\"pt\" cx=\"" + num(p.x) + "\" cy=\"" +
            num(flip_y(p.y)) + "\" r=\"" + num(r) + "\"/>\n";
  }

  // Liang-Barsky clip of the infinite line through a with direction d.
  bool clip_line(Point a, Vec2 d, Point& p0, Point& p1) const {
    double t0 = -1e18, t1 = 1e18;
    double xmin = vb[0], xmax = vb[0] + vb[2], ymin = vb[1], ymax = vb[1] + vb[3];
    auto update = [&](double den, double num_) {
      if (std::abs(den) < 1e-300) return num_ <= 0.0;
      double t = num_ / den;
      if (den > 0) t0 = std::max(t0, t);
      else t1 = std::min(t1, t);
      return true;
    };
    if (!update(d.x, xmin - a.x)) return false;
    if (!update(-d.x, a.x - xmax)) return false;
    if (!update(d.y, ymin - a.y)) return false;
    if (!update(-d.y, a.y - ymax)) return false;
    if (t0 > t1) return false;
    p0 = a + t0 * d;
    p1 = a + t1 * d;
    return true;
  }

  void line(Point a, Vec2 d, const char* cls) {
    Point p0, p1;
    if (!clip_line(a, d, p0, p1)) return;
    body += "  <line class=\"" + std::string(cls) + "\" x1=\"" + num(p0.x) +
            "\" y1=\"" + num(flip_y(p0.y)) + "\" x2=\"" + num(p1.x) + "\" y2=\"" +
            num(flip_y(p1.y)) + "\"/>\n";
  }

  void gcircle(const GeneralizedCircle& g, const char* cls) {
    if (is_circle(g)) {
      const auto& c = as_circle(g);
      circle(c.center, c.radius, cls);
    } else {
      const auto& l = as_line(g);
      line(l.foot({vb[0] + vb[2] / 2, vb[1] + vb[3] / 2}), perp(l.normal), cls);
    }
  }

  void polyline(const std::vector<Point>& pts, const char* cls, bool closed) {
    if (pts.size() < 2) return;
    body += "  <polyline class=\"" + std::string(cls) + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body += " ";
      body += num(pts[i].x) + "," + num(flip_y(pts[i].y));
    }
    if (closed) body += " " + num(pts[0].x) + "," + num(flip_y(pts[0].y));
    body += "\"/>\n";
  }
};

// Sample a conic as polylines: one ring for an ellipse, 256 points per branch
// for a hyperbola, clipped segments for degenerate line pairs.
inline void draw_conic(Canvas& cv, const Conic& conic) {
  constexpr int kSamples = 256;
  ConicKind kind = classify(conic);
  if (kind == ConicKind::DegenerateLines) {
    // Doubled line a x + b y + c = 0 recovered from the quadratic part.
    double a = std::sqrt(std::abs(conic.coeffs[0]));
    double b = std::sqrt(std::abs(conic.coeffs[2]));
    if (conic.coeffs[1] < 0) b = -b;
    double n = std::hypot(a, b);
    if (n < 1e-14) return;
    double c = conic.coeffs[5] >= 0 ? std::sqrt(conic.coeffs[5]) : conic.coeffs[3] / (2 * a);
    LineShape l{{a / n, b / n}, -c / n};
    cv.line(l.foot({0, 0}), perp(l.normal), "conic");
    return;
  }
  if (kind != ConicKind::Ellipse && kind != ConicKind::Hyperbola &&
      kind != ConicKind::Circle)
    return;
  CentralFoci cf = central_foci(conic);
  Point ctr = cf.center;
  // Principal axes from the quadratic part.
  double A = conic.coeffs[0], B = conic.coeffs[1], C = conic.coeffs[2];
  double F0 = conic.eval(ctr);
  double tr = A + C, det = A * C - B * B / 4.0;
  double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  double l1 = tr / 2.0 + disc, l2 = tr / 2.0 - disc;
  Vec2 u1 = std::abs(B) > 1e-14 ? normalized(Vec2{B / 2.0, l1 - A})
                                : (A <= C ? Vec2{1, 0} : Vec2{0, 1});
  Vec2 u2 = perp(u1);
  if (kind == ConicKind::Ellipse || kind == ConicKind::Circle) {
    double a = std::sqrt(-F0 / l1), b = std::sqrt(-F0 / l2);
    std::vector<Point> pts;
    for (int i = 0; i < kSamples; ++i) {
      double t = 2.0 * std::numbers::pi * i / kSamples;
      pts.push_back(ctr + (a * std::cos(t)) * u1 + (b * std::sin(t)) * u2);
    }
    cv.polyline(pts, "conic", true);
  } else {
    // l1 and -F0 share sign on the transverse axis.
    if (l1 * -F0 < 0) {
      std::swap(l1, l2);
      std::swap(u1, u2);
    }
    double a = std::sqrt(-F0 / l1), b = std::sqrt(F0 / l2);
    for (int sign : {-1, 1}) {
      std::vector<Point> pts;
      for (int i = 0; i < kSamples; ++i) {
        double t = -3.0 + 6.0 * i / (kSamples - 1);
        pts.push_back(ctr + (sign * a * std::cosh(t)) * u1 +
                      (b * std::sinh(t)) * u2);
      }
      cv.polyline(pts, "conic", false);
    }
  }
}

inline void draw_chain(Canvas& cv, const Chain& c, const RenderLayers& layers,
                       double dot_r) {
  cv.gcircle(c.outer, "parent");
  cv.gcircle(c.inner, "parent");
  for (const auto& k : c.circles) cv.gcircle(k, "member");
  if (layers.points) {
    for (const auto& p : c.p_lines) cv.line(p.anchor, p.dir, "construction");
    for (const auto& t : c.t_lines) cv.line(t.anchor, t.dir, "construction");
    for (const auto& p : c.L) cv.dot(p, dot_r);
    for (const auto& p : c.M) cv.dot(p, dot_r);
    for (const auto& p : c.N) cv.dot(p, dot_r);
    if (c.A) cv.dot(*c.A, dot_r);
  }
}

}  // namespace svgdetail

inline std::string render_scene(const SceneConfig& scene) {
  const auto& r = scene.render;
  svgdetail::Canvas cv{{}, r.viewbox, r.stroke_width};
  double px = r.viewbox[2] / r.width_px;  // world units per pixel
  double dot_r = 2.0 * px;

  BuiltObjects built = build_objects(scene);
  for (const auto& o : scene.objects) {
    if (auto it = built.circles.find(o.name); it != built.circles.end()) {
      cv.gcircle(it->second, "parent");
    } else if (auto ic = built.chains.find(o.name); ic != built.chains.end()) {
      if (r.layers.chains) svgdetail::draw_chain(cv, ic->second, r.layers, dot_r);
      if (r.layers.secondary) {
        for (const auto& sc : secondary_circles(
                 ic->second, FamilySelector{Family::Varpi, 1, IndexRule::FixedDifference}))
          cv.gcircle(sc.circle, "secondary");
      }
    } else if (auto ip = built.pairs.find(o.name); ip != built.pairs.end()) {
      if (r.layers.chains) {
        svgdetail::draw_chain(cv, ip->second.first, r.layers, dot_r);
        svgdetail::draw_chain(cv, ip->second.second, r.layers, dot_r);
      }
      if (r.layers.secondary) {
        for (const auto& sc :
             secondary_circles(ip->second, FamilySelector{Family::C_i}))
          cv.gcircle(sc.circle, "secondary");
      }
    } else if (auto il = built.loci.find(o.name); il != built.loci.end()) {
      const auto& prob = il->second;
      cv.circle({0, 0}, 1.0, "parent");
      cv.circle(prob.omega_center, prob.omega_radius, "parent");
      cv.line({prob.line_offset, 0.0}, {0.0, 1.0}, "construction");
      if (r.layers.conics) {
        IncidenceReport rep = locus_lemma45(prob);
        svgdetail::draw_conic(cv, std::get<Conic>(rep.artifacts.at("conic")));
      }
    }
  }

  int height_px = int(r.width_px * r.viewbox[3] / r.viewbox[2] + 0.5);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(r.width_px) + "\" height=\"" + std::to_string(height_px) +
         "\" viewBox=\"" + svgdetail::num(r.viewbox[0]) + " " +
         svgdetail::num(r.viewbox[1]) + " " + svgdetail::num(r.viewbox[2]) + " " +
         svgdetail::num(r.viewbox[3]) + "\">\n";
  out += "  <style>\n"
         "    .frame{fill:none;stroke:#888;stroke-width:" + svgdetail::num(cv.stroke) + "}\n"
         "    .parent{fill:none;stroke:#000;stroke-width:" + svgdetail::num(cv.stroke) + "}\n"
         "    .member{fill:none;stroke:#1f6fb2;stroke-width:" + svgdetail::num(cv.stroke) + "}\n"
         "    .secondary{fill:none;stroke:#b2341f;stroke-width:" + svgdetail::num(cv.stroke) + "}\n"
         "    .construction{fill:none;stroke:#999;stroke-width:" + svgdetail::num(cv.stroke * 0.5) + "}\n"
         "    .conic{fill:none;stroke:#0a7d2c;stroke-width:" + svgdetail::num(cv.stroke) + "}\n"
         "    .pt{fill:#000;stroke:none}\n"
         "  </style>\n";
  out += "  <rect class=\"frame\" x=\"" + svgdetail::num(r.viewbox[0]) + "\" y=\"" +
         svgdetail::num(r.viewbox[1]) + "\" width=\"" + svgdetail::num(r.viewbox[2]) +
         "\" height=\"" + svgdetail::num(r.viewbox[3]) + "\"/>\n";
  out += cv.body;
  out += "</svg>\n";
  return out;
}

inline void write_svg(const SceneConfig& scene, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << render_scene(scene);
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace ppchain
