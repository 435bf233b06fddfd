#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "solgraph/common.hpp"
#include "solgraph/connectors.hpp"
#include "solgraph/curve.hpp"
#include "solgraph/quadrature.hpp"

namespace solgraph {

struct CircleArc {
  Point center;
  double radius = 1.0;
  double angle_lo = 0.0;
  double angle_hi = kPi;
};

struct Segment {
  Point a;
  Point b;
};

using PathGeom = std::variant<ArcOnCurve, CircleArc, Segment>;

enum class ArcKind { A, B, C };

// One piece of a domain boundary: typed geometry plus traversal direction
// along the closed boundary (+1 follows the native parameter, -1 reverses).
struct BoundaryArc {
  ArcKind kind = ArcKind::C;
  PathGeom geometry;
  int orientation = 1;
};

struct AdmissibleDomain {
  std::vector<BoundaryArc> arcs;  // counterclockwise
  std::vector<Point> vertices;    // arc meeting points, in boundary order
  double H = 1.0;
  std::vector<ArcOnCurve> b_star_arcs;  // one per B arc, in boundary order
};

// ---- parametrized access to path geometry -------------------------------

inline Point geom_point_native(const PathGeom& g, double s) {  // s in [0,1]
  if (const auto* arc = std::get_if<ArcOnCurve>(&g))
    return gamma(arc->curve, arc->t_lo + s * (arc->t_hi - arc->t_lo));
  if (const auto* c = std::get_if<CircleArc>(&g)) {
    double a = c->angle_lo + s * (c->angle_hi - c->angle_lo);
    return {c->center.x + c->radius * std::cos(a),
            c->center.y + c->radius * std::sin(a)};
  }
  const auto& seg = std::get<Segment>(g);
  return {seg.a.x + s * (seg.b.x - seg.a.x), seg.a.y + s * (seg.b.y - seg.a.y)};
}

inline Point geom_velocity_native(const PathGeom& g, double s) {
  if (const auto* arc = std::get_if<ArcOnCurve>(&g)) {
    double span = arc->t_hi - arc->t_lo;
    Point d = gamma_derivative(arc->curve, arc->t_lo + s * span);
    return {d.x * span, d.y * span};
  }
  if (const auto* c = std::get_if<CircleArc>(&g)) {
    double span = c->angle_hi - c->angle_lo;
    double a = c->angle_lo + s * span;
    return {-c->radius * std::sin(a) * span, c->radius * std::cos(a) * span};
  }
  const auto& seg = std::get<Segment>(g);
  return {seg.b.x - seg.a.x, seg.b.y - seg.a.y};
}

inline Point arc_point(const BoundaryArc& b, double s) {
  return geom_point_native(b.geometry, b.orientation > 0 ? s : 1.0 - s);
}

inline Point arc_velocity(const BoundaryArc& b, double s) {
  Point v = geom_velocity_native(b.geometry, b.orientation > 0 ? s : 1.0 - s);
  return b.orientation > 0 ? v : Point{-v.x, -v.y};
}

inline Point arc_first(const BoundaryArc& b) { return arc_point(b, 0.0); }
inline Point arc_last(const BoundaryArc& b) { return arc_point(b, 1.0); }

inline double geom_length(const PathGeom& g) {
  if (const auto* arc = std::get_if<ArcOnCurve>(&g)) return arc_length(*arc);
  if (const auto* c = std::get_if<CircleArc>(&g))
    return c->radius * (c->angle_hi - c->angle_lo);
  const auto& seg = std::get<Segment>(g);
  return dist(seg.a, seg.b);
}

inline double domain_diameter(const AdmissibleDomain& d) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& b : d.arcs)
    for (int i = 0; i <= 32; ++i) {
      Point p = arc_point(b, i / 32.0);
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  return std::hypot(xmax - xmin, ymax - ymin);
}

// ---- closed-boundary integrals ------------------------------------------

namespace detail {

inline bool segments_cross(Point a, Point b, Point c, Point d) {
  auto orient = [](Point p, Point q, Point r) {
    return cross(q - p, r - p);
  };
  double o1 = orient(a, b, c), o2 = orient(a, b, d);
  double o3 = orient(c, d, a), o4 = orient(c, d, b);
  double eps = 1e-14 * (norm(b - a) + norm(d - c) + 1.0);
  // strict transversal crossing only; shared endpoints and overlaps pass
  return (o1 > eps && o2 < -eps && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps))) ||
         (o1 < -eps && o2 > eps && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps)));
}

inline void check_closed(const std::vector<BoundaryArc>& arcs, double tol) {
  if (arcs.empty()) throw GeometryError("region_integral: empty boundary");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    Point e = arc_last(arcs[i]);
    Point s = arc_first(arcs[(i + 1) % arcs.size()]);
    if (dist(e, s) > tol)
      throw GeometryError("region_integral: boundary does not close up");
  }
}

inline std::vector<Point> sample_loop(const std::vector<BoundaryArc>& arcs,
                                      int per_arc) {
  std::vector<Point> pts;
  for (const auto& b : arcs)
    for (int i = 0; i < per_arc; ++i)
      pts.push_back(arc_point(b, static_cast<double>(i) / per_arc));
  return pts;
}

inline void check_simple(const std::vector<BoundaryArc>& arcs) {
  auto pts = sample_loop(arcs, 96);
  std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]))
        throw GeometryError("region_integral: boundary self-intersects");
    }
  }
}

}  // namespace detail

// Weighted area I = int (1/y) da over the region enclosed by a closed,
// simple, counterclockwise boundary, via the exact one-form I = -oint ln(y) dx.
inline double region_integral(const std::vector<BoundaryArc>& arcs) {
  double scale = 0.0;
  for (const auto& b : arcs) scale = std::max(scale, norm(arc_first(b)));
  detail::check_closed(arcs, 1e-8 * std::max(1.0, scale));
  detail::check_simple(arcs);
  double total = 0.0;
  for (const auto& b : arcs) {
    total += integrate_smooth(
        [&](double s) {
          Point p = arc_point(b, s);
          Point v = arc_velocity(b, s);
          return std::log(p.y) * v.x;
        },
        0.0, 1.0);
  }
  return -total;
}

inline double boundary_signed_area(const std::vector<BoundaryArc>& arcs) {
  double total = 0.0;
  for (const auto& b : arcs)
    total += integrate_smooth(
        [&](double s) {
          Point p = arc_point(b, s);
          Point v = arc_velocity(b, s);
          return p.x * v.y;
        },
        0.0, 1.0);
  return total;
}

// ---- containment --------------------------------------------------------

// Closed polyline of the domain boundary (counterclockwise), ~n points total.
inline std::vector<Point> domain_polyline(const AdmissibleDomain& d, int n) {
  int per = std::max(8, n / std::max(1, static_cast<int>(d.arcs.size())));
  return detail::sample_loop(d.arcs, per);
}

inline double polyline_signed_distance(const std::vector<Point>& poly,
                                       Point p) {
  // crossing-number inside test plus distance to the polyline
  double dmin = 1e300;
  bool inside = false;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point a = poly[i], b = poly[(i + 1) % n];
    Point ab = b - a;
    double tproj = std::clamp(dot(p - a, ab) / std::max(1e-300, dot(ab, ab)),
                              0.0, 1.0);
    dmin = std::min(dmin, dist(p, a + tproj * ab));
    if ((a.y > p.y) != (b.y > p.y)) {
      double xint = a.x + (p.y - a.y) / (b.y - a.y) * ab.x;
      if (xint > p.x) inside = !inside;
    }
  }
  return inside ? dmin : -dmin;  // positive inside
}

// ---- validation ----------------------------------------------------------

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
  void fail(const std::string& msg) {
    ok = false;
    issues.push_back(msg);
  }
};

// Signed curvature (positive = turning left) along the traversal at s.
inline double arc_signed_curvature(const BoundaryArc& b, double s) {
  if (const auto* c = std::get_if<CircleArc>(&b.geometry))
    return b.orientation / c->radius;
  if (const auto* arc = std::get_if<ArcOnCurve>(&b.geometry)) {
    double y = arc_point(b, s).y;
    // native parameter traversal has signed curvature -2H/y
    return -b.orientation * 2.0 * arc->curve.H / y;
  }
  return 0.0;
}

// Convexity of the lens bounded by a B arc and a candidate companion:
// sampled turning direction must keep one sign around the closed lens.
inline bool lens_is_convex(const BoundaryArc& barc, const ArcOnCurve& star) {
  std::vector<Point> loop;
  const int m = 100;
  for (int i = 0; i < m; ++i) loop.push_back(arc_point(barc, i / double(m)));
  Point bend = arc_last(barc);
  bool star_fwd = dist(arc_start(star), bend) < dist(arc_end(star), bend);
  for (int i = 0; i < m; ++i) {
    double s = i / double(m);
    double t = star_fwd ? star.t_lo + s * (star.t_hi - star.t_lo)
                        : star.t_hi - s * (star.t_hi - star.t_lo);
    loop.push_back(gamma(star.curve, t));
  }
  double scale = 0.0;
  for (auto& p : loop) scale = std::max(scale, norm(p));
  int pos = 0, neg = 0;
  std::size_t nn = loop.size();
  for (std::size_t i = 0; i < nn; ++i) {
    Point a = loop[i], b = loop[(i + 1) % nn], c = loop[(i + 2) % nn];
    double cr = cross(b - a, c - b);
    if (cr > 1e-12 * scale * scale) ++pos;
    if (cr < -1e-12 * scale * scale) ++neg;
  }
  return pos == 0 || neg == 0;
}

inline ValidationReport validate_domain(const AdmissibleDomain& d) {
  ValidationReport rep;
  double scale = std::max(1.0, domain_diameter(d));
  // closure
  try {
    detail::check_closed(d.arcs, 1e-8 * scale);
  } catch (const GeometryError& e) {
    rep.fail(e.what());
  }
  // adjacency rule: no two A arcs and no two B arcs share an endpoint
  std::size_t n = d.arcs.size();
  for (std::size_t i = 0; i < n; ++i) {
    ArcKind a = d.arcs[i].kind, b = d.arcs[(i + 1) % n].kind;
    if (a == b && (a == ArcKind::A || a == ArcKind::B))
      rep.fail("two adjacent arcs of the same infinite-data kind");
  }
  // simplicity
  try {
    detail::check_simple(d.arcs);
  } catch (const GeometryError& e) {
    rep.fail(e.what());
  }
  // curvature kinds relative to the interior (counterclockwise => left)
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = d.arcs[i];
    for (int k = 1; k < 32; ++k) {
      double s = k / 32.0;
      double y = arc_point(b, s).y;
      double kappa = arc_signed_curvature(b, s);
      double want = 2.0 * d.H / y;
      bool good = true;
      if (b.kind == ArcKind::A) good = std::abs(kappa - want) <= 1e-8 * want;
      if (b.kind == ArcKind::B) good = std::abs(kappa + want) <= 1e-8 * want;
      if (b.kind == ArcKind::C) good = kappa >= want * (1.0 - 1e-9);
      if (!good) {
        rep.fail("arc " + std::to_string(i) + " violates its curvature kind");
        break;
      }
    }
  }
  // every B arc carries a companion arc with a convex lens
  std::size_t bseen = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d.arcs[i].kind != ArcKind::B) continue;
    if (bseen >= d.b_star_arcs.size()) {
      rep.fail("missing companion arc for a B arc");
      break;
    }
    const ArcOnCurve& star = d.b_star_arcs[bseen++];
    Point p1 = arc_first(d.arcs[i]), q1 = arc_last(d.arcs[i]);
    Point a1 = arc_start(star), b1 = arc_end(star);
    double m = std::min(dist(a1, p1) + dist(b1, q1), dist(a1, q1) + dist(b1, p1));
    if (m > 1e-7 * scale) rep.fail("companion arc endpoints mismatch");
    if (!lens_is_convex(d.arcs[i], star))
      rep.fail("companion lens is not convex");
  }
  return rep;
}

// Companion arc B*: the curvature +2H/y arc joining the endpoints of the
// indexed B arc on the non-domain side that closes a convex lens. Among
// admissible candidates the shortest one is returned.
inline ArcOnCurve b_star(const AdmissibleDomain& d, std::size_t b_index) {
  if (b_index >= d.arcs.size() || d.arcs[b_index].kind != ArcKind::B)
    throw ArgumentError("b_star: index does not name a B arc");
  const BoundaryArc& barc = d.arcs[b_index];
  Point p = arc_first(barc), q = arc_last(barc);
  auto poly = domain_polyline(d, 4096);
  double diam = domain_diameter(d);
  Point bmid = arc_point(barc, 0.5);

  std::vector<ArcOnCurve> cands = connectors(p, q, d.H);
  const ArcOnCurve* best = nullptr;
  double best_len = 1e300;
  for (const auto& c : cands) {
    Point cmid = gamma(c.curve, 0.5 * (c.t_lo + c.t_hi));
    if (dist(cmid, bmid) < 1e-6 * diam) continue;  // the B arc itself
    bool outside = true;
    for (int i = 1; i < 32 && outside; ++i) {
      double t = c.t_lo + (c.t_hi - c.t_lo) * i / 32.0;
      if (polyline_signed_distance(poly, gamma(c.curve, t)) > 1e-6 * diam)
        outside = false;
    }
    if (!outside) continue;
    if (!lens_is_convex(barc, c)) continue;
    double len = arc_length(c);
    if (len < best_len) {
      best_len = len;
      best = &c;
    }
  }
  if (!best)
    throw GeometryError(
        "b_star: no convex companion arc found (domain not admissible)");
  return *best;
}

}  // namespace solgraph
