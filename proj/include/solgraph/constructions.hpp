#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "solgraph/common.hpp"
#include "solgraph/connectors.hpp"
#include "solgraph/curve.hpp"
#include "solgraph/domain.hpp"

namespace solgraph {

namespace detail {

// Cap over a top junction: the concave-down arc joining (mid -+ sep/2, z),
// contained in {y >= z}. Exists uniquely with feet parameter s in (1,2) when
// sep < 2 z e^{-1/2H} (M_H + L_H).
inline ArcOnCurve cap_arc(double mid, double z, double sep, double H,
                          const CurveConstants& k) {
  double lam = sep / z;
  if (!(lam < cap_separation(H, 1.0, k.M)))
    throw UnsupportedConfiguration("cap arc: separation too large");
  double s = find_root(
      [&](double ss) { return cap_separation(H, ss, k.M) - lam; },
      RootSpec{1.0, 2.0 - 1e-13, 1e-14, 300});
  double zc = z * std::exp(-s / (2.0 * H));
  double theta = std::acos(std::clamp(1.0 - s, -1.0, 1.0));
  return {{mid - zc * k.M, zc, H}, theta, 2.0 * kPi - theta};
}

// Cup through a loop bottom joining (mid -+ sep/2, z), contained in
// {y <= z}; shallow picks the branch without vertical tangencies.
inline ArcOnCurve cup_arc(double mid, double z, double sep, double H,
                          const CurveConstants& k, bool shallow) {
  double lam = sep / z;
  double tmax = 1.0 + k.T;
  double targ = find_root(
      [&](double t) {
        return g_weight(H, -1.0 + t) - g_integral_to(H, -1.0 + t) / (2.0 * H);
      },
      RootSpec{1e-9, tmax - 1e-11, 1e-13, 300});
  if (!(lam < lbar_raw(H, targ)))
    throw UnsupportedConfiguration("cup arc: separation too large");
  double t = shallow
                 ? find_root([&](double tt) { return lbar_raw(H, tt) - lam; },
                             RootSpec{1e-12, targ, 1e-14, 300})
                 : find_root([&](double tt) { return lbar_raw(H, tt) - lam; },
                             RootSpec{targ, tmax - 1e-12, 1e-14, 300});
  double zc = z * std::exp(-t / (2.0 * H));
  double theta = std::acos(std::clamp(1.0 - t, -1.0, 1.0));
  return {{mid, zc, H}, -theta, theta};
}

// Slab arc joining vertically aligned points, bulging toward side*x.
inline ArcOnCurve slab_arc(Point lo, Point hi, double H, int side) {
  auto pair = vertical_connectors(lo, hi, H);
  for (const auto& a : pair) {
    Point m = gamma(a.curve, 0.5 * (a.t_lo + a.t_hi));
    if (side * (m.x - lo.x) > 0.0) return a;
  }
  throw GeometryError("slab arc: requested side not found");
}

// Orientation flag so that the boundary piece runs from `from` to `to`.
inline int orient_from(const PathGeom& g, Point from, double tol) {
  Point s = geom_point_native(g, 0.0), e = geom_point_native(g, 1.0);
  if (dist(s, from) <= tol) return 1;
  if (dist(e, from) <= tol) return -1;
  throw GeometryError("boundary arc does not touch the requested vertex");
}

// Semicircle with diameter pq bulging toward `outward` (unit-free hint).
inline CircleArc semicircle(Point p, Point q, Point outward) {
  Point c = 0.5 * (p + q);
  double r = 0.5 * dist(p, q);
  double a_p = std::atan2(p.y - c.y, p.x - c.x);
  // the half whose midpoint lies on the outward side
  Point mid1{c.x + r * std::cos(a_p + 0.5 * kPi),
             c.y + r * std::sin(a_p + 0.5 * kPi)};
  bool up = dot(mid1 - c, outward) > 0.0;
  double lo = up ? a_p : a_p - kPi;
  return {c, r, lo, lo + kPi};
}

}  // namespace detail

// Certified sufficient smallness check for the bounded-subsolution
// requirement: the domain fits in a Euclidean disk B_R(x0, y0+R) with
//   H <= sqrt(2)  or  H <= sqrt(2) ((1+2R/y0)^sqrt2 + 1)/((1+2R/y0)^sqrt2 - 1).
inline bool small_domain_feasible(double H, double R, double y0) {
  if (!(R > 0.0) || !(y0 > 0.0))
    throw ArgumentError("small_domain_feasible: R, y0 must be positive");
  if (H <= std::sqrt(2.0)) return true;
  double t = std::pow(1.0 + 2.0 * R / y0, std::sqrt(2.0));
  return H <= std::sqrt(2.0) * (t + 1.0) / (t - 1.0);
}

// Fit a disk of the required form around the domain and evaluate the check.
inline bool subsolution_certificate(const AdmissibleDomain& d) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& b : d.arcs)
    for (int i = 0; i <= 64; ++i) {
      Point p = arc_point(b, i / 64.0);
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  Point c{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
  double R = 0.5 * std::hypot(xmax - xmin, ymax - ymin) * 1.0000001;
  double y0 = c.y - R;
  if (!(y0 > 0.0)) return false;
  return small_domain_feasible(d.H, R, y0);
}

// Rectangle-based domain with two slab arcs (kind A) at the diagonal
// corners and two semicircles: the B-family is empty, so the relevant
// solvability condition is 2 alpha < l + 2H I(P).
inline AdmissibleDomain build_b_empty(Point p, double d, double eps, double H) {
  if (!(H > 0.0) || !(p.y > 0.0))
    throw ArgumentError("build_b_empty: need H > 0 and p.y > 0");
  if (!(d > 0.0) || !(d < 2.0 * p.y / (3.0 + 2.0 * H)))
    throw ConstructionError(
        "build_b_empty: diagonal bound d < 2 y(p)/(3+2H) violated");
  CurveConstants k = curve_constants(H);
  double half = d / (2.0 * std::sqrt(2.0));
  Point q1 = p - Point{half, half}, q2 = p + Point{half, half};
  if (!(eps > 0.0) || !(eps < q1.y * (std::exp(k.T / (2.0 * H)) - 1.0)))
    throw ConstructionError(
        "build_b_empty: segment bound eps < y(q1)(e^{T_H/2H}-1) violated");

  Point q1lo = q1 - Point{0, eps / 2}, q1hi = q1 + Point{0, eps / 2};
  Point q2lo = q2 - Point{0, eps / 2}, q2hi = q2 + Point{0, eps / 2};
  ArcOnCurve a1 = detail::slab_arc(q1lo, q1hi, H, -1);  // bulges away from p
  ArcOnCurve a2 = detail::slab_arc(q2lo, q2hi, H, +1);
  if (!(arc_length(a1) < d / 2.0 && arc_length(a2) < d / 2.0))
    throw ConstructionError(
        "build_b_empty: slab arc length >= d/2, reduce eps");

  CircleArc c1 = detail::semicircle(q1lo, q2lo, Point{half, -half});
  CircleArc c2 = detail::semicircle(q2hi, q1hi, Point{-half, half});
  double tol = 1e-9 * std::max(1.0, p.y);

  AdmissibleDomain dom;
  dom.H = H;
  dom.arcs = {
      {ArcKind::A, a1, detail::orient_from(PathGeom{a1}, q1hi, tol)},
      {ArcKind::C, c1, detail::orient_from(PathGeom{c1}, q1lo, tol)},
      {ArcKind::A, a2, detail::orient_from(PathGeom{a2}, q2lo, tol)},
      {ArcKind::C, c2, detail::orient_from(PathGeom{c2}, q2hi, tol)},
  };
  dom.vertices = {q1hi, q1lo, q2lo, q2hi};
  return dom;
}

enum class TangencyCase { Generic, VerticalTangent, HorizontalTangent };

struct AEmptyOptions {
  double size_frac = 0.6;  // fraction of the governing bound used for d or h
  double eps_frac = 0.25;  // fraction of the eps bound (Generic/Vertical)
  double size = 0.0;       // explicit d (Generic/Vertical) or h (Horizontal)
  double eps = 0.0;        // explicit eps, or b for the horizontal case
};

// Domain around a point of a 2H/y-curve bounded by two B arcs and two
// circle arcs; the A-family is empty. Three cases by the tangent at p.
inline AdmissibleDomain build_a_empty(const CurveParams& curve, double p_param,
                                      TangencyCase tcase,
                                      const AEmptyOptions& opt = {}) {
  check_curve(curve);
  const double H = curve.H;
  CurveConstants k = curve_constants(H);
  Point p = gamma(curve, p_param);
  const double yp = p.y;
  double tol = 1e-9 * std::max(1.0, yp);

  AdmissibleDomain dom;
  dom.H = H;

  if (tcase == TangencyCase::HorizontalTangent) {
    double hmax = 2.0 * yp * std::tanh(k.T / (4.0 * H));
    double bmax = yp / (4.0 * H + 1.0);
    double h = opt.size > 0.0 ? opt.size : opt.size_frac * hmax;
    double b = opt.eps > 0.0 ? opt.eps : opt.eps_frac * bmax;
    if (!(h > 0.0) || !(h < hmax))
      throw ConstructionError(
          "build_a_empty: side bound h < 2 y(p) tanh(T_H/4H) violated");
    if (!(b > 0.0) || !(b <= bmax))
      throw ConstructionError(
          "build_a_empty: base bound b <= y(p)/(4H+1) violated");
    Point bl = p + Point{-b / 2, -h / 2}, br = p + Point{b / 2, -h / 2};
    Point tl = p + Point{-b / 2, h / 2}, tr = p + Point{b / 2, h / 2};
    ArcOnCurve b1 = detail::slab_arc(bl, tl, H, +1);  // left side, bulges in
    ArcOnCurve b2 = detail::slab_arc(br, tr, H, -1);
    CircleArc c1 = detail::semicircle(bl, br, Point{0, -1});
    CircleArc c2 = detail::semicircle(tr, tl, Point{0, 1});
    dom.arcs = {
        {ArcKind::C, c1, detail::orient_from(PathGeom{c1}, bl, tol)},
        {ArcKind::B, b2, detail::orient_from(PathGeom{b2}, br, tol)},
        {ArcKind::C, c2, detail::orient_from(PathGeom{c2}, tr, tol)},
        {ArcKind::B, b1, detail::orient_from(PathGeom{b1}, tl, tol)},
    };
    dom.vertices = {bl, br, tr, tl};
    dom.b_star_arcs = {mirror_arc(b2, br.x), mirror_arc(b1, bl.x)};
    return dom;
  }

  double ebound = 2.0 * yp * std::exp(-1.0 / H) * k.L;
  double eps = opt.eps > 0.0 ? opt.eps : opt.eps_frac * ebound;
  if (!(eps > 0.0) || !(eps < ebound))
    throw ConstructionError(
        "build_a_empty: segment bound eps < 2 y(p) e^{-1/H} L_H violated");

  Point q1, q2;  // lower and upper gap centers
  double d = 0.0;
  if (tcase == TangencyCase::VerticalTangent) {
    double dmax = std::min(yp * (1.0 - std::exp(-0.5 / H)),
                           2.0 * yp / (8.0 * H + 1.0));
    d = opt.size > 0.0 ? opt.size : opt.size_frac * dmax;
    if (!(d > 0.0) || !(d < dmax))
      throw ConstructionError(
          "build_a_empty: height bound d < min{y(p)(1-e^{-1/2H}), "
          "2y(p)/(8H+1)} violated");
    q1 = p - Point{0, d / 2};
    q2 = p + Point{0, d / 2};
  } else {
    double dmax = std::min(2.0 * yp / 3.0 * (1.0 - std::exp(-0.5 / H)),
                           2.0 * yp / (8.0 * H + 3.0));
    d = opt.size > 0.0 ? opt.size : opt.size_frac * dmax;
    if (!(d > 0.0) || !(d < dmax))
      throw ConstructionError(
          "build_a_empty: diagonal bound d < min{(2y(p)/3)(1-e^{-1/2H}), "
          "2y(p)/(8H+3)} violated");
    double ct = std::cos(p_param), st = std::sin(p_param);
    if (std::abs(ct) < 0.05 || std::abs(st) < 0.05)
      throw ArgumentError(
          "build_a_empty: tangent nearly axis-aligned, use a tangency case");
    // corners on the curve, symmetric in parameter around p
    double quarter = 0.5 * kPi;
    double dmaxparam =
        std::min(std::abs(std::remainder(p_param, quarter)),
                 quarter - std::abs(std::remainder(p_param, quarter)));
    dmaxparam = 0.98 * std::min(quarter, dmaxparam + quarter / 2);
    auto width = [&](double del) {
      return dist(gamma(curve, p_param - del), gamma(curve, p_param + del)) - d;
    };
    if (width(dmaxparam) < 0.0)
      throw ConstructionError(
          "build_a_empty: rectangle does not fit a monotone piece of the curve");
    double del = find_root(width, RootSpec{1e-9, dmaxparam, 1e-13, 200});
    Point qa = gamma(curve, p_param - del), qb = gamma(curve, p_param + del);
    q1 = qa.y < qb.y ? qa : qb;
    q2 = qa.y < qb.y ? qb : qa;
  }

  Point q1l = q1 - Point{eps / 2, 0}, q1r = q1 + Point{eps / 2, 0};
  Point q2l = q2 - Point{eps / 2, 0}, q2r = q2 + Point{eps / 2, 0};
  // bottom gap: concave-down cap bulging into the domain; top gap: cup
  ArcOnCurve b1 = detail::cap_arc(q1.x, q1.y, eps, H, k);
  ArcOnCurve b2 = detail::cup_arc(q2.x, q2.y, eps, H, k, /*shallow=*/true);

  Point away = q1 - q2;  // outward hint for the lower circle
  CircleArc c1 = detail::semicircle(q1l, q2l, Point{away.y, -away.x});
  CircleArc c2 = detail::semicircle(q2r, q1r, Point{-away.y, away.x});
  // pick the circle sides so the domain is simple: C1 joins the left
  // endpoints bulging left of the chord direction, C2 the right endpoints.
  dom.arcs = {
      {ArcKind::B, b1, detail::orient_from(PathGeom{b1}, q1l, tol)},
      {ArcKind::C, c2, detail::orient_from(PathGeom{c2}, q1r, tol)},
      {ArcKind::B, b2, detail::orient_from(PathGeom{b2}, q2r, tol)},
      {ArcKind::C, c1, detail::orient_from(PathGeom{c1}, q2l, tol)},
  };
  dom.vertices = {q1l, q1r, q2r, q2l};
  dom.b_star_arcs = {detail::cup_arc(q1.x, q1.y, eps, H, k, true),
                     detail::cap_arc(q2.x, q2.y, eps, H, k)};
  return dom;
}

}  // namespace solgraph
