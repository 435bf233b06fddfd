#pragma once

#include <cmath>
#include <vector>

#include "solgraph/common.hpp"
#include "solgraph/connectors.hpp"
#include "solgraph/constructions.hpp"
#include "solgraph/curve.hpp"
#include "solgraph/domain.hpp"

namespace solgraph {

// Height-parameter bijection phi: [0,1] -> [1, 1+T_H] defined by
// int_{s-1}^{phi(s)-1} g_H = 0; phi(s) locates the second crossing of the
// vertical through gamma^+(s) with the loop.
inline double phi_of_s(double H, double s) {
  if (!(H > 0.0)) throw ArgumentError("phi_of_s: H > 0 required");
  if (!(s >= 0.0 && s <= 1.0)) throw ArgumentError("phi_of_s: s in [0,1]");
  CurveConstants k = curve_constants(H);
  if (s == 0.0) return 1.0 + k.T;
  if (s == 1.0) return 1.0;
  double target = detail::g_integral_to(H, s - 1.0);
  return find_root(
      [&](double ph) { return detail::g_integral_to(H, ph - 1.0) - target; },
      RootSpec{1.0, 1.0 + k.T, 1e-14, 300});
}

// Height parameter e(s) of the lowest point of the upper connector B_E:
//   e^{e/2H} int_{-1}^{-1+phi(s)-e} g_H = int_{-1}^{-1+s} g_H.
// e = 0 solves this trivially (the loop itself); the geometric root is the
// larger one, bounded below by 2(phi(s)-1).
inline double e_of_s(double H, double s) {
  if (!(s > 0.0 && s < 1.0)) throw ArgumentError("e_of_s: s in (0,1)");
  double ph = phi_of_s(H, s);
  double target = detail::g_integral_to(H, s - 1.0);
  auto h = [&](double e) {
    return std::exp(e / (2.0 * H)) *
               detail::g_integral_to(H, -1.0 + ph - e) -
           target;
  };
  double lo = 2.0 * (ph - 1.0);
  if (h(lo) <= 0.0) {
    // fall back to a scan for the outermost sign change
    double prev = lo * 0.5, fprev = h(prev);
    double found_lo = -1.0, found_hi = -1.0;
    for (int i = 1; i <= 256; ++i) {
      double x = lo * 0.5 + (ph - 1e-12 - lo * 0.5) * i / 256.0;
      double fx = h(x);
      if (fprev > 0.0 && fx <= 0.0) {
        found_lo = prev;
        found_hi = x;
      }
      prev = x;
      fprev = fx;
    }
    if (found_lo < 0.0) throw ConvergenceError("e_of_s: no sign change", 0.0);
    return find_root(h, RootSpec{found_lo, found_hi, 1e-14, 300});
  }
  return find_root(h, RootSpec{lo, ph - 1e-13, 1e-14, 300});
}

// Height parameter d(s) of the highest point of the lower connector B_D:
//   e^{(d-2)/2H} int_{1-(d-s)}^{1} (-g_H) = int_{-1}^{-1+s} g_H,
// with s < d(s) < 2s.
inline double d_of_s(double H, double s) {
  if (!(s > 0.0 && s < 1.0)) throw ArgumentError("d_of_s: s in (0,1)");
  double target = detail::g_integral_to(H, s - 1.0);
  double g1 = detail::g_integral_to(H, 1.0);
  auto f = [&](double dd) {
    double tail = detail::g_integral_to(H, 1.0 - (dd - s)) - g1;  // int (-g)
    return std::exp((dd - 2.0) / (2.0 * H)) * tail - target;
  };
  return find_root(f, RootSpec{s + 1e-13, 2.0 * s, 1e-14, 300});
}

// Parameter s0 at which the two connectors touch: root of d(s) = e(s).
inline double s_zero(double y0, double H) {
  if (!(y0 > 0.0) || !(H > 0.0)) throw ArgumentError("s_zero: y0, H > 0");
  return find_root([&](double s) { return d_of_s(H, s) - e_of_s(H, s); },
                   RootSpec{0.02, 0.999, 1e-12, 300});
}

struct OmegaS {
  AdmissibleDomain domain;
  double s = 0.0, phi = 0.0, e = 0.0, d = 0.0;
  double alpha = 0.0, beta = 0.0;  // A-side / B-side total lengths
};

// Domain of the one-parameter family inside one loop of the curve with base
// point (0, y0): side arcs A+- on the loop between height parameters s and
// phi(s), connected below by the cap B_D and above by the cup B_E.
inline OmegaS build_omega_s(double y0, double H, double s) {
  if (!(y0 > 0.0) || !(H > 0.0))
    throw ArgumentError("build_omega_s: y0, H > 0");
  if (!(s > 0.0 && s < 1.0)) throw ArgumentError("build_omega_s: s in (0,1)");
  CurveConstants k = curve_constants(H);
  OmegaS om;
  om.s = s;
  om.phi = phi_of_s(H, s);
  om.e = e_of_s(H, s);
  om.d = d_of_s(H, s);
  if (!(om.d < om.e))
    throw GeometryError("build_omega_s: connectors intersect (s >= s0)");

  const double C = std::exp(0.5 / H) / (2.0 * H);
  double xs = y0 * C * detail::g_integral_to(H, s - 1.0);
  Point Dp{xs, y0 * std::exp(s / (2.0 * H))};
  Point Dm{-xs, Dp.y};
  Point Ep{xs, y0 * std::exp(om.phi / (2.0 * H))};
  Point Em{-xs, Ep.y};

  CurveParams loop{0.0, y0, H};
  double tD = std::acos(std::clamp(1.0 - s, -1.0, 1.0));
  double tE = std::acos(std::clamp(1.0 - om.phi, -1.0, 1.0));
  ArcOnCurve a_plus{loop, -tE, -tD};
  ArcOnCurve a_minus{loop, tD, tE};

  double zD = y0 * std::exp((om.d - 2.0) / (2.0 * H));
  double thD = std::acos(std::clamp(-(1.0 - (om.d - s)), -1.0, 1.0));
  ArcOnCurve b_d{{-zD * k.M, zD, H}, thD, 2.0 * kPi - thD};

  double zE = y0 * std::exp(om.e / (2.0 * H));
  double thE = std::acos(std::clamp(1.0 - (om.phi - om.e), -1.0, 1.0));
  ArcOnCurve b_e{{0.0, zE, H}, -thE, thE};

  double tol = 1e-8 * std::max(1.0, Ep.y);
  detail::check_arc_endpoints(b_d, Dm, Dp, tol);
  detail::check_arc_endpoints(b_e, Em, Ep, tol);

  AdmissibleDomain dom;
  dom.H = H;
  dom.arcs = {
      {ArcKind::B, b_d, detail::orient_from(PathGeom{b_d}, Dm, tol)},
      {ArcKind::A, a_plus, detail::orient_from(PathGeom{a_plus}, Dp, tol)},
      {ArcKind::B, b_e, detail::orient_from(PathGeom{b_e}, Ep, tol)},
      {ArcKind::A, a_minus, detail::orient_from(PathGeom{a_minus}, Em, tol)},
  };
  dom.vertices = {Dm, Dp, Ep, Em};
  // companions: the shallow cup under the D chord, the cap over the E chord
  dom.b_star_arcs = {
      detail::cup_arc(0.0, Dp.y, 2.0 * xs, H, k, /*shallow=*/true),
      detail::cap_arc(0.0, Ep.y, 2.0 * xs, H, k)};

  om.alpha = arc_length(a_plus) + arc_length(a_minus);
  om.beta = arc_length(b_d) + arc_length(b_e);
  om.domain = dom;
  return om;
}

// F(s) = alpha(s) - beta(s) - 2H I(Omega_s), extended by continuity to
// s = 0 where the domain is the full loop.
inline double omega_s_condition_value(double y0, double H, double s) {
  if (s <= 1e-9) {
    CurveConstants k = curve_constants(H);
    CurveParams loop{0.0, y0, H};
    double t3 = std::acos(-k.T);
    double alpha = 2.0 * arc_length(ArcOnCurve{loop, 0.0, t3});
    std::vector<BoundaryArc> bnd = {
        {ArcKind::A, ArcOnCurve{loop, -t3, 0.0}, 1},
        {ArcKind::A, ArcOnCurve{loop, 0.0, t3}, 1},
    };
    return alpha - 2.0 * H * region_integral(bnd);
  }
  OmegaS om = build_omega_s(y0, H, s);
  double I = region_integral(om.domain.arcs);
  return om.alpha - om.beta - 2.0 * H * I;
}

struct SStarResult {
  double s_star = 0.0;
  double F_at_root = 0.0;
  double F0 = 0.0;      // value at s = 0 (must be positive)
  double F_s0 = 0.0;    // value near s0 (must be negative)
  double s0 = 0.0;
};

// The parameter where alpha = beta + 2H I(Omega_s), located between 0 and s0.
inline SStarResult s_star(double y0, double H) {
  SStarResult r;
  r.s0 = s_zero(y0, H);
  auto F = [&](double s) { return omega_s_condition_value(y0, H, s); };
  r.F0 = F(0.0);
  double hi = r.s0 * (1.0 - 1e-9);
  r.F_s0 = F(hi);
  if (!(r.F0 > 0.0) || !(r.F_s0 < 0.0))
    throw GeometryError(
        "s_star: no sign change of F over [0, s0] (root chain falsified)");
  r.s_star = find_root(F, RootSpec{0.0, hi, 1e-12, 300});
  r.F_at_root = F(r.s_star);
  return r;
}

}  // namespace solgraph
