#pragma once

#include <cmath>
#include <optional>

#include "solgraph/common.hpp"
#include "solgraph/quadrature.hpp"
#include "solgraph/roots.hpp"

namespace solgraph {

// A curve of Euclidean curvature 2H/y in the upper half-plane, identified by
// its lowest (base) point P1 = (w, z) and the mean curvature H. The trace is
//   x(t) = w + (z e^{1/2H} / 2H) * S_H(t),   y(t) = z e^{sin^2(t/2)/H},
// with S_H as in s_function below. t = 0 is the base point; t = -pi/2 and
// t = pi/2 are the right/left vertical tangency points (P2+-); |t| = pi are
// the tops where adjacent loops join (P4-+-); the loop closes on itself at
// the P3 points t = +-acos(-T_H).
struct CurveParams {
  double w = 0.0;
  double z = 1.0;
  double H = 1.0;
};

// Parameter subinterval of one curve; arcs wider than a full period are not
// representable (and never embedded).
struct ArcOnCurve {
  CurveParams curve;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

struct CurveConstants {
  double L = 0.0;  // horizontal excursion of the vertical-tangency points / z
  double M = 0.0;  // half the horizontal period / z
  double T = 0.0;  // zero of int_{-1}^{T} g_H in (0,1)
};

namespace detail {

// S_H on [0,pi] is -int_0^t cos(th) e^{-cos(th)/2H} dth; odd extension to
// [-pi,pi]; S(2n pi + t0) = 2n S(pi) + S(t0) beyond.
inline double s_function_principal(double H, double t) {
  double a = std::abs(t);
  double v = -g_integral_theta(H, 0.0, a);
  return t >= 0.0 ? v : -v;
}

}  // namespace detail

inline double s_function(double H, double t) {
  if (!(H > 0.0)) throw ArgumentError("s_function: H must be positive");
  double n = std::floor((t + kPi) / (2.0 * kPi));
  double t0 = t - 2.0 * kPi * n;  // in [-pi, pi)
  double s = detail::s_function_principal(H, t0);
  if (n != 0.0) s += 2.0 * n * detail::s_function_principal(H, kPi);
  return s;
}

inline void check_curve(const CurveParams& c) {
  if (!(c.z > 0.0) || !(c.H > 0.0))
    throw ArgumentError("curve: require z > 0 and H > 0");
}

inline Point gamma(const CurveParams& c, double t) {
  check_curve(c);
  double s = std::sin(0.5 * t);
  return {c.w + c.z * std::exp(0.5 / c.H) / (2.0 * c.H) * s_function(c.H, t),
          c.z * std::exp(s * s / c.H)};
}

// Unit-speed-free derivative of gamma: gamma'(t) = (y/2H) (-cos t, sin t).
inline Point gamma_derivative(const CurveParams& c, double t) {
  double y = gamma(c, t).y;
  return {-y * std::cos(t) / (2.0 * c.H), y * std::sin(t) / (2.0 * c.H)};
}

// Graph-in-x form of the loop: x(y) = w +- (z e^{1/2H}/2H) int_{-1}^{u(y)} g_H,
// u(y) = 2H ln(y/z) - 1, valid on the open height window (z, z e^{1/H}).
// branch=+1 is the x >= w half (the P2+ side), branch=-1 the mirror half.
inline double x_of_y(const CurveParams& c, double y, int branch) {
  check_curve(c);
  if (branch != 1 && branch != -1)
    throw ArgumentError("x_of_y: branch must be +1 or -1");
  double u = 2.0 * c.H * std::log(y / c.z) - 1.0;
  if (!(u > -1.0 && u < 1.0))
    throw ArgumentError("x_of_y: y outside the open window (z, z e^{1/H})");
  double v = detail::g_integral_to(c.H, u);
  return c.w + branch * c.z * std::exp(0.5 / c.H) / (2.0 * c.H) * v;
}

inline CurveConstants curve_constants(double H) {
  if (!(H > 0.0)) throw ArgumentError("curve_constants: H must be positive");
  const double C = std::exp(0.5 / H) / (2.0 * H);
  CurveConstants k;
  k.L = C * detail::g_integral_to(H, 0.0);
  k.M = -C * detail::g_integral_to(H, 1.0);
  k.T = find_root([H](double c) { return detail::g_integral_to(H, c); },
                  RootSpec{1e-12, 1.0 - 1e-15, 1e-15, 300});
  return k;
}

// Residual of x'y'' - x''y' = (-2H/y) (x'^2 + y'^2)^{3/2} at parameter t,
// derivatives by central finite differences.
inline double curvature_residual(const CurveParams& c, double t) {
  const double h = 1e-5 * std::max(1.0, std::abs(t));
  Point pm = gamma(c, t - h), p0 = gamma(c, t), pp = gamma(c, t + h);
  double x1 = (pp.x - pm.x) / (2.0 * h), y1 = (pp.y - pm.y) / (2.0 * h);
  double x2 = (pp.x - 2.0 * p0.x + pm.x) / (h * h);
  double y2 = (pp.y - 2.0 * p0.y + pm.y) / (h * h);
  double speed2 = x1 * x1 + y1 * y1;
  double lhs = x1 * y2 - x2 * y1;
  double rhs = (-2.0 * c.H / p0.y) * speed2 * std::sqrt(speed2);
  return std::abs(lhs - rhs);
}

// Euclidean length of an arc: in the height variable u = -cos t the speed
// density is (z e^{1/2H}/2H) e^{u/2H}/sqrt(1-u^2); after substitution this is
// an integral of (z/2H) e^{(1-cos tau)/2H} over the parameter interval.
inline double arc_length(const ArcOnCurve& arc) {
  check_curve(arc.curve);
  if (!(arc.t_lo < arc.t_hi))
    throw ArgumentError("arc_length: t_lo < t_hi required");
  if (arc.t_hi - arc.t_lo > 2.0 * kPi + 1e-12)
    throw ArgumentError("arc_length: arc exceeds one period");
  const double z = arc.curve.z, H = arc.curve.H;
  return z / (2.0 * H) *
         integrate_smooth(
             [H](double tau) {
               return std::exp((1.0 - std::cos(tau)) / (2.0 * H));
             },
             arc.t_lo, arc.t_hi);
}

inline Point arc_start(const ArcOnCurve& a) { return gamma(a.curve, a.t_lo); }
inline Point arc_end(const ArcOnCurve& a) { return gamma(a.curve, a.t_hi); }

// Reflection of an arc about the vertical line x = x0. The trace of a curve
// is symmetric about the vertical through its own base point, so the mirror
// image is again an arc of a (translated) curve, with reversed parameter.
inline ArcOnCurve mirror_arc(const ArcOnCurve& a, double x0) {
  ArcOnCurve m = a;
  m.curve.w = 2.0 * x0 - a.curve.w;
  m.t_lo = -a.t_hi;
  m.t_hi = -a.t_lo;
  return m;
}

}  // namespace solgraph
