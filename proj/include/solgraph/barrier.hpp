#pragma once

#include <cmath>

#include "solgraph/common.hpp"
#include "solgraph/domain.hpp"

namespace solgraph {

struct BarrierProfile {
  double w = 0.0;    // -r^a
  double wp = 0.0;   // -a r^{a-1}
  double wpp = 0.0;  // -a(a-1) r^{a-2}
};

// Local supersolution profile w(r) = -r^a, a in (0, 1/2), together with its
// first two derivatives in the distance variable.
inline BarrierProfile barrier_profile(double a, double r) {
  if (!(a > 0.0 && a < 0.5))
    throw ArgumentError("barrier_profile: a must lie in (0, 1/2)");
  if (!(r > 0.0)) throw ArgumentError("barrier_profile: r must be positive");
  return {-std::pow(r, a), -a * std::pow(r, a - 1.0),
          -a * (a - 1.0) * std::pow(r, a - 2.0)};
}

// Hyperbolic distance between points of the half-plane.
inline double hyperbolic_distance(Point p, Point q) {
  double d2 = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
  return std::acosh(1.0 + d2 / (2.0 * p.y * q.y));
}

namespace detail {

// hyperbolic distance from q to a circle arc, by dense sampling + refinement
inline double dist_to_circle_arc(const CircleArc& c, Point q) {
  auto at = [&](double a) {
    return Point{c.center.x + c.radius * std::cos(a),
                 c.center.y + c.radius * std::sin(a)};
  };
  double lo = c.angle_lo, hi = c.angle_hi;
  double best = 1e300, besta = lo;
  for (int i = 0; i <= 256; ++i) {
    double a = lo + (hi - lo) * i / 256.0;
    double d = hyperbolic_distance(at(a), q);
    if (d < best) {
      best = d;
      besta = a;
    }
  }
  double step = (hi - lo) / 256.0;
  double a0 = std::max(lo, besta - step), a1 = std::min(hi, besta + step);
  for (int it = 0; it < 60; ++it) {
    double m1 = a0 + (a1 - a0) / 3.0, m2 = a1 - (a1 - a0) / 3.0;
    if (hyperbolic_distance(at(m1), q) < hyperbolic_distance(at(m2), q))
      a1 = m2;
    else
      a0 = m1;
  }
  return hyperbolic_distance(at(0.5 * (a0 + a1)), q);
}

}  // namespace detail

// Left-hand side of the supersolution inequality for the radial profile
// w(r) = -r^a along the strip parallel to a circle arc:
//   (1/Wt^3)(-w''/(y w'^3)) + y^2 k_euc(gamma_r)/Wt - <grad y, grad r>/(y^2 w'^2 Wt^3)
// with Wt = sqrt(1 + 1/(y^2 w'^2)) and r the hyperbolic distance to the
// arc. The bound LHS <= 2yH certifies the barrier locally.
inline double supersolution_lhs(const CircleArc& carc, Point q, double a) {
  auto rfun = [&](Point p) { return detail::dist_to_circle_arc(carc, p); };
  double r = rfun(q);
  BarrierProfile bp = barrier_profile(a, r);
  double y = q.y;

  // finite differences of the distance field
  double hfd = 1e-4 * std::max(1.0, r);
  double rpx = rfun({q.x + hfd, q.y}), rmx = rfun({q.x - hfd, q.y});
  double rpy = rfun({q.x, q.y + hfd}), rmy = rfun({q.x, q.y - hfd});
  double rx = (rpx - rmx) / (2 * hfd), ry = (rpy - rmy) / (2 * hfd);
  double rxx = (rpx - 2 * r + rmx) / (hfd * hfd);
  double ryy = (rpy - 2 * r + rmy) / (hfd * hfd);

  // k_euc of the parallel curve through q: -y lap_e(r) - r_y
  double keuc = -y * (rxx + ryy) - ry;
  double grad_y_dot_grad_r = y * y * ry;  // hyperbolic inner product

  double w1 = bp.wp, w2 = bp.wpp;
  double Wt = std::sqrt(1.0 + 1.0 / (y * y * w1 * w1));
  double Wt3 = Wt * Wt * Wt;
  return (-w2 / (y * w1 * w1 * w1)) / Wt3 + y * y * keuc / Wt -
         grad_y_dot_grad_r / (y * y * w1 * w1 * Wt3);
}

}  // namespace solgraph
