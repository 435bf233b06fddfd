#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "solgraph/common.hpp"

namespace solgraph {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 1 << 16;
};

// g_H(u) = -u e^{u/2H} / sqrt(1 - u^2), the weight behind every curve integral.
// All integrals of g_H and of the speed density e^{u/2H}/sqrt(1-u^2) are
// evaluated after the substitution u = -cos(theta), which removes the
// endpoint singularities at u = +-1:
//   g_H(u) du           -> cos(theta) e^{-cos(theta)/2H} dtheta
//   e^{u/2H}/sqrt(1-u^2) du -> e^{-cos(theta)/2H} dtheta
inline double g_weight(double H, double u) {
  return -u * std::exp(u / (2.0 * H)) / std::sqrt((1.0 - u) * (1.0 + u));
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1], computed once per order by Newton
// iteration on P_n. Orders used here are small and fixed.
template <int N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};
  GaussLegendre() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= N; ++k) {
          double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      x[i] = -t;
      x[N - 1 - i] = t;
      w[i] = w[N - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

template <int N, class F>
double gl_panel(const F& f, double a, double b) {
  static const GaussLegendre<N> rule;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < N; ++i) s += rule.w[i] * f(c + h * rule.x[i]);
  return s * h;
}

}  // namespace detail

// Fixed-order quadrature for analytic integrands evaluated inside geometry
// kernels. Order 48 leaves errors at roundoff level for every integrand in
// this library (entire functions of moderate scale on intervals <= 2*pi),
// and the result varies smoothly with the endpoints, which the finite
// difference checks and root solves rely on.
template <class F>
double integrate_smooth(const F& f, double a, double b) {
  if (a == b) return 0.0;
  double len = std::abs(b - a);
  if (len <= 2.5) return detail::gl_panel<48>(f, a, b);
  int pieces = static_cast<int>(std::ceil(len / 2.5));
  double s = 0.0, step = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i)
    s += detail::gl_panel<48>(f, a + i * step, a + (i + 1) * step);
  return s;
}

// Adaptive bisection with a GL10/GL20 error estimate per panel.
template <class F>
double integrate_adaptive(const F& f, double a, double b,
                          const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) ||
      spec.max_subdivisions < 1)
    throw ArgumentError("quadrature: invalid spec");
  if (a == b) return 0.0;

  struct Panel {
    double a, b, coarse;
  };
  std::vector<Panel> stack{{a, b, detail::gl_panel<10>(f, a, b)}};
  double total = 0.0, err_total = 0.0;
  int splits = 0;
  // First pass estimate of scale for the relative tolerance.
  double scale = std::abs(stack[0].coarse);
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    double fine = detail::gl_panel<20>(f, p.a, p.b);
    double err = std::abs(fine - p.coarse);
    double tol =
        std::max(spec.abs_tol, spec.rel_tol * std::max(scale, std::abs(total))) *
        std::abs(p.b - p.a) / std::abs(b - a);
    if (err <= tol || std::abs(p.b - p.a) < 1e-14 * std::abs(b - a)) {
      total += fine;
      err_total += err;
      continue;
    }
    if (++splits > spec.max_subdivisions)
      throw ConvergenceError("quadrature: subdivision limit reached",
                             err_total + err);
    double m = 0.5 * (p.a + p.b);
    stack.push_back({p.a, m, detail::gl_panel<10>(f, p.a, m)});
    stack.push_back({m, p.b, detail::gl_panel<10>(f, m, p.b)});
  }
  return total;
}

namespace detail {

inline void check_g_range(double H, double a, double b) {
  if (!(H > 0.0)) throw ArgumentError("integrate: H must be positive");
  if (!(a >= -1.0 && b <= 1.0 && a <= b))
    throw ArgumentError("integrate: need -1 <= a <= b <= 1");
}

}  // namespace detail

// Integral of g_H over [a,b] within [-1,1]; theta-substituted form.
inline double integrate_g(double H, double a, double b,
                          const QuadratureSpec& spec = {}) {
  detail::check_g_range(H, a, b);
  const double ta = std::acos(-a), tb = std::acos(-b);
  const double inv2H = 1.0 / (2.0 * H);
  return integrate_adaptive(
      [inv2H](double th) {
        double c = std::cos(th);
        return c * std::exp(-c * inv2H);
      },
      ta, tb, spec);
}

// Integral of e^{u/2H}/sqrt(1-u^2) over [a,b]; theta-substituted form.
inline double integrate_speed(double H, double a, double b,
                              const QuadratureSpec& spec = {}) {
  detail::check_g_range(H, a, b);
  const double ta = std::acos(-a), tb = std::acos(-b);
  const double inv2H = 1.0 / (2.0 * H);
  return integrate_adaptive(
      [inv2H](double th) { return std::exp(-std::cos(th) * inv2H); }, ta, tb,
      spec);
}

namespace detail {

// Fixed-order versions used pervasively by the curve geometry. They agree
// with integrate_g / integrate_speed to ~1e-14 but are smooth in their
// endpoints. Arguments are theta-values (u = -cos(theta)).
inline double g_integral_theta(double H, double theta_a, double theta_b) {
  const double inv2H = 1.0 / (2.0 * H);
  return integrate_smooth(
      [inv2H](double th) {
        double c = std::cos(th);
        return c * std::exp(-c * inv2H);
      },
      theta_a, theta_b);
}

inline double speed_integral_theta(double H, double theta_a, double theta_b) {
  const double inv2H = 1.0 / (2.0 * H);
  return integrate_smooth(
      [inv2H](double th) { return std::exp(-std::cos(th) * inv2H); }, theta_a,
      theta_b);
}

// int_{-1}^{c} g_H(u) du for c in [-1,1].
inline double g_integral_to(double H, double c) {
  c = std::min(1.0, std::max(-1.0, c));
  return g_integral_theta(H, 0.0, std::acos(-c));
}

}  // namespace detail

}  // namespace solgraph
