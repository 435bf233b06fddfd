#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "solgraph/common.hpp"
#include "solgraph/curve.hpp"
#include "solgraph/quadrature.hpp"
#include "solgraph/roots.hpp"

namespace solgraph {

// Normalized intersection-distance functions for the family of curves with
// base point (0, z e^{-t/2H}) against the line y = z (z factored out).
// lbar(t): distance between the symmetric crossings of one loop (the arcs
// below the line); dbar(t): distance from a loop's right crossing to the
// next loop's left crossing (arcs through a top junction).
namespace detail {

inline double lbar_raw(double H, double t) {
  const double C = std::exp(0.5 / H) / (2.0 * H);
  return 2.0 * std::exp(-t / (2.0 * H)) * C * g_integral_to(H, -1.0 + t);
}

inline double dbar_raw(double H, double t, double M) {
  const double C = std::exp(0.5 / H) / (2.0 * H);
  return 2.0 * std::exp(-t / (2.0 * H)) * (M - C * g_integral_to(H, -1.0 + t));
}

// Endpoint separation of the cap over a top junction whose feet sit at
// height-parameter s in (0,2) below the apex.
inline double cap_separation(double H, double s, double M) {
  const double C = std::exp(0.5 / H) / (2.0 * H);
  return 2.0 * std::exp(-s / (2.0 * H)) * (M + C * g_integral_to(H, -1.0 + s));
}

// Sign function of dbar' from the horizontal-alignment analysis; strictly
// increasing on (0,2) with poles -inf / +inf at the ends.
inline double dbar_slope_sign(double H, double t, double M) {
  const double C = std::exp(0.5 / H) / (2.0 * H);
  return -M / (2.0 * H) + C / (2.0 * H) * g_integral_to(H, -1.0 + t) -
         C * g_weight(H, -1.0 + t);
}

}  // namespace detail

inline double lbar(double H, double t) {
  if (!(H > 0.0)) throw ArgumentError("lbar: H must be positive");
  double tmax = 1.0 + curve_constants(H).T;
  if (t < 0.0 || t > tmax + 1e-12)
    throw ArgumentError("lbar: t outside [0, 1+T_H]");
  return detail::lbar_raw(H, std::min(t, tmax));
}

inline double dbar(double H, double t) {
  if (!(H > 0.0)) throw ArgumentError("dbar: H must be positive");
  CurveConstants k = curve_constants(H);
  if (t < 0.0 || t > 1.0 + k.T + 1e-12)
    throw ArgumentError("dbar: t outside [0, 1+T_H]");
  return detail::dbar_raw(H, std::min(t, 1.0 + k.T), k.M);
}

struct KofH {
  double K = 0.0;   // minimal separation admitting only loop-contained arcs
  double t0 = 0.0;  // interior minimizer of dbar over (0,2)
};

// K(H) = dbar(t0) with t0 the unique zero of the slope-sign function on
// (0,2). For H large enough that adjacent loops overlap (L_H > M_H), the
// minimum is negative and no horizontal pair satisfies the alignment
// hypotheses.
inline KofH k_of_h(double H) {
  if (!(H > 0.0)) throw ArgumentError("k_of_h: H must be positive");
  CurveConstants k = curve_constants(H);
  double t0 = find_root(
      [&](double t) { return detail::dbar_slope_sign(H, t, k.M); },
      RootSpec{1e-9, 2.0 - 1e-11, 1e-13, 300});
  return {detail::dbar_raw(H, t0, k.M), t0};
}

namespace detail {

inline void check_arc_endpoints(const ArcOnCurve& arc, Point p, Point q,
                                double tol) {
  Point a = arc_start(arc), b = arc_end(arc);
  double m1 = std::min(dist(a, p) + dist(b, q), dist(a, q) + dist(b, p));
  if (m1 > tol)
    throw GeometryError("connector arc misses its endpoints");
}

}  // namespace detail

// All embedded arcs joining two horizontally aligned points p=(px,z),
// q=(qx,z) with separation below z*K(H): one arc above the line y = z and,
// for small separation, two below it (one without vertical tangencies, one
// with two). At the tangential separation the two below arcs coincide and
// are reported once.
inline std::vector<ArcOnCurve> horizontal_connectors(Point p, Point q,
                                                     double H) {
  if (!(H > 0.0)) throw ArgumentError("horizontal_connectors: H > 0 required");
  double z = p.y;
  if (std::abs(p.y - q.y) > 1e-12 * std::max(1.0, z))
    throw ArgumentError("horizontal_connectors: endpoints not aligned");
  double sep = std::abs(q.x - p.x);
  if (sep == 0.0)
    throw ArgumentError("horizontal_connectors: coincident endpoints");
  CurveConstants k = curve_constants(H);
  KofH kh = k_of_h(H);
  if (!(sep < z * kh.K))
    throw UnsupportedConfiguration(
        "horizontal_connectors: separation >= z*K(H), count not guaranteed");

  const double mid = 0.5 * (p.x + q.x);
  const double lam = sep / z;
  const double C = std::exp(0.5 / H) / (2.0 * H);
  std::vector<ArcOnCurve> out;

  // Arc above the line: cap over a junction, feet parameter s in (1,2).
  {
    double s = find_root(
        [&](double ss) { return detail::cap_separation(H, ss, k.M) - lam; },
        RootSpec{1.0, 2.0 - 1e-13, 1e-14, 300});
    double zc = z * std::exp(-s / (2.0 * H));
    double theta = std::acos(std::clamp(1.0 - s, -1.0, 1.0));
    out.push_back({{mid - zc * k.M, zc, H}, theta, 2.0 * kPi - theta});
  }

  // Arcs below the line: crossings of lbar(t) = lam on (0, 1+T_H).
  double tmax = 1.0 + k.T;
  double targ = find_root(
      [&](double t) {
        return g_weight(H, -1.0 + t) -
               detail::g_integral_to(H, -1.0 + t) / (2.0 * H);
      },
      RootSpec{1e-9, tmax - 1e-11, 1e-13, 300});
  double lmax = detail::lbar_raw(H, targ);
  auto push_below = [&](double t) {
    double zc = z * std::exp(-t / (2.0 * H));
    double theta = std::acos(std::clamp(1.0 - t, -1.0, 1.0));
    out.push_back({{mid, zc, H}, -theta, theta});
  };
  double tie_tol = 1e-11 * std::max(1.0, lmax);
  if (std::abs(lam - lmax) <= tie_tol) {
    push_below(targ);  // tangential connector, reported once
  } else if (lam < lmax) {
    push_below(find_root([&](double t) { return detail::lbar_raw(H, t) - lam; },
                         RootSpec{1e-12, targ, 1e-14, 300}));
    push_below(find_root([&](double t) { return detail::lbar_raw(H, t) - lam; },
                         RootSpec{targ, tmax - 1e-12, 1e-14, 300}));
  }
  for (const auto& a : out) detail::check_arc_endpoints(a, p, q, 1e-8 * z);
  return out;
}

// The pair of slab-contained arcs joining vertically aligned points
// (Type I and its reflection). Requires 0 < gap < z (e^{T_H/2H} - 1).
inline std::vector<ArcOnCurve> vertical_connectors(Point p, Point q,
                                                   double H) {
  if (!(H > 0.0)) throw ArgumentError("vertical_connectors: H > 0 required");
  if (std::abs(p.x - q.x) > 1e-12 * std::max(1.0, std::abs(p.x)))
    throw ArgumentError("vertical_connectors: endpoints not aligned");
  Point lo = p.y <= q.y ? p : q;
  Point hi = p.y <= q.y ? q : p;
  double z = lo.y, gap = hi.y - lo.y;
  if (gap == 0.0)
    throw ArgumentError("vertical_connectors: coincident endpoints");
  CurveConstants k = curve_constants(H);
  if (!(gap < z * (std::exp(k.T / (2.0 * H)) - 1.0)))
    throw UnsupportedConfiguration(
        "vertical_connectors: height gap out of the slab-arc range");

  double delta = 2.0 * H * std::log(hi.y / z);
  double a = find_root(
      [&](double aa) {
        return detail::g_integral_to(H, -1.0 + aa + delta) -
               detail::g_integral_to(H, -1.0 + aa);
      },
      RootSpec{1.0 - delta, 1.0, 1e-14, 300});
  double zc = z * std::exp(-a / (2.0 * H));
  const double C = std::exp(0.5 / H) / (2.0 * H);
  double xc = p.x - zc * C * detail::g_integral_to(H, -1.0 + a);
  double th_p = std::acos(std::clamp(1.0 - a, -1.0, 1.0));
  double th_q = std::acos(std::clamp(1.0 - a - delta, -1.0, 1.0));
  ArcOnCurve right{{xc, zc, H}, -th_q, -th_p};
  std::vector<ArcOnCurve> out{right, mirror_arc(right, p.x)};
  for (const auto& arc : out)
    detail::check_arc_endpoints(arc, p, q, 1e-8 * std::max(1.0, z));
  return out;
}

enum class VerticalType { TypeI, TypeII, TypeIII };

// Classification of an arc joining vertically aligned points by where the
// endpoints sit among the distinguished points of the generating loop:
// Type I stays in the slab, Types II/III wrap around a loop bottom; Type III
// starts above the vertical-tangency level of its loop.
inline VerticalType classify_vertical(const ArcOnCurve& arc, Point p, Point q) {
  detail::check_arc_endpoints(arc, p, q, 1e-8 * std::max(1.0, p.y));
  Point lo = p.y <= q.y ? p : q;
  double H = arc.curve.H;
  double a_low = 2.0 * H * std::log(lo.y / arc.curve.z);
  // Does the open parameter interval contain a loop bottom (t = 2 pi m)?
  bool wraps_bottom = false;
  for (double m = std::ceil(arc.t_lo / (2.0 * kPi)) * 2.0 * kPi;
       m < arc.t_hi; m += 2.0 * kPi)
    if (m > arc.t_lo + 1e-12 && m < arc.t_hi - 1e-12) wraps_bottom = true;
  if (!wraps_bottom) return VerticalType::TypeI;
  return a_low <= 1.0 + 1e-9 ? VerticalType::TypeII : VerticalType::TypeIII;
}

// General two-point connector: deterministic scan over base height with the
// horizontal base position eliminated through the endpoint equations.
// Completeness is only guaranteed up to the scan resolution (2000 samples
// per decade of admissible base heights).
inline std::vector<ArcOnCurve> connectors(Point p, Point q, double H) {
  if (!(H > 0.0)) throw ArgumentError("connectors: H > 0 required");
  if (dist(p, q) == 0.0) throw ArgumentError("connectors: p == q");
  double ymin = std::min(p.y, q.y), ymax = std::max(p.y, q.y);
  double zlo = ymax * std::exp(-1.0 / H), zhi = ymin;
  std::vector<ArcOnCurve> out;
  if (!(zlo < zhi)) return out;  // no single loop spans both heights

  const double C = std::exp(0.5 / H) / (2.0 * H);
  const double scale = std::max({1.0, std::abs(p.x), std::abs(q.x), ymax});
  double decades = std::log10(zhi / zlo);
  int n = std::clamp(static_cast<int>(std::ceil(2000.0 * decades)), 400, 40000);

  auto theta_at = [&](double y, double zc) {
    double u = 2.0 * H * std::log(y / zc) - 1.0;
    return std::acos(std::clamp(-u, -1.0, 1.0));
  };

  auto try_add = [&](const ArcOnCurve& cand) {
    if (!(cand.t_hi - cand.t_lo > 1e-10) ||
        cand.t_hi - cand.t_lo > 2.0 * kPi + 1e-9)
      return;
    Point a = arc_start(cand), b = arc_end(cand);
    double tol = 1e-8 * scale;
    if (std::min(dist(a, p) + dist(b, q), dist(a, q) + dist(b, p)) > tol)
      return;
    // Embeddedness: the open interval may not contain a self-crossing pair
    // (+- t3 + 2 pi m) of the generating curve.
    double T = curve_constants(H).T;
    double t3 = std::acos(-T);
    for (int m = -2; m <= 2; ++m) {
      double lo3 = -t3 + 2.0 * kPi * m, hi3 = t3 + 2.0 * kPi * m;
      if (lo3 > cand.t_lo + 1e-10 && hi3 < cand.t_hi - 1e-10) return;
    }
    // Dedupe by arc midpoint.
    Point midpt = gamma(cand.curve, 0.5 * (cand.t_lo + cand.t_hi));
    for (const auto& have : out) {
      Point m2 = gamma(have.curve, 0.5 * (have.t_lo + have.t_hi));
      if (dist(midpt, m2) < 1e-6 * scale) return;
    }
    out.push_back(cand);
  };

  for (int sp = -1; sp <= 1; sp += 2) {
    for (int sq = -1; sq <= 1; sq += 2) {
      for (int kk = -1; kk <= 1; ++kk) {
        auto mismatch = [&](double zc) {
          double tp = sp * theta_at(p.y, zc);
          double tq = sq * theta_at(q.y, zc) + 2.0 * kPi * kk;
          return zc * C * (s_function(H, tq) - s_function(H, tp)) -
                 (q.x - p.x);
        };
        double prev_z = 0.0, prev_f = 0.0;
        for (int i = 0; i <= n; ++i) {
          double frac = static_cast<double>(i) / n;
          double zc = zlo * std::pow(zhi / zlo, frac);
          zc = std::min(zhi * (1.0 - 1e-13), std::max(zlo * (1.0 + 1e-13), zc));
          double fv = mismatch(zc);
          if (i > 0 && std::isfinite(prev_f) && std::isfinite(fv) &&
              ((prev_f <= 0.0 && fv >= 0.0) || (prev_f >= 0.0 && fv <= 0.0)) &&
              prev_f != fv) {
            double zr = (prev_f == 0.0)
                            ? prev_z
                            : find_root(mismatch,
                                        RootSpec{prev_z, zc, 1e-14 * zhi, 200});
            double tp = sp * theta_at(p.y, zr);
            double tq = sq * theta_at(q.y, zr) + 2.0 * kPi * kk;
            double wc = p.x - zr * C * s_function(H, tp);
            ArcOnCurve cand{{wc, zr, H}, std::min(tp, tq), std::max(tp, tq)};
            try_add(cand);
          }
          prev_z = zc;
          prev_f = fv;
        }
      }
    }
  }
  return out;
}

}  // namespace solgraph
