#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "solgraph/common.hpp"
#include "solgraph/fem.hpp"
#include "solgraph/mesh.hpp"

namespace solgraph {

// Flux of u across the boundary arc `arc_id`, evaluated edge-wise as
//   F = sum over tagged edges of  y^2 (grad u . nu) / W_e * |edge|
// with the gradient recovered from the single adjacent triangle and y, W_e
// taken at the edge midpoint. The integrand magnitude is bounded by 1.
struct FluxReport {
  std::map<int, double> flux_per_arc;
  std::map<int, double> length_per_arc;  // Euclidean arc lengths (chordal)
  double weighted_area = 0.0;            // 2H I(Omega), discrete
  double balance_residual = 0.0;         // |sum flux - 2H I|
  double max_density = 0.0;              // max edgewise |integrand|
};

namespace detail {

// triangle adjacent to each boundary edge
inline std::map<std::pair<int, int>, int> boundary_tri_index(const Mesh& m) {
  std::map<std::pair<int, int>, int> out;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& tr = m.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tr[k], b = tr[(k + 1) % 3];
      out[{std::min(a, b), std::max(a, b)}] = static_cast<int>(t);
    }
  }
  return out;
}

inline Point tri_gradient(const Mesh& m, int t, const ScalarField& u) {
  auto g = tri_geom(m, t);
  const auto& tr = m.triangles[t];
  Point gu{0, 0};
  for (int k = 0; k < 3; ++k) gu = gu + u.values[tr[k]] * g.grad[k];
  return gu;
}

}  // namespace detail

inline double flux(const Mesh& m, const ScalarField& u, int arc_id,
                   double* max_density = nullptr) {
  auto btri = detail::boundary_tri_index(m);
  bool seen = false;
  double total = 0.0;
  for (const auto& e : m.boundary_edges) {
    if (e.arc_id != arc_id) continue;
    seen = true;
    auto it = btri.find({std::min(e.a, e.b), std::max(e.a, e.b)});
    if (it == btri.end())
      throw GeometryError("flux: boundary edge without adjacent triangle");
    Point gu = detail::tri_gradient(m, it->second, u);
    Point a = m.nodes[e.a], b = m.nodes[e.b];
    Point tvec = b - a;
    double len = norm(tvec);
    Point nu{tvec.y / len, -tvec.x / len};  // outward (domain on the left)
    double ym = 0.5 * (a.y + b.y);
    double y2 = ym * ym;
    double W = std::sqrt(1.0 + y2 * y2 * dot(gu, gu));
    double density = y2 * dot(gu, nu) / W;
    if (max_density)
      *max_density = std::max(*max_density, std::abs(density));
    total += density * len;
  }
  if (!seen) throw ArgumentError("flux: unknown arc id");
  return total;
}

inline FluxReport flux_report(const Mesh& m, const ScalarField& u, double H) {
  FluxReport rep;
  for (const auto& e : m.boundary_edges) {
    rep.length_per_arc[e.arc_id] += dist(m.nodes[e.a], m.nodes[e.b]);
    rep.flux_per_arc[e.arc_id];  // touch
  }
  double sum = 0.0;
  for (auto& [id, value] : rep.flux_per_arc) {
    value = flux(m, u, id, &rep.max_density);
    sum += value;
  }
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    auto g = detail::tri_geom(m, static_cast<int>(t));
    rep.weighted_area += g.area * 2.0 * H / g.yc;
  }
  rep.balance_residual = std::abs(sum - rep.weighted_area);
  return rep;
}

// Flux independence of the inner path eta: for each variant compute
//   2H I(Delta_eta) - int_eta y^2 (grad u . nu)/W ds
// (nu pointing out of the subdomain Delta_eta bounded by the arc and eta)
// and return the maximal pairwise difference.
inline double flux_eta_independence(const Mesh& m, const ScalarField& u,
                                    double H, int arc_id,
                                    const std::vector<std::vector<Point>>& etas) {
  if (etas.size() < 2)
    throw ArgumentError("flux_eta_independence: need at least two paths");
  // arc polyline in boundary order
  std::vector<Point> arcpts;
  for (const auto& e : m.boundary_edges)
    if (e.arc_id == arc_id) {
      if (arcpts.empty()) arcpts.push_back(m.nodes[e.a]);
      arcpts.push_back(m.nodes[e.b]);
    }
  if (arcpts.size() < 2) throw ArgumentError("flux_eta_independence: arc id");

  // point-locate triangles by brute force (desk scale)
  auto locate = [&](Point p) -> int {
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
      const auto& tr = m.triangles[t];
      Point a = m.nodes[tr[0]], b = m.nodes[tr[1]], c = m.nodes[tr[2]];
      double s = cross(b - a, c - a);
      double w0 = cross(b - p, c - p) / s;
      double w1 = cross(c - p, a - p) / s;
      double w2 = cross(a - p, b - p) / s;
      if (w0 >= -1e-10 && w1 >= -1e-10 && w2 >= -1e-10)
        return static_cast<int>(t);
    }
    return -1;
  };

  std::vector<double> values;
  for (const auto& eta : etas) {
    if (eta.size() < 2)
      throw ArgumentError("flux_eta_independence: degenerate path");
    // close the loop: arc (boundary direction) followed by eta back
    std::vector<Point> loop = arcpts;
    bool fwd = dist(eta.front(), arcpts.back()) <= dist(eta.back(), arcpts.back());
    if (fwd)
      loop.insert(loop.end(), eta.begin() + 1, eta.end() - 1);
    else
      loop.insert(loop.end(), eta.rbegin() + 1, eta.rend() - 1);
    if (dist((fwd ? eta.back() : eta.front()), arcpts.front()) >
        1e-6 * (1.0 + norm(arcpts.front())))
      throw ArgumentError("flux_eta_independence: path does not close the arc");
    // signed area decides the outward side for nu along eta
    double area2 = 0.0;
    std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i)
      area2 += cross(loop[i], loop[(i + 1) % n]);
    double sgn = area2 >= 0.0 ? 1.0 : -1.0;  // ccw: interior on the left

    // I(Delta_eta) via the boundary one-form over the closed polyline
    double I = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Point a = loop[i], b = loop[(i + 1) % n];
      // exact segment integral of -ln(y) dx
      double dy = b.y - a.y;
      double seg;
      if (std::abs(dy) < 1e-12 * std::max(a.y, b.y))
        seg = std::log(0.5 * (a.y + b.y)) * (b.x - a.x);
      else
        seg = (b.x - a.x) / dy *
              (b.y * std::log(b.y) - b.y - a.y * std::log(a.y) + a.y);
      I -= seg;
    }
    I *= sgn;

    // line integral along eta with nu pointing out of Delta_eta
    double line = 0.0;
    std::vector<Point> path = eta;
    if (!fwd) std::reverse(path.begin(), path.end());
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      Point a = path[i], b = path[i + 1];
      Point mid = 0.5 * (a + b);
      int t = locate(mid);
      if (t < 0)
        throw ArgumentError("flux_eta_independence: path leaves the mesh");
      Point gu = detail::tri_gradient(m, t, u);
      Point tv = b - a;
      double len = norm(tv);
      // traversal continues the ccw/cw loop; outward of the subdomain is the
      // right side for ccw loops, flipped otherwise
      Point nu{sgn * tv.y / len, -sgn * tv.x / len};
      double y2 = mid.y * mid.y;
      double W = std::sqrt(1.0 + y2 * y2 * dot(gu, gu));
      line += y2 * dot(gu, nu) / W * len;
    }
    values.push_back(2.0 * H * I - line);
  }
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

}  // namespace solgraph
