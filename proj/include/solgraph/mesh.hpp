#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "solgraph/common.hpp"
#include "solgraph/domain.hpp"

namespace solgraph {

struct Mesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  struct BEdge {
    int a = 0, b = 0;   // ordered: domain interior on the left
    int arc_id = 0;
  };
  std::vector<BEdge> boundary_edges;
  std::vector<char> on_boundary;
  double h = 0.0;
  double min_angle_deg = 0.0;

  double triangle_area(int t) const {
    const auto& tr = triangles[t];
    return 0.5 * cross(nodes[tr[1]] - nodes[tr[0]], nodes[tr[2]] - nodes[tr[0]]);
  }
};

namespace detail {

// Incremental Delaunay triangulation (Bowyer-Watson) with walk location.
class Delaunay {
 public:
  explicit Delaunay(const std::vector<Point>& pts) : pts_(pts) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : pts) {
      xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    double dx = std::max(xmax - xmin, 1e-12), dy = std::max(ymax - ymin, 1e-12);
    double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    double r = 16.0 * std::max(dx, dy);
    int n = static_cast<int>(pts.size());
    all_ = pts;
    all_.push_back({cx - 2.0 * r, cy - r});
    all_.push_back({cx + 2.0 * r, cy - r});
    all_.push_back({cx, cy + 2.0 * r});
    tris_.push_back({{n, n + 1, n + 2}, {-1, -1, -1}, true});
    for (int i = 0; i < n; ++i) insert(i);
  }

  // triangles with all-real vertices
  std::vector<std::array<int, 3>> result() const {
    std::vector<std::array<int, 3>> out;
    int n = static_cast<int>(pts_.size());
    for (const auto& t : tris_)
      if (t.alive && t.v[0] < n && t.v[1] < n && t.v[2] < n)
        out.push_back({t.v[0], t.v[1], t.v[2]});
    return out;
  }

 private:
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> adj;  // adj[k] shares edge (v[k], v[k+1])
    bool alive = true;
  };

  double orient(Point a, Point b, Point c) const {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  }

  bool in_circle(const Tri& t, Point p) const {
    Point a = all_[t.v[0]], b = all_[t.v[1]], c = all_[t.v[2]];
    double ax = a.x - p.x, ay = a.y - p.y;
    double bx = b.x - p.x, by = b.y - p.y;
    double cx = c.x - p.x, cy = c.y - p.y;
    double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                 (bx * bx + by * by) * (ax * cy - cx * ay) +
                 (cx * cx + cy * cy) * (ax * by - bx * ay);
    return det > 0.0;
  }

  int locate(Point p) const {
    int cur = last_;
    for (int steps = 0; steps < 4 * static_cast<int>(tris_.size()) + 16;
         ++steps) {
      if (cur < 0 || !tris_[cur].alive) break;
      const Tri& t = tris_[cur];
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        Point a = all_[t.v[k]], b = all_[t.v[(k + 1) % 3]];
        if (orient(a, b, p) < 0.0) {
          next = t.adj[k];
          break;
        }
      }
      if (next < 0) return cur;
      cur = next;
    }
    // fallback: linear scan
    for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i) {
      if (!tris_[i].alive) continue;
      const Tri& t = tris_[i];
      bool inside = true;
      for (int k = 0; k < 3; ++k)
        if (orient(all_[t.v[k]], all_[t.v[(k + 1) % 3]], p) < 0.0)
          inside = false;
      if (inside) return i;
    }
    throw GeometryError("delaunay: point location failed");
  }

  void insert(int ip) {
    Point p = all_[ip];
    int seed = locate(p);
    // grow the cavity of circumcircle-violating triangles
    std::vector<int> bad;
    std::vector<char> mark(tris_.size(), 0);
    std::vector<int> stack{seed};
    if (!in_circle(tris_[seed], p)) {
      // numerical edge: accept seed anyway (point on an edge)
      mark[seed] = 1;
      bad.push_back(seed);
    }
    while (!stack.empty()) {
      int ti = stack.back();
      stack.pop_back();
      if (ti < 0 || mark[ti] || !tris_[ti].alive) continue;
      if (!in_circle(tris_[ti], p)) continue;
      mark[ti] = 1;
      bad.push_back(ti);
      for (int k = 0; k < 3; ++k) stack.push_back(tris_[ti].adj[k]);
    }
    if (bad.empty()) bad.push_back(seed), mark[seed] = 1;
    // collect directed cavity boundary edges (a,b) with outside neighbor
    struct CEdge {
      int a, b, outside;
    };
    std::vector<CEdge> ring;
    for (int ti : bad) {
      const Tri& t = tris_[ti];
      for (int k = 0; k < 3; ++k) {
        int nb = t.adj[k];
        if (nb < 0 || !mark[nb])
          ring.push_back({t.v[k], t.v[(k + 1) % 3], nb});
      }
    }
    for (int ti : bad) tris_[ti].alive = false;
    // fan new triangles over the ring and stitch adjacency
    std::vector<int> created;
    for (const auto& e : ring) {
      Tri nt;
      nt.v = {e.a, e.b, ip};
      nt.adj = {e.outside, -1, -1};
      int id = static_cast<int>(tris_.size());
      tris_.push_back(nt);
      created.push_back(id);
      if (e.outside >= 0) {
        Tri& ot = tris_[e.outside];
        for (int k = 0; k < 3; ++k)
          if (ot.v[k] == e.b && ot.v[(k + 1) % 3] == e.a) ot.adj[k] = id;
      }
    }
    // p-fan: edge (b,p) of a tri mates with edge (p,a') of the tri whose
    // ring edge starts at b; edge (p,a) mates with the tri ending at a.
    std::map<int, int> by_first, by_second;
    for (int id : created) {
      by_first[tris_[id].v[0]] = id;
      by_second[tris_[id].v[1]] = id;
    }
    for (int id : created) {
      Tri& t = tris_[id];
      t.adj[1] = by_first.at(t.v[1]);
      t.adj[2] = by_second.at(t.v[0]);
    }
    if (!created.empty()) last_ = created.back();
  }

  const std::vector<Point>& pts_;
  std::vector<Point> all_;
  std::vector<Tri> tris_;
  int last_ = 0;
};

inline bool point_in_polyline(const std::vector<Point>& poly, Point p) {
  bool inside = false;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point a = poly[i], b = poly[(i + 1) % n];
    if ((a.y > p.y) != (b.y > p.y)) {
      double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (xint > p.x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace detail

// Closed boundary polyline with an arc id per edge.
struct BoundaryLoop {
  std::vector<Point> pts;
  std::vector<int> arc_ids;  // edge i joins pts[i], pts[(i+1) % n]
};

inline BoundaryLoop polygonalize_boundary(const AdmissibleDomain& dom,
                                          double h) {
  BoundaryLoop loop;
  for (std::size_t ai = 0; ai < dom.arcs.size(); ++ai) {
    const auto& b = dom.arcs[ai];
    double len = geom_length(b.geometry);
    int n = std::max(2, static_cast<int>(std::ceil(len / h)));
    for (int rep = 0; rep < 6; ++rep) {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        if (dist(arc_point(b, double(i) / n), arc_point(b, double(i + 1) / n)) >
            h)
          ok = false;
      if (ok) break;
      n *= 2;
    }
    for (int i = 0; i < n; ++i) {
      loop.pts.push_back(arc_point(b, double(i) / n));
      loop.arc_ids.push_back(static_cast<int>(ai));
    }
  }
  return loop;
}

// Constrained-quality triangulation of the region bounded by `loop`:
// hexagonal interior lattice, Delaunay triangulation, midpoint recovery of
// missing boundary edges, Laplacian smoothing. Boundary edges come out
// tagged with their source arc.
inline Mesh make_mesh_from_loop(BoundaryLoop loop, double h) {
  if (loop.pts.size() < 3) throw ArgumentError("make_mesh: degenerate loop");
  for (const auto& p : loop.pts)
    if (!(p.y > 0.0)) throw GeometryError("make_mesh: boundary touches y<=0");

  auto build = [&](const std::vector<Point>& interior, Mesh& mesh) -> bool {
    std::size_t nb = loop.pts.size();
    std::vector<Point> pts = loop.pts;
    pts.insert(pts.end(), interior.begin(), interior.end());
    detail::Delaunay del(pts);
    auto tris = del.result();
    // verify boundary edges are present
    std::set<std::pair<int, int>> edge_set;
    for (const auto& t : tris)
      for (int k = 0; k < 3; ++k)
        edge_set.insert({std::min(t[k], t[(k + 1) % 3]),
                         std::max(t[k], t[(k + 1) % 3])});
    bool missing = false;
    BoundaryLoop refined;
    for (std::size_t i = 0; i < nb; ++i) {
      int a = static_cast<int>(i), b = static_cast<int>((i + 1) % nb);
      refined.pts.push_back(loop.pts[i]);
      refined.arc_ids.push_back(loop.arc_ids[i]);
      if (!edge_set.count({std::min(a, b), std::max(a, b)})) {
        missing = true;
        refined.pts.push_back(0.5 * (loop.pts[a] + loop.pts[b]));
        refined.arc_ids.push_back(loop.arc_ids[i]);
      }
    }
    if (missing) {
      loop = refined;
      return false;
    }
    // keep triangles with centroid inside, oriented counterclockwise
    mesh.nodes = pts;
    mesh.triangles.clear();
    for (auto& t : tris) {
      Point c = (1.0 / 3.0) * (pts[t[0]] + pts[t[1]] + pts[t[2]]);
      if (!detail::point_in_polyline(loop.pts, c)) continue;
      if (cross(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]]) < 0.0)
        std::swap(t[1], t[2]);
      mesh.triangles.push_back(t);
    }
    return true;
  };

  auto lattice = [&]() {
    std::vector<Point> interior;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : loop.pts) {
      xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    double clear2 = 0.70 * h * 0.70 * h;
    int row = 0;
    for (double y = ymin + 0.5 * h; y < ymax; y += h * 0.8660254037844386) {
      int col = 0;
      for (double x = xmin + (row % 2 ? 0.75 * h : 0.25 * h); x < xmax;
           x += h) {
        Point p{x + 0.06 * h * (hash_unit(row, col) - 0.5),
                y + 0.06 * h * (hash_unit(col, row) - 0.5)};
        ++col;
        if (!detail::point_in_polyline(loop.pts, p)) continue;
        bool clear = true;
        for (std::size_t i = 0; i < loop.pts.size() && clear; ++i) {
          Point a = loop.pts[i], b = loop.pts[(i + 1) % loop.pts.size()];
          Point ab = b - a;
          double tt = std::clamp(dot(p - a, ab) / std::max(1e-300, dot(ab, ab)),
                                 0.0, 1.0);
          Point q = a + tt * ab;
          double dx = p.x - q.x, dy = p.y - q.y;
          if (dx * dx + dy * dy < clear2) clear = false;
        }
        if (clear) interior.push_back(p);
      }
      ++row;
    }
    return interior;
  };

  Mesh mesh;
  std::vector<Point> interior;
  for (int attempt = 0; attempt < 8; ++attempt) {
    interior = lattice();
    if (build(interior, mesh)) break;
    if (attempt == 7)
      throw GeometryError("make_mesh: boundary edge recovery failed");
  }

  // Laplacian smoothing of interior nodes with rebuilds
  std::size_t nb = loop.pts.size();
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<Point> sum(mesh.nodes.size(), {0, 0});
    std::vector<int> cnt(mesh.nodes.size(), 0);
    for (const auto& t : mesh.triangles)
      for (int k = 0; k < 3; ++k) {
        int a = t[k], b = t[(k + 1) % 3];
        sum[a] = sum[a] + mesh.nodes[b];
        cnt[a]++;
        sum[b] = sum[b] + mesh.nodes[a];
        cnt[b]++;
      }
    std::vector<Point> moved;
    for (std::size_t i = nb; i < mesh.nodes.size(); ++i) {
      Point p = mesh.nodes[i];
      if (cnt[i] > 0) {
        Point q{sum[i].x / cnt[i], sum[i].y / cnt[i]};
        if (detail::point_in_polyline(loop.pts, q)) p = q;
        moved.push_back(p);
      }
    }
    Mesh next;
    bool ok = build(moved, next);
    if (!ok) break;  // smoothing broke a boundary edge; keep previous mesh
    mesh = next;
  }

  // boundary bookkeeping and quality stats
  mesh.h = h;
  mesh.on_boundary.assign(mesh.nodes.size(), 0);
  mesh.boundary_edges.clear();
  for (std::size_t i = 0; i < nb; ++i) {
    Mesh::BEdge e{static_cast<int>(i), static_cast<int>((i + 1) % nb),
                  loop.arc_ids[i]};
    mesh.boundary_edges.push_back(e);
    mesh.on_boundary[i] = 1;
  }
  double min_angle = 180.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (mesh.triangle_area(static_cast<int>(t)) <= 0.0)
      throw GeometryError("make_mesh: non-positive triangle area");
    const auto& tr = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      Point a = mesh.nodes[tr[k]], b = mesh.nodes[tr[(k + 1) % 3]],
            c = mesh.nodes[tr[(k + 2) % 3]];
      double ang = std::acos(std::clamp(
          dot(b - a, c - a) / (dist(a, b) * dist(a, c)), -1.0, 1.0));
      min_angle = std::min(min_angle, ang * 180.0 / kPi);
    }
  }
  mesh.min_angle_deg = min_angle;
  return mesh;
}

inline Mesh make_mesh(const AdmissibleDomain& dom, double h) {
  double diam = domain_diameter(dom);
  if (!(h > 0.0) || !(h < diam / 4.0))
    throw ArgumentError("make_mesh: require 0 < h < diam/4");
  return make_mesh_from_loop(polygonalize_boundary(dom, h), h);
}

}  // namespace solgraph
