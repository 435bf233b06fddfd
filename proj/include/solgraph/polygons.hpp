#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "solgraph/common.hpp"
#include "solgraph/connectors.hpp"
#include "solgraph/curve.hpp"
#include "solgraph/domain.hpp"

namespace solgraph {

enum class SideRole { Interior, BoundaryA, BoundaryB };

struct PolygonSide {
  ArcOnCurve geom;
  int orientation = 1;  // traversal along the polygon
  SideRole role = SideRole::Interior;
};

struct AdmissiblePolygon {
  std::vector<PolygonSide> sides;
  std::vector<Point> vertices;
  double alpha = 0.0;
  double beta = 0.0;
  double perimeter = 0.0;
  double area_weight = 0.0;  // I(P)
  bool is_full_boundary = false;
};

namespace detail {

struct PolyEdge {
  ArcOnCurve geom;
  SideRole role = SideRole::Interior;
  double length = 0.0;
};

inline std::vector<BoundaryArc> polygon_loop(const AdmissiblePolygon& p) {
  std::vector<BoundaryArc> loop;
  loop.reserve(p.sides.size());
  for (const auto& s : p.sides)
    loop.push_back({ArcKind::C, s.geom, s.orientation});
  return loop;
}

}  // namespace detail

// All curvilinear polygons inscribed in the domain: vertices among the
// endpoints of A/B boundary arcs, sides either those arcs themselves or
// interior two-point connectors contained in the closed domain. Capped at
// 12 vertices.
inline std::vector<AdmissiblePolygon> enumerate_polygons(
    const AdmissibleDomain& dom) {
  const double diam = domain_diameter(dom);
  const double vtol = 1e-7 * std::max(1.0, diam);

  // vertex set
  std::vector<Point> verts;
  auto vid = [&](Point p) {
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (dist(verts[i], p) <= vtol) return static_cast<int>(i);
    verts.push_back(p);
    return static_cast<int>(verts.size() - 1);
  };
  struct BndRef {
    int va, vb;
    ArcOnCurve geom;
    SideRole role;
  };
  std::vector<BndRef> bnd;
  for (const auto& a : dom.arcs) {
    if (a.kind == ArcKind::C) continue;
    const auto* arc = std::get_if<ArcOnCurve>(&a.geometry);
    if (!arc)
      throw GeometryError("enumerate_polygons: A/B arc with non-curve geometry");
    int va = vid(arc_start(*arc)), vb = vid(arc_end(*arc));
    bnd.push_back({va, vb, *arc, a.kind == ArcKind::A ? SideRole::BoundaryA
                                                      : SideRole::BoundaryB});
  }
  if (verts.size() > 12)
    throw ArgumentError("enumerate_polygons: more than 12 vertices");
  const int nv = static_cast<int>(verts.size());
  if (nv == 0) return {};

  // candidate edges per vertex pair
  auto poly = domain_polyline(dom, 4096);
  std::map<std::pair<int, int>, std::vector<detail::PolyEdge>> edges;
  auto midpoint = [](const ArcOnCurve& a) {
    return gamma(a.curve, 0.5 * (a.t_lo + a.t_hi));
  };
  for (int i = 0; i < nv; ++i) {
    for (int j = i + 1; j < nv; ++j) {
      std::vector<detail::PolyEdge> list;
      for (const auto& b : bnd)
        if ((b.va == i && b.vb == j) || (b.va == j && b.vb == i))
          list.push_back({b.geom, b.role, arc_length(b.geom)});
      for (const auto& c : connectors(verts[i], verts[j], dom.H)) {
        Point cm = midpoint(c);
        bool dup = false;
        for (const auto& have : list)
          if (dist(midpoint(have.geom), cm) < 1e-6 * diam) dup = true;
        if (dup) continue;
        bool inside = true;
        for (int ksample = 1; ksample < 256 && inside; ++ksample) {
          double t = c.t_lo + (c.t_hi - c.t_lo) * ksample / 256.0;
          if (polyline_signed_distance(poly, gamma(c.curve, t)) <
              -1e-6 * diam)
            inside = false;
        }
        if (inside) list.push_back({c, SideRole::Interior, arc_length(c)});
      }
      if (!list.empty()) edges[{i, j}] = std::move(list);
    }
  }

  auto edge_list = [&](int a, int b) -> const std::vector<detail::PolyEdge>* {
    auto it = edges.find({std::min(a, b), std::max(a, b)});
    return it == edges.end() ? nullptr : &it->second;
  };

  // assemble one polygon from a vertex cycle + edge choices
  double total_a = 0.0, total_b = 0.0;
  for (const auto& b : bnd)
    (b.role == SideRole::BoundaryA ? total_a : total_b) +=
        arc_length(b.geom);

  std::vector<AdmissiblePolygon> out;
  auto emit = [&](const std::vector<int>& cyc,
                  const std::vector<const detail::PolyEdge*>& chosen) {
    AdmissiblePolygon p;
    std::size_t n = cyc.size();
    for (std::size_t k = 0; k < n; ++k) {
      Point from = verts[cyc[k]];
      const detail::PolyEdge* e = chosen[k];
      int orient =
          dist(arc_start(e->geom), from) <= dist(arc_end(e->geom), from) ? 1
                                                                         : -1;
      p.sides.push_back({e->geom, orient, e->role});
      p.vertices.push_back(from);
    }
    auto loop = detail::polygon_loop(p);
    double area = boundary_signed_area(loop);
    if (std::abs(area) < 1e-10 * diam * diam) return;  // degenerate
    if (area < 0.0) {
      std::reverse(p.sides.begin(), p.sides.end());
      std::reverse(p.vertices.begin(), p.vertices.end());
      for (auto& s : p.sides) s.orientation = -s.orientation;
      loop = detail::polygon_loop(p);
    }
    try {
      detail::check_simple(loop);
      p.area_weight = region_integral(loop);
    } catch (const GeometryError&) {
      return;  // self-intersecting candidate, not a polygon
    }
    for (std::size_t k = 0; k < p.sides.size(); ++k) {
      double len = arc_length(p.sides[k].geom);
      p.perimeter += len;
      if (p.sides[k].role == SideRole::BoundaryA) p.alpha += len;
      if (p.sides[k].role == SideRole::BoundaryB) p.beta += len;
    }
    p.is_full_boundary = std::abs(p.alpha - total_a) < 1e-9 * (1.0 + total_a) &&
                         std::abs(p.beta - total_b) < 1e-9 * (1.0 + total_b) &&
                         std::abs(p.perimeter - total_a - total_b) <
                             1e-9 * (1.0 + total_a + total_b);
    out.push_back(std::move(p));
  };

  // 2-gons: unordered pairs of distinct edges between the same two vertices
  for (const auto& [key, list] : edges)
    for (std::size_t e1 = 0; e1 < list.size(); ++e1)
      for (std::size_t e2 = e1 + 1; e2 < list.size(); ++e2)
        emit({key.first, key.second}, {&list[e1], &list[e2]});

  // k-gons, k >= 3: DFS with the minimal vertex first
  long budget = 0;
  std::vector<int> path;
  std::vector<const detail::PolyEdge*> chosen;
  std::vector<bool> used(nv, false);
  std::function<void(int, int)> dfs = [&](int v0, int cur) {
    if (++budget > 2000000)
      throw Error("enumerate_polygons: combinatorial budget exceeded");
    for (int w = v0; w < nv; ++w) {
      if (w == cur) continue;
      bool closing = (w == v0 && path.size() >= 3);
      if (used[w] && !closing) continue;
      const auto* list = edge_list(cur, w);
      if (!list) continue;
      if (closing) {
        // canonical direction: second vertex id < last vertex id
        if (path[1] > path.back()) continue;
        for (const auto& e : *list) {
          chosen.push_back(&e);
          emit(path, chosen);
          chosen.pop_back();
        }
        continue;
      }
      used[w] = true;
      path.push_back(w);
      for (const auto& e : *list) {
        chosen.push_back(&e);
        dfs(v0, w);
        chosen.pop_back();
      }
      path.pop_back();
      used[w] = false;
    }
  };
  for (int v0 = 0; v0 < nv; ++v0) {
    path = {v0};
    chosen.clear();
    std::fill(used.begin(), used.end(), false);
    used[v0] = true;
    dfs(v0, v0);
  }
  return out;
}

enum class CheckMode { BEmpty, AEmpty, CEmpty, General };

struct ConditionRow {
  double alpha = 0.0, beta = 0.0, perimeter = 0.0, area_weight = 0.0;
  double slack_alpha = 0.0;  // l + 2H I - 2 alpha
  double slack_beta = 0.0;   // l - 2H I - 2 beta
  bool is_full_boundary = false;
  bool pass = true;
};

struct ConditionReport {
  CheckMode mode = CheckMode::General;
  std::vector<ConditionRow> rows;
  bool pass = true;
  int violating_row = -1;
  double equality_residual = 0.0;  // |alpha - beta - 2H I| on the full domain
};

// Solvability conditions over all inscribed polygons:
//   2 alpha < l + 2H I(P)   (A-side condition)
//   2 beta  < l - 2H I(P)   (B-side condition)
// and, with no C arcs, the equality alpha = beta + 2H I(Omega) on the full
// boundary with both strict inequalities on proper polygons.
inline ConditionReport check_conditions(const AdmissibleDomain& dom,
                                        CheckMode mode) {
  ConditionReport rep;
  rep.mode = mode;
  auto polys = enumerate_polygons(dom);
  bool have_full = false;
  for (const auto& p : polys) {
    ConditionRow row;
    row.alpha = p.alpha;
    row.beta = p.beta;
    row.perimeter = p.perimeter;
    row.area_weight = p.area_weight;
    double twoHI = 2.0 * dom.H * p.area_weight;
    row.slack_alpha = p.perimeter + twoHI - 2.0 * p.alpha;
    row.slack_beta = p.perimeter - twoHI - 2.0 * p.beta;
    row.is_full_boundary = p.is_full_boundary;
    double tol_slack = 1e-8 * p.perimeter;
    bool need_alpha = mode == CheckMode::BEmpty || mode == CheckMode::General ||
                      mode == CheckMode::CEmpty;
    bool need_beta = mode == CheckMode::AEmpty || mode == CheckMode::General ||
                     mode == CheckMode::CEmpty;
    if (mode == CheckMode::CEmpty && p.is_full_boundary) {
      have_full = true;
      rep.equality_residual =
          std::abs(p.alpha - p.beta - twoHI);
      row.pass = rep.equality_residual <= 1e-6 * std::max(p.alpha, 1e-300);
    } else {
      row.pass = (!need_alpha || row.slack_alpha > tol_slack) &&
                 (!need_beta || row.slack_beta > tol_slack);
    }
    if (!row.pass && rep.violating_row < 0)
      rep.violating_row = static_cast<int>(rep.rows.size());
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  if (mode == CheckMode::CEmpty && !have_full) {
    rep.pass = false;
    if (rep.violating_row < 0) rep.violating_row = -2;  // missing full polygon
  }
  return rep;
}

}  // namespace solgraph
