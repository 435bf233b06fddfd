#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "solgraph/common.hpp"
#include "solgraph/domain.hpp"
#include "solgraph/fem.hpp"
#include "solgraph/flux.hpp"
#include "solgraph/mesh.hpp"

namespace solgraph {

enum class ExhaustionMode { BEmpty, AEmpty, CEmpty };

// Domain with every B arc replaced by its companion; the enlarged region on
// which the A-empty and C-empty sequences are solved. Arc indices (and so
// mesh arc ids) are preserved.
inline AdmissibleDomain domain_star(const AdmissibleDomain& d) {
  AdmissibleDomain star = d;
  std::size_t bseen = 0;
  for (auto& arc : star.arcs) {
    if (arc.kind != ArcKind::B) continue;
    if (bseen >= d.b_star_arcs.size())
      throw GeometryError("domain_star: missing companion arc");
    Point from = arc_first(arc);
    ArcOnCurve repl = d.b_star_arcs[bseen++];
    arc.geometry = repl;
    arc.orientation = detail::orient_from(PathGeom{repl}, from,
                                          1e-7 * std::max(1.0, norm(from)));
  }
  return star;
}

struct ExhaustionStep {
  double n = 0.0;
  ScalarField u;                       // level-shifted field in C-empty mode
  std::vector<double> probe_values;
  std::map<int, double> flux_per_arc;
  double mu = 0.0;                     // level shift (C-empty mode)
};

struct ExhaustionReport {
  ExhaustionMode mode = ExhaustionMode::BEmpty;
  std::vector<ExhaustionStep> steps;
  std::vector<int> probe_nodes;
  int monotonicity_violations = 0;     // nodewise, between consecutive n
  bool monotone = true;
  bool truncated = false;              // an inner solve failed
  std::string failure;
};

namespace detail {

inline std::vector<int> pick_probe_nodes(const Mesh& m) {
  Point c{0, 0};
  int cnt = 0;
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    if (!m.on_boundary[i]) {
      c = c + m.nodes[i];
      ++cnt;
    }
  if (cnt == 0) return {};
  c = (1.0 / cnt) * c;
  std::vector<Point> targets{c};
  for (int k = 0; k < 4; ++k) {
    double a = 0.5 * kPi * k + 0.3;
    targets.push_back(c + Point{0.25 * std::cos(a) * std::sqrt(cnt) * m.h,
                                0.25 * std::sin(a) * std::sqrt(cnt) * m.h});
  }
  std::vector<int> nodes;
  for (Point t : targets) {
    int best = -1;
    double bd = 1e300;
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
      if (m.on_boundary[i]) continue;
      double d2 = dist(m.nodes[i], t);
      if (d2 < bd) {
        bd = d2;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0 &&
        std::find(nodes.begin(), nodes.end(), best) == nodes.end())
      nodes.push_back(best);
  }
  return nodes;
}

// Level at which the superlevel components of w containing distinct A arcs
// first merge: descending-threshold union-find over mesh edges.
inline double merge_level(const Mesh& m, const std::vector<double>& w,
                          const std::vector<std::vector<int>>& arc_seeds) {
  std::size_t n = m.nodes.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> seed_of(n, -1);  // which A arc a root currently contains
  for (std::size_t k = 0; k < arc_seeds.size(); ++k)
    for (int v : arc_seeds[k]) seed_of[v] = static_cast<int>(k);

  std::vector<std::vector<int>> adj(n);
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      adj[t[k]].push_back(t[(k + 1) % 3]);
      adj[t[(k + 1) % 3]].push_back(t[k]);
    }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return w[a] != w[b] ? w[a] > w[b] : a < b;
  });
  std::vector<char> inserted(n, 0);
  for (int v : order) {
    inserted[v] = 1;
    for (int nb : adj[v]) {
      if (!inserted[nb]) continue;
      int ra = find(v), rb = find(nb);
      if (ra == rb) continue;
      int sa = seed_of[ra], sb = seed_of[rb];
      if (sa >= 0 && sb >= 0 && sa != sb) return w[v];
      parent[ra] = rb;
      if (sb < 0) seed_of[rb] = sa;
    }
  }
  return -1e300;  // never merged (single A arc)
}

}  // namespace detail

// Exhaustion sequence driver. Boundary data per mode and n:
//   B-empty:  n on A arcs, min(f, n) on C arcs          (increasing)
//   A-empty: -n on B(star) arcs, max(f, -n) on C arcs   (decreasing)
//   C-empty:  n on A arcs, 0 on B(star) arcs, then shifted by mu(n).
// In the A-empty and C-empty modes the mesh must triangulate the starred
// domain; arc ids still index domain.arcs.
inline ExhaustionReport solve_exhaustion(const AdmissibleDomain& dom,
                                         const Mesh& mesh,
                                         const std::vector<double>& n_values,
                                         ExhaustionMode mode,
                                         const std::map<int, double>& c_data = {},
                                         const SolverOptions& opts = {}) {
  ExhaustionReport rep;
  rep.mode = mode;
  rep.probe_nodes = detail::pick_probe_nodes(mesh);

  auto kind_of = [&](int arc_id) { return dom.arcs.at(arc_id).kind; };
  auto cval = [&](int arc_id) {
    auto it = c_data.find(arc_id);
    return it == c_data.end() ? 0.0 : it->second;
  };
  for (const auto& e : mesh.boundary_edges) {
    ArcKind k = kind_of(e.arc_id);
    if (mode == ExhaustionMode::BEmpty && k == ArcKind::B)
      throw ArgumentError("solve_exhaustion: B arc in B-empty mode");
    if (mode == ExhaustionMode::AEmpty && k == ArcKind::A)
      throw ArgumentError("solve_exhaustion: A arc in A-empty mode");
    if (mode == ExhaustionMode::CEmpty && k == ArcKind::C)
      throw ArgumentError("solve_exhaustion: C arc in C-empty mode");
  }

  // C-empty reference solution v0 (0 on all arcs)
  ScalarField v0;
  std::vector<std::vector<int>> arc_seeds;
  if (mode == ExhaustionMode::CEmpty) {
    std::vector<double> bv(mesh.nodes.size(), 0.0);
    v0 = solve_dirichlet(mesh, bv, dom.H, opts);
    std::map<int, std::vector<int>> seeds;
    for (const auto& e : mesh.boundary_edges)
      if (kind_of(e.arc_id) == ArcKind::A) {
        seeds[e.arc_id].push_back(e.a);
        seeds[e.arc_id].push_back(e.b);
      }
    for (auto& [id, v] : seeds) arc_seeds.push_back(v);
  }

  const ScalarField* prev = nullptr;
  for (double n : n_values) {
    auto bv = boundary_from_arcs(mesh, [&](int arc_id, Point) {
      ArcKind k = kind_of(arc_id);
      switch (mode) {
        case ExhaustionMode::BEmpty:
          return k == ArcKind::A ? n : std::min(cval(arc_id), n);
        case ExhaustionMode::AEmpty:
          return k == ArcKind::B ? -n : std::max(cval(arc_id), -n);
        case ExhaustionMode::CEmpty:
          return k == ArcKind::A ? n : 0.0;
      }
      return 0.0;
    });
    ExhaustionStep step;
    step.n = n;
    try {
      step.u = solve_dirichlet(mesh, bv, dom.H, opts);
    } catch (const SolveFailure& f) {
      rep.truncated = true;
      rep.failure = f.what();
      break;
    }
    if (mode == ExhaustionMode::CEmpty) {
      std::vector<double> w(mesh.nodes.size());
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = step.u.values[i] - v0.values[i];
      step.mu = detail::merge_level(mesh, w, arc_seeds);
      for (auto& v : step.u.values) v -= step.mu;
    }
    for (int pn : rep.probe_nodes) step.probe_values.push_back(step.u.values[pn]);
    for (const auto& e : mesh.boundary_edges)
      step.flux_per_arc[e.arc_id];  // touch all ids
    for (auto& [id, val] : step.flux_per_arc) val = flux(mesh, step.u, id);

    if (prev && mode != ExhaustionMode::CEmpty) {
      double sgn = mode == ExhaustionMode::BEmpty ? 1.0 : -1.0;
      double tol = 1e-8 * std::max(1.0, std::abs(n));
      for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        if (sgn * (step.u.values[i] - prev->values[i]) < -tol)
          ++rep.monotonicity_violations;
    }
    rep.steps.push_back(std::move(step));
    prev = &rep.steps.back().u;
  }
  rep.monotone = rep.monotonicity_violations == 0;
  return rep;
}

// Nodes whose final-step value exceeds the cutoff in magnitude; a diagnostic
// image of the divergence set, not an assertion about its structure.
inline std::vector<char> divergence_mask(const ExhaustionReport& rep,
                                         double cutoff) {
  if (rep.steps.empty())
    throw ArgumentError("divergence_mask: empty report");
  const auto& u = rep.steps.back().u.values;
  std::vector<char> mask(u.size(), 0);
  for (std::size_t i = 0; i < u.size(); ++i)
    mask[i] = (u[i] > cutoff || u[i] < -cutoff) ? 1 : 0;
  return mask;
}

}  // namespace solgraph
