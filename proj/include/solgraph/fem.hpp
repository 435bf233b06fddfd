#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "solgraph/common.hpp"
#include "solgraph/mesh.hpp"

namespace solgraph {

struct ScalarField {
  std::vector<double> values;  // per node
};

struct SolverOptions {
  double newton_tol = 1e-10;
  int max_newton = 80;
  double damping_min = 1.0 / 1024.0;  // 2^-10
  bool picard_fallback = true;
};

struct SolveFailure : Error {
  std::vector<double> residual_history;
  SolveFailure(const std::string& msg, std::vector<double> hist)
      : Error(msg), residual_history(std::move(hist)) {}
};

// Optional extra right-hand side g(x,y) added to 2H/y (manufactured
// solutions); empty means none.
using Forcing = std::function<double(double, double)>;

namespace detail {

struct TriGeom {
  double area;
  double yc;                     // centroid height
  std::array<Point, 3> grad;     // gradients of the P1 basis
};

inline TriGeom tri_geom(const Mesh& m, int t) {
  const auto& tr = m.triangles[t];
  Point a = m.nodes[tr[0]], b = m.nodes[tr[1]], c = m.nodes[tr[2]];
  double twoA = cross(b - a, c - a);
  TriGeom g;
  g.area = 0.5 * twoA;
  g.yc = (a.y + b.y + c.y) / 3.0;
  g.grad[0] = {(b.y - c.y) / twoA, (c.x - b.x) / twoA};
  g.grad[1] = {(c.y - a.y) / twoA, (a.x - c.x) / twoA};
  g.grad[2] = {(a.y - b.y) / twoA, (b.x - a.x) / twoA};
  return g;
}

}  // namespace detail

// Residual of the weak form at every free (interior) node:
//   R_i = sum_T area * [ y^2 (grad u . grad phi_i)/W_e + (2H/y + g) phi_i ]
// with W_e = sqrt(1 + y^4 |grad u|^2), one-point centroid quadrature.
inline std::vector<double> fem_residual(const Mesh& m, const ScalarField& u,
                                        double H, const Forcing& extra = {}) {
  std::vector<double> r(m.nodes.size(), 0.0);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    auto g = detail::tri_geom(m, static_cast<int>(t));
    const auto& tr = m.triangles[t];
    Point gu{0, 0};
    for (int k = 0; k < 3; ++k) gu = gu + u.values[tr[k]] * g.grad[k];
    double y2 = g.yc * g.yc;
    double W = std::sqrt(1.0 + y2 * y2 * dot(gu, gu));
    double load = 2.0 * H / g.yc;
    if (extra) {
      Point c = (1.0 / 3.0) *
                (m.nodes[tr[0]] + m.nodes[tr[1]] + m.nodes[tr[2]]);
      load += extra(c.x, c.y);
    }
    for (int k = 0; k < 3; ++k) {
      r[tr[k]] += g.area * (y2 * dot(gu, g.grad[k]) / W + load / 3.0);
    }
  }
  std::vector<double> out;
  out.reserve(m.nodes.size());
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    if (!m.on_boundary[i]) out.push_back(r[i]);
  return out;
}

namespace detail {

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct FemSystem {
  std::vector<int> free_index;  // node -> free dof or -1
  std::vector<int> free_nodes;
};

inline FemSystem number_free(const Mesh& m) {
  FemSystem s;
  s.free_index.assign(m.nodes.size(), -1);
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    if (!m.on_boundary[i]) {
      s.free_index[i] = static_cast<int>(s.free_nodes.size());
      s.free_nodes.push_back(static_cast<int>(i));
    }
  return s;
}

// Assemble residual and (optionally) the Newton matrix; `freeze_w` turns the
// tangent into the Picard operator with W fixed at the current state.
inline void assemble(const Mesh& m, const ScalarField& u, double H,
                     const Forcing& extra, const FemSystem& sys,
                     Eigen::VectorXd* R,
                     std::vector<Eigen::Triplet<double>>* J, bool freeze_w) {
  if (R) R->setZero();
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    auto g = tri_geom(m, static_cast<int>(t));
    const auto& tr = m.triangles[t];
    Point gu{0, 0};
    for (int k = 0; k < 3; ++k) gu = gu + u.values[tr[k]] * g.grad[k];
    double y2 = g.yc * g.yc;
    double y4 = y2 * y2;
    double W = std::sqrt(1.0 + y4 * dot(gu, gu));
    double load = 2.0 * H / g.yc;
    if (extra) {
      Point c = (1.0 / 3.0) *
                (m.nodes[tr[0]] + m.nodes[tr[1]] + m.nodes[tr[2]]);
      load += extra(c.x, c.y);
    }
    for (int k = 0; k < 3; ++k) {
      int fi = sys.free_index[tr[k]];
      if (fi < 0) continue;
      if (R)
        (*R)(fi) += g.area * (y2 * dot(gu, g.grad[k]) / W + load / 3.0);
      if (J) {
        for (int l = 0; l < 3; ++l) {
          double val =
              g.area * y2 *
              (dot(g.grad[k], g.grad[l]) / W -
               (freeze_w ? 0.0
                         : y4 * dot(gu, g.grad[k]) * dot(gu, g.grad[l]) /
                               (W * W * W)));
          int fj = sys.free_index[tr[l]];
          if (fj >= 0) J->emplace_back(fi, fj, val);
        }
      }
    }
  }
}

}  // namespace detail

// Damped Newton solve of the discrete problem with Dirichlet data taken from
// `boundary_values` at boundary nodes. Starts from the W=1 linear solve;
// backtracks the step down to damping_min, then takes Picard (frozen-W)
// steps when allowed. Throws SolveFailure with the residual history on
// non-convergence.
inline ScalarField solve_dirichlet(const Mesh& m,
                                   const std::vector<double>& boundary_values,
                                   double H, const SolverOptions& opts = {},
                                   const Forcing& extra = {}) {
  if (boundary_values.size() != m.nodes.size())
    throw ArgumentError("solve_dirichlet: boundary value vector size");
  auto sys = detail::number_free(m);
  int nfree = static_cast<int>(sys.free_nodes.size());
  ScalarField u;
  u.values.assign(m.nodes.size(), 0.0);
  double bc_scale = 1.0;
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    if (m.on_boundary[i]) {
      u.values[i] = boundary_values[i];
      bc_scale = std::max(bc_scale, std::abs(boundary_values[i]));
    }
  if (nfree == 0) return u;

  Eigen::VectorXd R(nfree);
  Eigen::SparseMatrix<double> A(nfree, nfree);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;
  std::vector<Eigen::Triplet<double>> trips;
  bool pattern_ready = false;

  auto newton_matrix = [&](bool freeze) {
    trips.clear();
    detail::assemble(m, u, H, extra, sys, &R, &trips, freeze);
    A.setFromTriplets(trips.begin(), trips.end());
    if (!pattern_ready) {
      chol.analyzePattern(A);
      pattern_ready = true;
    }
    chol.factorize(A);
    if (chol.info() != Eigen::Success)
      throw SolveFailure("solve_dirichlet: factorization failed", {});
  };

  // initial guess: linear solve with W = 1 (u = 0 at free nodes first)
  newton_matrix(/*freeze=*/true);
  Eigen::VectorXd du = chol.solve(-R);
  for (int i = 0; i < nfree; ++i) u.values[sys.free_nodes[i]] += du(i);

  std::vector<double> history;
  const double tol = opts.newton_tol * std::max(1.0, bc_scale);
  for (int it = 0; it < opts.max_newton; ++it) {
    newton_matrix(false);
    double rn = R.lpNorm<Eigen::Infinity>();
    history.push_back(rn);
    if (rn <= tol) return u;
    du = chol.solve(-R);

    double lambda = 1.0;
    std::vector<double> saved = u.values;
    bool improved = false;
    while (lambda >= opts.damping_min) {
      for (int i = 0; i < nfree; ++i)
        u.values[sys.free_nodes[i]] = saved[sys.free_nodes[i]] + lambda * du(i);
      Eigen::VectorXd R2(nfree);
      detail::assemble(m, u, H, extra, sys, &R2, nullptr, false);
      double rn2 = R2.lpNorm<Eigen::Infinity>();
      if (std::isfinite(rn2) && rn2 < rn) {
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) {
      u.values = saved;
      if (!opts.picard_fallback)
        throw SolveFailure("solve_dirichlet: Newton stalled", history);
      // Picard step: solve the frozen-W linear problem for the full state
      newton_matrix(true);
      Eigen::VectorXd dp = chol.solve(-R);
      for (int i = 0; i < nfree; ++i)
        u.values[sys.free_nodes[i]] += 0.5 * dp(i);
    }
  }
  detail::assemble(m, u, H, extra, sys, &R, nullptr, false);
  history.push_back(R.lpNorm<Eigen::Infinity>());
  if (history.back() <= tol) return u;
  throw SolveFailure("solve_dirichlet: no convergence within max_newton",
                     history);
}

// Convenience: per-arc constant Dirichlet data.
inline std::vector<double> boundary_from_arcs(
    const Mesh& m, const std::function<double(int arc_id, Point p)>& data) {
  std::vector<double> bv(m.nodes.size(), 0.0);
  for (const auto& e : m.boundary_edges) {
    bv[e.a] = data(e.arc_id, m.nodes[e.a]);
    bv[e.b] = data(e.arc_id, m.nodes[e.b]);
  }
  return bv;
}

}  // namespace solgraph
