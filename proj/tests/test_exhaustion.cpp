#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "solgraph/constructions.hpp"
#include "solgraph/exhaustion.hpp"
#include "solgraph/omega_s.hpp"

using namespace solgraph;

TEST_CASE("increasing data on the slab arcs") {
  AdmissibleDomain dom = build_b_empty({0.0, 10.0}, 2.0, 0.05, 1.0);
  Mesh m = make_mesh(dom, domain_diameter(dom) / 25.0);
  std::map<int, double> cdata{{1, 0.0}, {3, 0.0}};
  auto rep = solve_exhaustion(dom, m, {1, 2, 4, 8}, ExhaustionMode::BEmpty,
                              cdata);
  REQUIRE(rep.steps.size() == 4);
  CHECK(rep.monotone);
  CHECK(rep.monotonicity_violations == 0);
  // probe gaps shrink
  for (std::size_t k = 0; k + 2 < rep.steps.size(); ++k) {
    double g1 = 0.0, g2 = 0.0;
    for (std::size_t p = 0; p < rep.probe_nodes.size(); ++p) {
      g1 = std::max(g1, std::abs(rep.steps[k + 1].probe_values[p] -
                                 rep.steps[k].probe_values[p]));
      g2 = std::max(g2, std::abs(rep.steps[k + 2].probe_values[p] -
                                 rep.steps[k + 1].probe_values[p]));
    }
    CHECK(g2 < g1);
  }
  // flux over the slab arcs climbs toward the arc length
  for (int id : {0, 2}) {
    double len = 0.0;
    for (const auto& e : m.boundary_edges)
      if (e.arc_id == id) len += dist(m.nodes[e.a], m.nodes[e.b]);
    double prev = -1e300;
    for (const auto& st : rep.steps) {
      CHECK(st.flux_per_arc.at(id) > prev);
      prev = st.flux_per_arc.at(id);
    }
    CHECK(len - rep.steps.back().flux_per_arc.at(id) < 0.35 * len);
  }
  // divergence masks
  CHECK(divergence_mask(rep, 1e308) == std::vector<char>(m.nodes.size(), 0));
}

TEST_CASE("decreasing data in the A-empty mode") {
  CurveParams curve{0.0, 1.0, 1.0};
  AdmissibleDomain dom = build_a_empty(curve, -0.8, TangencyCase::Generic);
  AdmissibleDomain star = domain_star(dom);
  Mesh m = make_mesh(star, domain_diameter(star) / 25.0);
  auto rep = solve_exhaustion(dom, m, {1, 2, 4}, ExhaustionMode::AEmpty, {});
  REQUIRE(rep.steps.size() == 3);
  CHECK(rep.monotone);
}

TEST_CASE("level shifts in the C-empty mode") {
  SStarResult r = s_star(1.0, 0.5);
  OmegaS om = build_omega_s(1.0, 0.5, r.s_star);
  AdmissibleDomain star = domain_star(om.domain);
  Mesh m = make_mesh(star, domain_diameter(star) / 25.0);
  auto rep = solve_exhaustion(om.domain, m, {2, 4, 8}, ExhaustionMode::CEmpty, {});
  REQUIRE(rep.steps.size() == 3);
  double prev_mu = -1e300, prev_rest = -1e300;
  for (const auto& st : rep.steps) {
    CHECK(st.mu > prev_mu);
    CHECK(st.n - st.mu > prev_rest);
    prev_mu = st.mu;
    prev_rest = st.n - st.mu;
  }
}

TEST_CASE("violating domains light up the divergence mask") {
  SStarResult r = s_star(1.0, 0.5);
  OmegaS off = build_omega_s(1.0, 0.5, r.s_star / 2.0);
  AdmissibleDomain star = domain_star(off.domain);
  Mesh m = make_mesh(star, domain_diameter(star) / 20.0);
  auto rep = solve_exhaustion(off.domain, m, {4, 16, 64},
                              ExhaustionMode::CEmpty, {});
  REQUIRE(!rep.steps.empty());
  auto mask = divergence_mask(rep, 0.5 * 64.0);
  int lit = 0;
  for (char c : mask) lit += c;
  CHECK(lit > 0);
}

TEST_CASE("mode mismatches are rejected") {
  AdmissibleDomain dom = build_b_empty({0.0, 10.0}, 2.0, 0.05, 1.0);
  Mesh m = make_mesh(dom, domain_diameter(dom) / 15.0);
  CHECK_THROWS_AS(
      solve_exhaustion(dom, m, {1}, ExhaustionMode::CEmpty, {}),
      ArgumentError);
}
