#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "solgraph/constructions.hpp"
#include "solgraph/domain.hpp"
#include "solgraph/omega_s.hpp"

using namespace solgraph;

namespace {

std::vector<BoundaryArc> rectangle_loop(double x0, double x1, double y0,
                                        double y1) {
  return {
      {ArcKind::C, Segment{{x0, y0}, {x1, y0}}, 1},
      {ArcKind::C, Segment{{x1, y0}, {x1, y1}}, 1},
      {ArcKind::C, Segment{{x1, y1}, {x0, y1}}, 1},
      {ArcKind::C, Segment{{x0, y1}, {x0, y0}}, 1},
  };
}

}  // namespace

TEST_CASE("region integral of a rectangle") {
  double v = region_integral(rectangle_loop(0, 1, 1, 2));
  CHECK(std::abs(v - std::log(2.0)) < 1e-12);
}

TEST_CASE("region integral of a circle") {
  // closed form: 2 pi (c - sqrt(c^2 - r^2)) for a disk centered at height c
  double c = 2.0, r = 0.5;
  std::vector<BoundaryArc> loop{
      {ArcKind::C, CircleArc{{0, c}, r, -kPi, 0.0}, 1},
      {ArcKind::C, CircleArc{{0, c}, r, 0.0, kPi}, 1},
  };
  double v = region_integral(loop);
  CHECK(std::abs(v - 2.0 * kPi * (c - std::sqrt(c * c - r * r))) < 1e-12);
}

TEST_CASE("doubled boundary cancels; reversal flips the sign") {
  auto fwd = rectangle_loop(0, 1, 1, 2);
  std::vector<BoundaryArc> doubled = fwd;
  for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) {
    BoundaryArc rev = *it;
    rev.orientation = -rev.orientation;
    doubled.push_back(rev);
  }
  CHECK(std::abs(region_integral(doubled)) < 1e-12);

  std::vector<BoundaryArc> reversed;
  for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) {
    BoundaryArc rev = *it;
    rev.orientation = -rev.orientation;
    reversed.push_back(rev);
  }
  CHECK(std::abs(region_integral(reversed) + std::log(2.0)) < 1e-12);
}

TEST_CASE("region integral error paths") {
  auto open = rectangle_loop(0, 1, 1, 2);
  open.pop_back();
  CHECK_THROWS_AS(region_integral(open), GeometryError);

  std::vector<BoundaryArc> bowtie{
      {ArcKind::C, Segment{{0, 1}, {1, 2}}, 1},
      {ArcKind::C, Segment{{1, 2}, {0, 2}}, 1},
      {ArcKind::C, Segment{{0, 2}, {1, 1}}, 1},
      {ArcKind::C, Segment{{1, 1}, {0, 1}}, 1},
  };
  CHECK_THROWS_AS(region_integral(bowtie), GeometryError);
}

TEST_CASE("region integral of a curved family domain matches strips") {
  OmegaS om = build_omega_s(1.0, 0.5, 0.3);
  double I = region_integral(om.domain.arcs);
  auto poly = domain_polyline(om.domain, 8192);
  double strips = oracles::strip_weighted_area(poly, 4096);
  CHECK(std::abs(I - strips) <= 1e-5 * I);
}

TEST_CASE("validate_domain flags adjacency and curvature kinds") {
  AdmissibleDomain dom = build_b_empty({0.0, 10.0}, 2.0, 0.05, 1.0);
  ValidationReport rep = validate_domain(dom);
  CHECK(rep.ok);

  // break the kinds: two adjacent A arcs
  AdmissibleDomain bad = dom;
  bad.arcs[1].kind = ArcKind::A;
  CHECK_FALSE(validate_domain(bad).ok);

  // claim a B kind for an A arc: curvature sign check must fire
  AdmissibleDomain wrong = dom;
  wrong.arcs[0].kind = ArcKind::B;
  wrong.b_star_arcs.push_back(std::get<ArcOnCurve>(dom.arcs[0].geometry));
  CHECK_FALSE(validate_domain(wrong).ok);
}

TEST_CASE("signed distance to the domain polyline") {
  AdmissibleDomain dom = build_b_empty({0.0, 10.0}, 2.0, 0.05, 1.0);
  auto poly = domain_polyline(dom, 2048);
  CHECK(polyline_signed_distance(poly, {0.0, 10.0}) > 0.0);
  CHECK(polyline_signed_distance(poly, {0.0, 20.0}) < 0.0);
}

TEST_CASE("b_star finds the stored companions") {
  CurveParams curve{0.0, 1.0, 1.0};
  AdmissibleDomain dom = build_a_empty(curve, -0.8, TangencyCase::Generic);
  REQUIRE(dom.b_star_arcs.size() == 2);
  std::size_t bseen = 0;
  for (std::size_t i = 0; i < dom.arcs.size(); ++i) {
    if (dom.arcs[i].kind != ArcKind::B) continue;
    ArcOnCurve star = b_star(dom, i);
    const ArcOnCurve& stored = dom.b_star_arcs[bseen++];
    Point a = gamma(star.curve, 0.5 * (star.t_lo + star.t_hi));
    Point b = gamma(stored.curve, 0.5 * (stored.t_lo + stored.t_hi));
    CHECK(dist(a, b) < 1e-6);
    CHECK(lens_is_convex(dom.arcs[i], star));
  }
  CHECK_THROWS_AS(b_star(dom, 1), ArgumentError);  // names a C arc
}

TEST_CASE("horizontal-tangent companions are the mirror slab arcs") {
  CurveParams curve{0.0, 1.0, 1.0};
  AdmissibleDomain dom = build_a_empty(curve, 0.0, TangencyCase::HorizontalTangent);
  std::size_t bseen = 0;
  for (std::size_t i = 0; i < dom.arcs.size(); ++i) {
    if (dom.arcs[i].kind != ArcKind::B) continue;
    const auto& geom = std::get<ArcOnCurve>(dom.arcs[i].geometry);
    Point p = arc_start(geom);
    ArcOnCurve mirror = mirror_arc(geom, p.x);
    const ArcOnCurve& stored = dom.b_star_arcs[bseen++];
    Point a = gamma(mirror.curve, 0.5 * (mirror.t_lo + mirror.t_hi));
    Point b = gamma(stored.curve, 0.5 * (stored.t_lo + stored.t_hi));
    CHECK(dist(a, b) < 1e-9);
  }
}
