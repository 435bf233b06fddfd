#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "solgraph/barrier.hpp"
#include "solgraph/constructions.hpp"

using namespace solgraph;

TEST_CASE("barrier profile values") {
  BarrierProfile b = barrier_profile(0.25, 1.0);
  CHECK(b.w == -1.0);
  CHECK(b.wp == -0.25);
  CHECK(b.wpp == 0.1875);
  CHECK_THROWS_AS(barrier_profile(0.75, 1.0), ArgumentError);
  CHECK_THROWS_AS(barrier_profile(0.25, -1.0), ArgumentError);
}

TEST_CASE("barrier limit behavior near the arc") {
  double prev_ratio = 1e300, prev_wp = 0.0;
  for (int k = 1; k <= 8; ++k) {
    double r = std::pow(10.0, -k);
    BarrierProfile b = barrier_profile(0.25, r);
    double ratio = std::abs(b.wpp / (b.wp * b.wp * b.wp));
    CHECK(ratio < prev_ratio);   // w''/w'^3 -> 0
    CHECK(b.wp < prev_wp);       // w' -> -infinity
    prev_ratio = ratio;
    prev_wp = b.wp;
  }
  CHECK(std::abs(barrier_profile(0.25, 1e-8).wpp /
                 std::pow(barrier_profile(0.25, 1e-8).wp, 3.0)) < 1e-3);
}

TEST_CASE("supersolution inequality holds near a circle arc") {
  AdmissibleDomain dom = build_b_empty({0.0, 10.0}, 2.0, 0.05, 1.0);
  const CircleArc* carc = nullptr;
  for (const auto& a : dom.arcs)
    if (a.kind == ArcKind::C) {
      carc = std::get_if<CircleArc>(&a.geometry);
      break;
    }
  REQUIRE(carc);
  // walk inward from the middle of the arc
  double mid = 0.5 * (carc->angle_lo + carc->angle_hi);
  Point on{carc->center.x + carc->radius * std::cos(mid),
           carc->center.y + carc->radius * std::sin(mid)};
  Point inward{(carc->center.x - on.x) / carc->radius,
               (carc->center.y - on.y) / carc->radius};
  double a = 0.25, H = dom.H;
  for (double step : {1e-3, 3e-3, 1e-2}) {
    Point q = on + step * inward;
    double lhs = supersolution_lhs(*carc, q, a);
    CHECK(lhs <= 2.0 * q.y * H);
  }
}
