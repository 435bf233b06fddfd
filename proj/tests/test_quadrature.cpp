#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "solgraph/quadrature.hpp"

using namespace solgraph;

namespace {
// reference values vetted against an independent high-precision evaluation
constexpr double kT1 = 0.86475839388364567694;
constexpr double kG_m1_0_H1 = 0.67963275471498766022;
constexpr double kSpeed_m1_1_H1 = 3.3410315447358524329;
}  // namespace

TEST_CASE("integrate_g basics") {
  CHECK(integrate_g(1.0, -1.0, -1.0) == 0.0);
  CHECK(std::abs(integrate_g(1.0, -1.0, kT1)) < 1e-10);
  CHECK(std::abs(integrate_g(1.0, -1.0, 0.0) - kG_m1_0_H1) < 1e-12);
}

TEST_CASE("integrate_g against Monte Carlo") {
  double v = integrate_g(1.0, -1.0, 0.0);
  CHECK(v > 0.0);
  auto mc = oracles::mc_g_integral(1.0, -1.0, 0.0, 10'000'000, 20240817u);
  CHECK(std::abs(v - mc.value) < 3.0 * mc.stderror);
}

TEST_CASE("integrate_speed basics") {
  CHECK(integrate_speed(1.0, 0.0, 0.0) == 0.0);
  // H -> infinity limit: integrand approaches the arcsine density
  CHECK(std::abs(integrate_speed(1e6, -1.0, 1.0) - kPi) < 1e-4);
  CHECK(std::abs(integrate_speed(1.0, -1.0, 1.0) - kSpeed_m1_1_H1) < 1e-12);
  auto mc = oracles::mc_speed_integral(1.0, -1.0, 1.0, 10'000'000, 911u);
  CHECK(std::abs(integrate_speed(1.0, -1.0, 1.0) - mc.value) <
        3.0 * mc.stderror);
}

TEST_CASE("integrate_g is additive") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    double v[3] = {uni(rng), uni(rng), uni(rng)};
    std::sort(v, v + 3);
    double whole = integrate_g(2.0, v[0], v[2]);
    double parts = integrate_g(2.0, v[0], v[1]) + integrate_g(2.0, v[1], v[2]);
    CHECK(std::abs(whole - parts) < 2e-10);
  }
}

TEST_CASE("quadrature argument checks") {
  CHECK_THROWS_AS(integrate_g(0.0, -1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(integrate_g(1.0, 0.5, -0.5), ArgumentError);
  CHECK_THROWS_AS(integrate_g(1.0, -2.0, 0.0), ArgumentError);
  QuadratureSpec bad;
  bad.abs_tol = -1.0;
  CHECK_THROWS_AS(integrate_g(1.0, -1.0, 1.0, bad), ArgumentError);
}

TEST_CASE("subdivision limit reports achieved error") {
  QuadratureSpec tight;
  tight.abs_tol = 1e-16;
  tight.rel_tol = 1e-16;
  tight.max_subdivisions = 1;
  bool threw = false;
  try {
    integrate_g(0.01, -1.0, 1.0, tight);  // sharply peaked integrand
  } catch (const ConvergenceError& e) {
    threw = true;
    CHECK(e.achieved > 0.0);
  }
  CHECK(threw);
}

TEST_CASE("smooth fixed-order quadrature agrees with the adaptive path") {
  for (double H : {0.25, 1.0, 4.0}) {
    double a = integrate_g(H, -1.0, 0.3);
    double s = detail::g_integral_to(H, 0.3);
    CHECK(std::abs(a - s) < 1e-12 * (1.0 + std::abs(a)));
  }
}
