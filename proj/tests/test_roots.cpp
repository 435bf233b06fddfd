#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "solgraph/quadrature.hpp"
#include "solgraph/roots.hpp"

using namespace solgraph;

TEST_CASE("find_root on simple functions") {
  double r = find_root([](double x) { return x - 0.5; }, RootSpec{0, 1, 1e-13, 200});
  CHECK(std::abs(r - 0.5) < 1e-12);
  double s = find_root([](double x) { return x * x - 2.0; },
                       RootSpec{1, 2, 1e-13, 200});
  CHECK(std::abs(s - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("find_root locates the sign change of the weight integral") {
  auto f = [](double t) { return integrate_g(1.0, -1.0, t); };
  double t = find_root(f, RootSpec{0.01, 0.999, 1e-12, 200});
  CHECK(f(t - 1e-6) * f(t + 1e-6) < 0.0);  // sign flips across the root
  CHECK(t > 0.0);
  CHECK(t < 1.0);
}

TEST_CASE("find_root error paths") {
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; },
                            RootSpec{-1, 1, 1e-13, 100}),
                  BracketError);
  CHECK_THROWS_AS(find_root([](double) { return 1.0; },
                            RootSpec{1, 0, 1e-13, 100}),
                  ArgumentError);
  CHECK_THROWS_AS(find_root([](double x) { return std::tanh(x) - 0.123; },
                            RootSpec{-5, 5, 1e-18, 3}),
                  ConvergenceError);
}

TEST_CASE("find_root is deterministic") {
  auto f = [](double x) { return std::sin(3.0 * x) - 0.3; };
  double a = find_root(f, RootSpec{0, 0.5, 1e-14, 300});
  double b = find_root(f, RootSpec{0, 0.5, 1e-14, 300});
  CHECK(a == b);  // bit identical
}

TEST_CASE("find_root honors the bracket") {
  // nasty flat function: the accelerated step must never leave the bracket
  auto f = [](double x) { return (x < 0.9) ? -1e-30 : (x - 0.9); };
  double r = find_root(f, RootSpec{0, 1, 1e-12, 300});
  CHECK(r >= 0.0);
  CHECK(r <= 1.0);
  CHECK(std::abs(r - 0.9) < 1e-10);
}
