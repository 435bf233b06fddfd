#pragma once

#include <cmath>
#include <functional>

#include "solgraph/common.hpp"

namespace solgraph {

struct RootSpec {
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;
  double tol = 1e-13;
  int max_iters = 200;
};

// Bracket-preserving root finder: bisection with secant acceleration.
// The bracket always contains a sign change. A secant proposal is used when
// it lands strictly inside the bracket; whenever an iteration fails to halve
// the bracket, a bisection step is appended, so the width shrinks by at
// least a factor 2 per round. Fully deterministic.
template <class F>
double find_root(const F& f, const RootSpec& spec) {
  double lo = spec.bracket_lo, hi = spec.bracket_hi;
  if (!(lo < hi)) throw ArgumentError("find_root: bracket_lo < bracket_hi required");
  if (!(spec.tol > 0.0)) throw ArgumentError("find_root: tol must be positive");

  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw BracketError("find_root: no sign change over the bracket");

  auto shrink = [&](double x) -> bool {  // true if x is an exact root
    double fx = f(x);
    if (fx == 0.0) {
      lo = hi = x;
      return true;
    }
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    return false;
  };

  for (int it = 0; it < spec.max_iters; ++it) {
    if (hi - lo <= spec.tol) return 0.5 * (lo + hi);
    double width = hi - lo;

    double x = 0.5 * (lo + hi);
    double denom = fhi - flo;
    if (denom != 0.0) {
      double xs = lo - flo * (hi - lo) / denom;
      double margin = 1e-3 * width;
      if (xs > lo + margin && xs < hi - margin) x = xs;
    }
    if (shrink(x)) return lo;
    if (hi - lo <= spec.tol) return 0.5 * (lo + hi);
    if (hi - lo > 0.5 * width) {
      if (shrink(0.5 * (lo + hi))) return lo;
    }
  }
  if (hi - lo <= spec.tol) return 0.5 * (lo + hi);
  throw ConvergenceError("find_root: max_iters exceeded", hi - lo);
}

inline double find_root(const std::function<double(double)>& f, double lo,
                        double hi, double tol = 1e-13, int max_iters = 200) {
  return find_root(f, RootSpec{lo, hi, tol, max_iters});
}

}  // namespace solgraph
