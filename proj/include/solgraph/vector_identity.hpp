#pragma once

#include <cmath>
#include <span>

#include "solgraph/common.hpp"

namespace solgraph {

struct VectorIdentityResult {
  double residual = 0.0;  // |LHS - RHS| of the printed identity
  double slack = 0.0;     // <v1-v2, v1/W1-v2/W2> - ||v1/W1 - v2/W2||^2
};

// Residual of the comparison-lemma vector identity
//   <v1-v2, v1/W1 - v2/W2> = (W1+W2)/2 * ( ||v1/W1 - v2/W2||^2 + (1/W1 - 1/W2) )
// with W_i = sqrt(1 + ||v_i||^2). The second parenthesized term is evaluated
// exactly as printed (first power). Also reports the slack of the inequality
//   <v1-v2, v1/W1 - v2/W2> >= ||v1/W1 - v2/W2||^2.
inline VectorIdentityResult vector_identity_residual(std::span<const double> v1,
                                                     std::span<const double> v2) {
  if (v1.size() != v2.size())
    throw ArgumentError("vector_identity_residual: dimension mismatch");
  double n1 = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < v1.size(); ++i) {
    n1 += v1[i] * v1[i];
    n2 += v2[i] * v2[i];
  }
  const double w1 = std::sqrt(1.0 + n1), w2 = std::sqrt(1.0 + n2);
  double lhs = 0.0, diff2 = 0.0;
  for (std::size_t i = 0; i < v1.size(); ++i) {
    double d = v1[i] / w1 - v2[i] / w2;
    lhs += (v1[i] - v2[i]) * d;
    diff2 += d * d;
  }
  const double rhs = 0.5 * (w1 + w2) * (diff2 + (1.0 / w1 - 1.0 / w2));
  return {std::abs(lhs - rhs), lhs - diff2};
}

}  // namespace solgraph
