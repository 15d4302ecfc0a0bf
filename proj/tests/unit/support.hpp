#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "conrap/problem.hpp"

namespace conrap::test {

inline ProblemInstance single(ScalarTerm phi, ScalarTerm g, double l, double u, double b,
                              ConstraintKind kind = ConstraintKind::Inequality) {
  return ProblemInstance({phi}, {g}, {l}, {u}, b, kind);
}

/// φ = Σ ½(xᵢ − cᵢ)², g = Σ xᵢ.
inline ProblemInstance shifted_quadratic(std::vector<double> centers, double l, double u, double b,
                                         ConstraintKind kind) {
  const auto n = centers.size();
  std::vector<ScalarTerm> phi, g;
  for (double c : centers) {
    phi.push_back(ScalarTerm::quad_lin(1.0, c));
    g.push_back(ScalarTerm::lin_constraint(1.0));
  }
  return ProblemInstance(phi, g, std::vector<double>(n, l), std::vector<double>(n, u), b, kind);
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(b));
}

}  // namespace conrap::test
