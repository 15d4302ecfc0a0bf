#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "conrap/problem.hpp"

namespace conrap {

enum class BoundSide { Lower, Upper, Interior };

struct ScalarSolveResult {
  double x_star;
  BoundSide at_bound;
  /// Set when h = φ′ + λg′ vanishes on a nondegenerate interval; x_star is its
  /// left end.
  std::optional<std::pair<double, double>> flat_interval;
};

/// Root tolerance used for the interior stationarity condition on [l, u].
double root_tolerance(double l, double u) noexcept;

/// argmin over [l, u] of φᵢ(x) + λ·gᵢ(x).
///
/// Uses the closed-form stationary point when the (φᵢ, gᵢ) pair has one and
/// falls back to minimize_scalar_generic otherwise. Throws std::invalid_argument
/// when λ < 0 is combined with a non-affine constraint term (the sum would not
/// be convex).
ScalarSolveResult minimize_scalar(const ScalarTerm& phi, const ScalarTerm& g, double lambda,
                                  double l, double u);

/// Same contract as minimize_scalar, always through root finding on
/// h(x) = φᵢ′(x) + λ·gᵢ′(x): bracketed Newton with bisection fallback.
ScalarSolveResult minimize_scalar_generic(const ScalarTerm& phi, const ScalarTerm& g,
                                          double lambda, double l, double u);

/// Box minimizer of φ (λ = 0 per coordinate).
std::vector<double> argmin_phi_box(const ProblemInstance& instance);

struct ConstraintMinimizer {
  std::vector<double> x;
  double grad_norm;  ///< ‖∇g(x)‖₂ at the returned point
};

/// Box minimizer of g (coordinatewise), with the Euclidean norm of ∇g there.
ConstraintMinimizer argmin_g_box(const ProblemInstance& instance);

/// Fills `x` with argmin_{x∈X} φ(x) + λ·g(x).
void minimize_lagrangian(const ProblemInstance& instance, double lambda, std::vector<double>& x);

}  // namespace conrap
