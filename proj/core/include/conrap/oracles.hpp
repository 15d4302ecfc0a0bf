#pragma once

#include <optional>
#include <vector>

#include "conrap/problem.hpp"

namespace conrap {

// Reference solvers for verification. Neither uses the secant multiplier
// update of the main solvers.

struct OracleSolution {
  std::vector<double> x;
  double lambda;
};

/// Maximizes the concave dual L(λ) = min_{x∈X} φ(x) + λ(g(x) − b) by
/// golden-section search on a λ bracket that is widened until g(x(λ)) − b
/// changes sign. The estimate is then refined by bisection on the sign of
/// g(x(λ)) − b (a supergradient of L) to width tol·max(1, |λ|), and the two
/// straddling minimizers are mixed so that g(x) = b.
/// Returns the box minimizer of φ with λ = 0 when it is already feasible
/// (inequality) or exactly on the hyperplane (equality).
/// Throws std::invalid_argument for infeasible instances.
OracleSolution oracle_dual_search(const ProblemInstance& instance, double tol = 1e-12);

/// Exhaustive minimizer over a regular grid of spacing `step` (n ≤ 3).
///
/// For each choice of a closing coordinate j, the other coordinates range over
/// {lᵢ, lᵢ + step, …} ∪ {uᵢ} (only {lᵢ} when step exceeds the box width) and
/// xⱼ is set to the best feasible value given the rest: the unique solution of
/// the equality, or the clip of argmin φⱼ to {gⱼ ≤ b − Σ_{i≠j} gᵢ} for the
/// inequality. For n = 3 the middle coordinate is searched by a discrete
/// ternary search, exact for the convex reduced objective. Feasibility is
/// tested with a slack of 1e−12·(1 + |b|). std::nullopt when no grid point is
/// feasible.
std::optional<std::vector<double>> oracle_grid(const ProblemInstance& instance, double step);

}  // namespace conrap
