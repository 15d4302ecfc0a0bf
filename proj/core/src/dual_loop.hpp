#pragma once

// Internal: the bracketed multiplier loop shared by the inequality, equality
// and bisection-baseline solvers.

#include "conrap/dual_solver.hpp"

namespace conrap::detail {

enum class UpdateRule { SafeguardedSecant, Bisection };

double feasibility_band(const ProblemInstance& instance, const SolverConfig& config) noexcept;

void check_deadline(const SolverConfig& config);

DualBracket make_bracket(const ProblemInstance& instance, double theta_lo, double theta_hi,
                         std::vector<double> x_plus, std::vector<double> x_minus);

/// Runs the loop from `bracket` and fills x, lambda, status, branch,
/// iterations and trace of `report`.
void run_multiplier_loop(const ProblemInstance& instance, DualBracket bracket,
                         const SolverConfig& config, UpdateRule rule, SolveReport& report);

/// Fills objective and kkt of an already solved report.
void certify(const ProblemInstance& instance, const SolverConfig& config, SolveReport& report);

/// solve_equality with a selectable update rule (the bisection baseline reuses it).
SolveReport solve_equality_with(const ProblemInstance& instance, const SolverConfig& config,
                                UpdateRule rule);

}  // namespace conrap::detail
