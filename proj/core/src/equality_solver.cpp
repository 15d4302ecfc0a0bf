#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conrap/dual_solver.hpp"
#include "conrap/scalar_minimizer.hpp"
#include "dual_loop.hpp"

namespace conrap {

namespace detail {

SolveReport solve_equality_with(const ProblemInstance& original, const SolverConfig& config,
                                UpdateRule rule) {
  if (original.constraint_kind() != ConstraintKind::LinearEquality) {
    throw std::invalid_argument("solve_equality: instance has an inequality constraint");
  }
  config.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  check_deadline(config);

  // Solving the positive-coefficient form; the multiplier flips sign with a.
  const ProblemInstance instance = normalize_signs(original);
  const bool flipped = instance.g().front().param(0) != original.g().front().param(0);

  SolveReport report;
  const double b = instance.rhs();
  const double band = feasibility_band(instance, config);
  const double g_lo = eval_g(instance, instance.lower());
  const double g_hi = eval_g(instance, instance.upper());

  constexpr double kHalfPi = std::numbers::pi / 2.0;
  if (g_lo > b + band || g_hi < b - band) {
    report.status = SolveStatus::Infeasible;
    report.branch = SolveBranch::Infeasible;
  } else if (std::abs(g_lo - b) <= band || std::abs(g_hi - b) <= band) {
    // Only one feasible point: the corresponding box corner.
    report.x = std::abs(g_lo - b) <= band ? instance.lower() : instance.upper();
    report.lambda = recover_boundary_multiplier(instance, report.x);
    report.status = SolveStatus::Optimal;
    report.branch = SolveBranch::ExactHit;
  } else {
    auto x_phi = argmin_phi_box(instance);
    const double g_phi = eval_g(instance, x_phi);
    if (std::abs(g_phi - b) <= band) {
      report.x = std::move(x_phi);
      report.lambda = 0.0;
      report.status = SolveStatus::Optimal;
      report.branch = SolveBranch::FeasibleShortcut;
    } else if (g_phi < b) {
      // λ* ≤ 0: x₋ = x_φ (θ = 0), x₊ = u (θ = −π/2).
      auto bracket = make_bracket(instance, -kHalfPi, 0.0, instance.upper(), std::move(x_phi));
      run_multiplier_loop(instance, std::move(bracket), config, rule, report);
    } else {
      // λ* ≥ 0: x₋ = l (θ = π/2), x₊ = x_φ (θ = 0).
      auto bracket = make_bracket(instance, 0.0, kHalfPi, std::move(x_phi), instance.lower());
      run_multiplier_loop(instance, std::move(bracket), config, rule, report);
    }
  }
  certify(instance, config, report);
  if (flipped) report.lambda = -report.lambda;
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace detail

SolveReport solve_equality(const ProblemInstance& instance, const SolverConfig& config) {
  return detail::solve_equality_with(instance, config, detail::UpdateRule::SafeguardedSecant);
}

}  // namespace conrap
