#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "conrap/kkt.hpp"
#include "conrap/problem.hpp"
#include "conrap/projected_gradient.hpp"

namespace conrap {

/// Angle bracket θ_lo ≤ θ* ≤ θ_hi on the multiplier λ = tan θ, together with
/// the iterates x₊ (g(x₊) > b, optimal at tan θ_lo) and x₋ (g(x₋) < b, optimal
/// at tan θ_hi).
struct DualBracket {
  double theta_lo;
  double theta_hi;
  std::vector<double> x_plus;
  std::vector<double> x_minus;
  double phi_plus;
  double g_plus;
  double phi_minus;
  double g_minus;
};

struct SolverConfig {
  double gamma = 0.2;           ///< safeguard constant in (0, ½)
  double eps = 1e-10;           ///< stop when θ_hi − θ_lo ≤ eps
  double feas_tol = 1e-9;       ///< |g(x) − b| ≤ feas_tol·(1 + |b|) counts as g(x) = b
  double dual_flat_tol = 0.0;   ///< relative band for the equal-Lagrangian exit (0: exact ties only)
  double kkt_tol = 1e-6;        ///< tolerance of the certificate stored in the report
  bool record_trace = false;    ///< keep one IterationRecord per loop pass
  PGConfig pg{};
  /// Solves abort with SolveTimeout once this instant has passed.
  std::optional<std::chrono::steady_clock::time_point> deadline;

  /// Throws std::invalid_argument unless 0 < gamma < ½ and eps > 0.
  void validate() const;
};

enum class SolveBranch { FeasibleShortcut, ExactHit, AlphaStep, Degenerate, Infeasible };

std::string_view to_string(SolveBranch branch);
SolveBranch solve_branch_from_string(std::string_view name);

/// Bracket state after one pass of the multiplier loop.
struct IterationRecord {
  int iteration;      ///< 1-based
  double theta_lo;
  double theta_hi;
  double lambda;      ///< multiplier used for this pass
  bool safeguarded;   ///< secant angle was replaced by the midpoint
  double g_plus;
  double g_minus;
};

struct SolveReport {
  std::vector<double> x;
  double lambda = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  SolveBranch branch = SolveBranch::Infeasible;
  int iterations = 0;
  double objective = 0.0;
  KktResiduals kkt{};
  double wall_seconds = 0.0;
  std::vector<IterationRecord> trace;
};

class SolveTimeout : public std::runtime_error {
 public:
  SolveTimeout() : std::runtime_error("solve exceeded its deadline") {}
};

struct MultiplierUpdate {
  double lambda;
  double theta;
  bool safeguarded;
};

/// Secant multiplier through (g(x₊), φ(x₊)) and (g(x₋), φ(x₋)), replaced by
/// the bracket midpoint when its angle is farther than (½ − γ)(θ_hi − θ_lo)
/// from the midpoint. Requires g(x₊) ≠ g(x₋).
MultiplierUpdate update_multiplier(const DualBracket& bracket, double gamma);

/// λ = tan θ with θ kept 1e−12 away from ±π/2.
double multiplier_from_angle(double theta) noexcept;

struct AlphaStepResult {
  double alpha;
  std::vector<double> x;
};

/// Solves g(αx₊ + (1−α)x₋) = b for α ∈ [0, 1]. Requires g(x₋) < b < g(x₊).
AlphaStepResult alpha_step(const ProblemInstance& instance, std::span<const double> x_plus,
                           std::span<const double> x_minus, double feas_tol = 1e-9);

/// Lagrangian dual method for  min φ  s.t. g ≤ b,  l ≤ x ≤ u.
SolveReport solve_inequality(const ProblemInstance& instance, const SolverConfig& config = {});

/// Lagrangian dual method for  min φ  s.t. Σ aᵢxᵢ = b,  l ≤ x ≤ u  (λ of either sign).
SolveReport solve_equality(const ProblemInstance& instance, const SolverConfig& config = {});

/// Dispatches on the instance's constraint kind.
SolveReport solve(const ProblemInstance& instance, const SolverConfig& config = {});

/// Reference method: the same bracketing with pure bisection in θ.
SolveReport solve_dual_bisection(const ProblemInstance& instance, const SolverConfig& config = {});

/// ⌈log_{1−γ}(2ε/π)⌉, the loop-count bound of the safeguarded update.
int iteration_bound(double gamma, double eps);

}  // namespace conrap
