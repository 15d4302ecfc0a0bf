#include "conrap/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conrap/scalar_minimizer.hpp"
#include "dual_loop.hpp"

namespace conrap {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kAngleGuard = 1e-12;

double lagrangian(double phi, double g, double lambda, double b) {
  return phi + lambda * (g - b);
}

bool close_relative(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace

void SolverConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    throw std::invalid_argument("SolverConfig: gamma must lie in (0, 1/2)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("SolverConfig: eps must be positive");
  if (!(feas_tol >= 0.0)) throw std::invalid_argument("SolverConfig: feas_tol must be >= 0");
  if (!(dual_flat_tol >= 0.0)) {
    throw std::invalid_argument("SolverConfig: dual_flat_tol must be >= 0");
  }
  pg.validate();
}

std::string_view to_string(SolveBranch branch) {
  switch (branch) {
    case SolveBranch::FeasibleShortcut: return "FeasibleShortcut";
    case SolveBranch::ExactHit: return "ExactHit";
    case SolveBranch::AlphaStep: return "AlphaStep";
    case SolveBranch::Degenerate: return "Degenerate";
    case SolveBranch::Infeasible: return "Infeasible";
  }
  return "?";
}

SolveBranch solve_branch_from_string(std::string_view name) {
  for (auto b : {SolveBranch::FeasibleShortcut, SolveBranch::ExactHit, SolveBranch::AlphaStep,
                 SolveBranch::Degenerate, SolveBranch::Infeasible}) {
    if (to_string(b) == name) return b;
  }
  throw std::invalid_argument("unknown solve branch '" + std::string(name) + "'");
}

double multiplier_from_angle(double theta) noexcept {
  return std::tan(std::clamp(theta, -kHalfPi + kAngleGuard, kHalfPi - kAngleGuard));
}

int iteration_bound(double gamma, double eps) {
  return static_cast<int>(std::ceil(std::log(2.0 * eps / std::numbers::pi) / std::log(1.0 - gamma)));
}

MultiplierUpdate update_multiplier(const DualBracket& bracket, double gamma) {
  const double dg = bracket.g_plus - bracket.g_minus;
  if (!(dg != 0.0)) {
    throw std::invalid_argument("update_multiplier: g(x+) and g(x-) coincide");
  }
  const double secant = (bracket.phi_minus - bracket.phi_plus) / dg;
  double theta = std::atan(secant);
  const double width = bracket.theta_hi - bracket.theta_lo;
  const double mid = 0.5 * (bracket.theta_lo + bracket.theta_hi);
  if (std::abs(theta - mid) > (0.5 - gamma) * width) {
    return {multiplier_from_angle(mid), mid, true};
  }
  return {secant, theta, false};
}

AlphaStepResult alpha_step(const ProblemInstance& instance, std::span<const double> x_plus,
                           std::span<const double> x_minus, double feas_tol) {
  const auto n = instance.size();
  if (x_plus.size() != n || x_minus.size() != n) {
    throw std::invalid_argument("alpha_step: size mismatch");
  }
  const double b = instance.rhs();
  const double g_plus = eval_g(instance, x_plus);
  const double g_minus = eval_g(instance, x_minus);
  if (!(g_minus < b && b < g_plus)) {
    throw std::invalid_argument("alpha_step: requires g(x-) < b < g(x+)");
  }

  std::vector<double> x(n);
  auto combine = [&](double alpha) {
    for (std::size_t i = 0; i < n; ++i) x[i] = alpha * x_plus[i] + (1.0 - alpha) * x_minus[i];
  };

  double alpha = (b - g_minus) / (g_plus - g_minus);
  if (!instance.has_linear_constraint()) {
    // h(α) = g(αx₊ + (1−α)x₋) − b is convex with h(0) < 0 < h(1).
    const double target = 1e-14 * (1.0 + std::abs(b));
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      alpha = 0.5 * (lo + hi);
      if (alpha <= lo || alpha >= hi) break;
      combine(alpha);
      const double h = eval_g(instance, x) - b;
      if (std::abs(h) <= target) break;
      (h > 0 ? hi : lo) = alpha;
    }
  }
  alpha = std::clamp(alpha, 0.0, 1.0);
  combine(alpha);
  (void)feas_tol;
  return {alpha, std::move(x)};
}

namespace detail {

double feasibility_band(const ProblemInstance& instance, const SolverConfig& config) noexcept {
  return config.feas_tol * (1.0 + std::abs(instance.rhs()));
}

void check_deadline(const SolverConfig& config) {
  if (config.deadline && std::chrono::steady_clock::now() > *config.deadline) throw SolveTimeout();
}

DualBracket make_bracket(const ProblemInstance& instance, double theta_lo, double theta_hi,
                         std::vector<double> x_plus, std::vector<double> x_minus) {
  DualBracket br{theta_lo, theta_hi, std::move(x_plus), std::move(x_minus), 0, 0, 0, 0};
  br.phi_plus = eval_phi(instance, br.x_plus);
  br.g_plus = eval_g(instance, br.x_plus);
  br.phi_minus = eval_phi(instance, br.x_minus);
  br.g_minus = eval_g(instance, br.x_minus);
  return br;
}

void run_multiplier_loop(const ProblemInstance& instance, DualBracket br,
                         const SolverConfig& config, UpdateRule rule, SolveReport& report) {
  const double b = instance.rhs();
  const double band = feasibility_band(instance, config);
  std::vector<double> x_trial;
  int k = 0;

  auto check_bracket = [&] {
    if (!(br.g_plus > b && br.g_minus < b)) {
      throw std::logic_error("multiplier loop: bracket invariant g(x+) > b > g(x-) violated");
    }
  };
  check_bracket();

  bool dual_optimal = false;
  double lambda_star = 0.0;
  while (br.theta_hi - br.theta_lo > config.eps) {
    check_deadline(config);
    ++k;
    MultiplierUpdate upd;
    if (rule == UpdateRule::SafeguardedSecant) {
      upd = update_multiplier(br, config.gamma);
    } else {
      const double mid = 0.5 * (br.theta_lo + br.theta_hi);
      upd = {multiplier_from_angle(mid), mid, true};
    }

    minimize_lagrangian(instance, upd.lambda, x_trial);
    const double phi_t = eval_phi(instance, x_trial);
    const double g_t = eval_g(instance, x_trial);

    if (std::abs(g_t - b) <= band) {
      report.x = std::move(x_trial);
      report.lambda = upd.lambda;
      report.status = SolveStatus::Optimal;
      report.branch = SolveBranch::ExactHit;
      report.iterations = k;
      if (config.record_trace) {
        report.trace.push_back({k, br.theta_lo, br.theta_hi, upd.lambda, upd.safeguarded,
                                br.g_plus, br.g_minus});
      }
      return;
    }

    // Both bracket iterates minimize L(·, λ) too: λ is dual optimal.
    const double l_t = lagrangian(phi_t, g_t, upd.lambda, b);
    if (close_relative(l_t, lagrangian(br.phi_plus, br.g_plus, upd.lambda, b),
                       config.dual_flat_tol) &&
        close_relative(l_t, lagrangian(br.phi_minus, br.g_minus, upd.lambda, b),
                       config.dual_flat_tol)) {
      dual_optimal = true;
      lambda_star = upd.lambda;
    }

    if (g_t > b) {
      br.x_plus.swap(x_trial);
      br.phi_plus = phi_t;
      br.g_plus = g_t;
      br.theta_lo = upd.theta;
    } else {
      br.x_minus.swap(x_trial);
      br.phi_minus = phi_t;
      br.g_minus = g_t;
      br.theta_hi = upd.theta;
    }
    check_bracket();
    if (config.record_trace) {
      report.trace.push_back({k, br.theta_lo, br.theta_hi, upd.lambda, upd.safeguarded,
                              br.g_plus, br.g_minus});
    }
    if (dual_optimal) break;
  }

  if (!dual_optimal) {
    const double secant = (br.phi_minus - br.phi_plus) / (br.g_plus - br.g_minus);
    lambda_star = std::clamp(secant, multiplier_from_angle(br.theta_lo),
                             multiplier_from_angle(br.theta_hi));
  }
  auto step = alpha_step(instance, br.x_plus, br.x_minus, config.feas_tol);
  report.x = std::move(step.x);
  report.lambda = lambda_star;
  report.status = SolveStatus::Optimal;
  report.branch = SolveBranch::AlphaStep;
  report.iterations = k;
}

void certify(const ProblemInstance& instance, const SolverConfig& config, SolveReport& report) {
  if (report.x.empty()) return;
  report.objective = eval_phi(instance, report.x);
  report.kkt = kkt_check(instance, report.x, report.lambda, config.kkt_tol);
}

}  // namespace detail

namespace {

using Clock = std::chrono::steady_clock;

SolveReport solve_inequality_with(const ProblemInstance& instance, const SolverConfig& config,
                                  detail::UpdateRule rule) {
  if (instance.constraint_kind() != ConstraintKind::Inequality) {
    throw std::invalid_argument("solve_inequality: instance has an equality constraint");
  }
  config.validate();
  const auto start = Clock::now();
  detail::check_deadline(config);

  SolveReport report;
  const double b = instance.rhs();
  const double band = detail::feasibility_band(instance, config);

  auto x_phi = argmin_phi_box(instance);
  if (eval_g(instance, x_phi) <= b) {
    report.x = std::move(x_phi);
    report.lambda = 0.0;
    report.status = SolveStatus::Optimal;
    report.branch = SolveBranch::FeasibleShortcut;
  } else {
    auto [x_g, grad_norm] = argmin_g_box(instance);
    const double g_min = eval_g(instance, x_g);
    if (g_min > b + band) {
      report.status = SolveStatus::Infeasible;
      report.branch = SolveBranch::Infeasible;
    } else if (g_min >= b - band) {
      // g(x_g) = b: the feasible set is Ω_g. A nonzero ∇g(x_g) does not make
      // Ω_g a single point when some gᵢ is constant, so test Ω_g itself.
      const bool single_point = grad_norm > 1e-12 * std::max(1.0, std::abs(b)) && [&] {
        if (std::ranges::none_of(instance.g(), [](const ScalarTerm& t) { return t.is_constant(); })) return true;
        const auto omega = omega_g_intervals(instance);
        return std::ranges::equal(omega.lower, omega.upper);
      }();
      if (single_point) {
        report.x = std::move(x_g);
        report.status = SolveStatus::Optimal;
        report.branch = SolveBranch::ExactHit;
      } else {
        const auto omega = omega_g_intervals(instance);
        auto pg = projected_gradient(instance, omega, x_g, config.pg);
        report.x = std::move(pg.x);
        report.iterations = pg.iterations;
        report.status = pg.converged ? SolveStatus::BoundaryDegenerate
                                     : SolveStatus::MaxIterFallback;
        report.branch = SolveBranch::Degenerate;
      }
      report.lambda = recover_boundary_multiplier(instance, report.x);
    } else {
      constexpr double kHalfPi = std::numbers::pi / 2.0;
      auto bracket = detail::make_bracket(instance, 0.0, kHalfPi, std::move(x_phi), std::move(x_g));
      detail::run_multiplier_loop(instance, std::move(bracket), config, rule, report);
    }
  }
  detail::certify(instance, config, report);
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace

SolveReport solve_inequality(const ProblemInstance& instance, const SolverConfig& config) {
  return solve_inequality_with(instance, config, detail::UpdateRule::SafeguardedSecant);
}

SolveReport solve(const ProblemInstance& instance, const SolverConfig& config) {
  return instance.constraint_kind() == ConstraintKind::Inequality ? solve_inequality(instance, config)
                                                                   : solve_equality(instance, config);
}

SolveReport solve_dual_bisection(const ProblemInstance& instance, const SolverConfig& config) {
  if (instance.constraint_kind() == ConstraintKind::Inequality) {
    return solve_inequality_with(instance, config, detail::UpdateRule::Bisection);
  }
  return detail::solve_equality_with(instance, config, detail::UpdateRule::Bisection);
}

}  // namespace conrap
