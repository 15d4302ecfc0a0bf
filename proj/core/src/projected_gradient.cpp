#include "conrap/projected_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conrap {

namespace {

constexpr int kMaxArmijoHalvings = 60;

// φ(y) − φ(x), summed from per-coordinate differences so that the Armijo
// test stays meaningful when the step is tiny.
double objective_change(const ProblemInstance& instance, std::span<const double> x,
                        std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += instance.phi()[i].value_change(x[i], y[i]);
  return sum;
}

// Smallest (first) point of [lo, hi] where the nondecreasing derivative is
// ≥ 0 when `first_nonneg`, otherwise the last point where it is ≤ 0.
double derivative_crossing(const ScalarTerm& term, double lo, double hi, bool first_nonneg) {
  if (first_nonneg) {
    if (term.derivative(lo) >= 0) return lo;
    if (term.derivative(hi) < 0) return hi;
  } else {
    if (term.derivative(hi) <= 0) return hi;
    if (term.derivative(lo) > 0) return lo;
  }
  const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  double a = lo;
  double b = hi;
  // Invariant: the crossing lies in [a, b].
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double d = term.derivative(m);
    const bool right = first_nonneg ? d >= 0 : d > 0;
    (right ? b : a) = m;
  }
  return first_nonneg ? b : a;
}

}  // namespace

void PGConfig::validate() const {
  if (!(beta_lo > 0 && beta_lo <= beta_hi)) {
    throw std::invalid_argument("PGConfig: requires 0 < beta_lo <= beta_hi");
  }
  if (!(sigma > 0 && sigma < 1)) throw std::invalid_argument("PGConfig: sigma must be in (0,1)");
  if (!(eps_pg > 0)) throw std::invalid_argument("PGConfig: eps_pg must be positive");
  if (max_iter < 1) throw std::invalid_argument("PGConfig: max_iter must be >= 1");
}

OmegaG omega_g_intervals(const ProblemInstance& instance) {
  const auto n = instance.size();
  OmegaG omega{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = instance.g()[i];
    const double l = instance.lower()[i];
    const double u = instance.upper()[i];
    double p = derivative_crossing(g, l, u, true);
    double q = derivative_crossing(g, l, u, false);
    if (q < p) q = p;  // strict minimizer: both searches land on the same root
    omega.lower[i] = p;
    omega.upper[i] = q;
  }
  return omega;
}

std::vector<double> project_onto_omega_g(std::span<const double> x, const OmegaG& omega) {
  if (x.size() != omega.size()) throw std::invalid_argument("project_onto_omega_g: size mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::clamp(x[i], omega.lower[i], omega.upper[i]);
  }
  return out;
}

PGResult projected_gradient(const ProblemInstance& instance, const OmegaG& omega,
                            std::span<const double> x0, const PGConfig& config) {
  config.validate();
  const auto n = instance.size();
  if (x0.size() != n || omega.size() != n) {
    throw std::invalid_argument("projected_gradient: size mismatch");
  }
  const auto& phi = instance.phi();

  PGResult result;
  result.x = project_onto_omega_g(x0, omega);
  std::vector<double> grad(n), xp(n), trial(n);
  auto& x = result.x;

  auto fixed_point = [&](double beta) {
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = phi[i].derivative(x[i]);
      xp[i] = std::clamp(x[i] - beta * grad[i], omega.lower[i], omega.upper[i]);
      sq += (xp[i] - x[i]) * (xp[i] - x[i]);
    }
    return std::sqrt(sq);
  };

  const double beta = config.beta_hi;
  for (int k = 0; k < config.max_iter; ++k) {
    const double residual = fixed_point(beta);
    result.iterations = k;
    if (residual <= config.eps_pg) {
      result.converged = true;
      result.fixed_point_residual = residual;
      return result;
    }

    double slope = 0.0;  // ∇φᵀd ≤ 0 for d = x_p − x
    for (std::size_t i = 0; i < n; ++i) slope += grad[i] * (xp[i] - x[i]);

    double step = 1.0;
    double moved = 0.0;
    bool accepted = false;
    for (int j = 0; j <= kMaxArmijoHalvings; ++j, step *= 0.5) {
      moved = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = x[i] + step * (xp[i] - x[i]);
        moved += (trial[i] - x[i]) * (trial[i] - x[i]);
      }
      if (objective_change(instance, x, trial) <= config.sigma * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No sufficient decrease at any step: rounding noise dominates.
      result.iterations = k;
      result.fixed_point_residual = residual;
      result.converged = false;
      return result;
    }
    x.swap(trial);
    if (std::sqrt(moved) <= config.eps_pg) {
      result.iterations = k + 1;
      result.converged = true;
      result.fixed_point_residual = fixed_point(beta);
      return result;
    }
  }
  result.iterations = config.max_iter;
  result.fixed_point_residual = fixed_point(beta);
  result.converged = result.fixed_point_residual <= config.eps_pg;
  return result;
}

}  // namespace conrap
