#include "conrap/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conrap {

double KktResiduals::max_residual() const noexcept {
  return std::max({stationarity, primal, comp_slack, box, mult_sign});
}

bool at_bound(double x, double bound) noexcept {
  return std::abs(x - bound) <= 1e-9 * (1.0 + std::abs(bound));
}

KktResiduals kkt_check(const ProblemInstance& instance, std::span<const double> x, double lambda,
                       double tol) {
  const auto n = instance.size();
  const auto& phi = instance.phi();
  const auto& g = instance.g();
  const auto& l = instance.lower();
  const auto& u = instance.upper();

  KktResiduals r;
  double grad_inf = 0.0;
  double g_sum = 0.0;
  double box_comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    r.box = std::max({r.box, l[i] - xi, xi - u[i]});
    // Clamp for evaluation so a slightly infeasible x is still scored.
    const double xe = std::clamp(xi, l[i], u[i]);
    const double dphi = phi[i].derivative(xe);
    grad_inf = std::max(grad_inf, std::abs(dphi));
    g_sum += g[i].value(xe);

    const double h = dphi + lambda * g[i].derivative(xe);
    const bool lo = at_bound(xi, l[i]);
    const bool hi = at_bound(xi, u[i]);
    double v = 0.0;
    double w = 0.0;
    if (lo && hi) {
      // Fixed variable: any split of h into v − w works.
      v = std::max(0.0, h);
      w = std::max(0.0, -h);
    } else if (lo) {
      v = std::max(0.0, h);
    } else if (hi) {
      w = std::max(0.0, -h);
    }
    r.stationarity = std::max(r.stationarity, std::abs(h - v + w));
    r.v_max = std::max(r.v_max, v);
    r.w_max = std::max(r.w_max, w);
    box_comp = std::max({box_comp, v * std::abs(l[i] - xi), w * std::abs(xi - u[i])});
  }

  const double slack = g_sum - instance.rhs();
  if (instance.constraint_kind() == ConstraintKind::Inequality) {
    r.primal = std::max(0.0, slack);
    r.mult_sign = std::max(0.0, -lambda);
  } else {
    r.primal = std::abs(slack);
    r.mult_sign = 0.0;
  }
  r.comp_slack = std::max(std::abs(lambda * slack), box_comp);
  r.scale = std::max({1.0, std::abs(instance.rhs()), grad_inf});
  r.pass = std::isfinite(r.max_residual()) && r.max_residual() <= tol * (1.0 + r.scale);
  return r;
}

double recover_boundary_multiplier(const ProblemInstance& instance, std::span<const double> x) {
  // Each coordinate on a bound with gᵢ′ ≠ 0 gives a half-line of admissible λ.
  double lo = instance.constraint_kind() == ConstraintKind::Inequality
                  ? 0.0
                  : -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const auto& l = instance.lower()[i];
    const auto& u = instance.upper()[i];
    const double dphi = instance.phi()[i].derivative(x[i]);
    const double dg = instance.g()[i].derivative(x[i]);
    if (dg == 0.0) continue;
    const bool on_lo = at_bound(x[i], l);
    const bool on_hi = at_bound(x[i], u);
    if (on_lo && on_hi) continue;
    const double crossing = -dphi / dg;
    // lower bound needs h ≥ 0, upper bound needs h ≤ 0, interior needs h = 0.
    if (on_lo) {
      (dg > 0 ? lo : hi) = dg > 0 ? std::max(lo, crossing) : std::min(hi, crossing);
    } else if (on_hi) {
      (dg > 0 ? hi : lo) = dg > 0 ? std::min(hi, crossing) : std::max(lo, crossing);
    } else {
      lo = std::max(lo, crossing);
      hi = std::min(hi, crossing);
    }
  }
  if (lo <= 0.0 && 0.0 <= hi) return 0.0;
  if (lo > 0.0) return std::isfinite(lo) ? lo : 0.0;
  return std::isfinite(hi) ? hi : 0.0;
}

}  // namespace conrap
