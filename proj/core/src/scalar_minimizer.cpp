#include "conrap/scalar_minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conrap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRootSteps = 200;

// Unconstrained zero of h(x) = φ′(x) + λg′(x) when it has a closed form.
// +inf means h < 0 everywhere (minimizer at u), −inf means h > 0 everywhere,
// NaN means h ≡ 0. std::nullopt when no closed form is known.
std::optional<double> stationary_point(const ScalarTerm& phi, const ScalarTerm& g,
                                       double lambda) {
  auto constant_sign = [](double h) {
    if (h > 0) return -kInf;
    if (h < 0) return kInf;
    return std::numeric_limits<double>::quiet_NaN();
  };

  const bool g_linear_shift = lambda == 0.0 || g.kind() == TermKind::LinConstraint ||
                              (g.kind() == TermKind::QuadConstraint && g.param(0) == 0.0);
  if (g_linear_shift) {
    // h(x) = φ′(x) + s with a constant shift s.
    double s = 0.0;
    if (lambda != 0.0) {
      s = g.kind() == TermKind::LinConstraint ? lambda * g.param(0) : -lambda * g.param(1);
    }
    const auto [p, q] = phi.params();
    switch (phi.kind()) {
      case TermKind::QuadLin:
        return (q - s) / p;
      case TermKind::QuadConstraint:
        return p > 0 ? (q - s) / p : constant_sign(s - q);
      case TermKind::LinConstraint:
        return constant_sign(p + s);
      case TermKind::Holding:
        return p + s > 0 ? std::sqrt(q / (p + s)) : kInf;
      case TermKind::Recip:
        return s > 0 ? std::sqrt(p / s) : kInf;
      case TermKind::ExpSearch:
        return s > 0 ? std::log(p * q / s) / q : kInf;
      case TermKind::NegEntropy:
        return std::nullopt;
    }
    return std::nullopt;
  }

  if (g.kind() == TermKind::QuadConstraint &&
      (phi.kind() == TermKind::QuadLin || phi.kind() == TermKind::QuadConstraint)) {
    const double curvature = phi.param(0) + lambda * g.param(0);
    const double linear = phi.param(1) + lambda * g.param(1);
    return curvature > 0 ? linear / curvature : constant_sign(-linear);
  }
  return std::nullopt;
}

void check_convex_combination(const ScalarTerm& g, double lambda) {
  if (lambda < 0 && !g.is_affine()) {
    throw std::invalid_argument(
        "minimize_scalar: negative multiplier with a non-affine constraint term is not convex");
  }
}

ScalarSolveResult classify(double x0, double l, double u) {
  if (std::isnan(x0)) {
    if (l < u) return {l, BoundSide::Lower, std::pair{l, u}};
    return {l, BoundSide::Lower, std::nullopt};
  }
  if (x0 <= l) return {l, BoundSide::Lower, std::nullopt};
  if (x0 >= u) return {u, BoundSide::Upper, std::nullopt};
  return {x0, BoundSide::Interior, std::nullopt};
}

}  // namespace

double root_tolerance(double l, double u) noexcept {
  return 1e-12 * std::max({1.0, std::abs(l), std::abs(u)});
}

ScalarSolveResult minimize_scalar_generic(const ScalarTerm& phi, const ScalarTerm& g,
                                          double lambda, double l, double u) {
  check_convex_combination(g, lambda);
  auto h = [&](double x) { return phi.derivative(x) + lambda * g.derivative(x); };
  auto dh = [&](double x) {
    return phi.second_derivative(x) + lambda * g.second_derivative(x);
  };

  const double h_lo = h(l);
  if (h_lo >= 0) {
    if (l < u && h(u) <= 0) return {l, BoundSide::Lower, std::pair{l, u}};
    return {l, BoundSide::Lower, std::nullopt};
  }
  if (h(u) <= 0) return {u, BoundSide::Upper, std::nullopt};

  // h(lo) < 0 < h(hi); h is nondecreasing.
  const double tol = root_tolerance(l, u);
  double lo = l;
  double hi = u;
  double x = 0.5 * (lo + hi);
  double step_prev = hi - lo;
  double step = step_prev;
  for (int it = 0; it < kMaxRootSteps; ++it) {
    const double hx = h(x);
    if (hx == 0.0) return {x, BoundSide::Interior, std::nullopt};
    if (hx < 0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = dh(x);
    const double newton = slope > 0 ? x - hx / slope : std::numeric_limits<double>::quiet_NaN();
    const bool newton_ok =
        std::isfinite(newton) && newton > lo && newton < hi && std::abs(hx / slope) < 0.5 * step_prev;
    step_prev = step;
    if (newton_ok) {
      step = std::abs(newton - x);
      x = newton;
    } else {
      step = 0.5 * (hi - lo);
      x = lo + step;
    }
    if (step <= tol || hi - lo <= tol) break;
  }
  // Newton polish inside the final bracket.
  const double slope = dh(x);
  if (slope > 0) {
    const double polished = x - h(x) / slope;
    if (polished >= lo && polished <= hi) x = polished;
  }
  x = std::clamp(x, l, u);
  return {x, BoundSide::Interior, std::nullopt};
}

ScalarSolveResult minimize_scalar(const ScalarTerm& phi, const ScalarTerm& g, double lambda,
                                  double l, double u) {
  check_convex_combination(g, lambda);
  if (auto x0 = stationary_point(phi, g, lambda)) return classify(*x0, l, u);
  return minimize_scalar_generic(phi, g, lambda, l, u);
}

std::vector<double> argmin_phi_box(const ProblemInstance& instance) {
  std::vector<double> x;
  minimize_lagrangian(instance, 0.0, x);
  return x;
}

ConstraintMinimizer argmin_g_box(const ProblemInstance& instance) {
  const auto n = instance.size();
  ConstraintMinimizer out{std::vector<double>(n), 0.0};
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = instance.g()[i];
    // g alone is minimized by treating it as the objective with λ = 0.
    const auto r = minimize_scalar(g, g, 0.0, instance.lower()[i], instance.upper()[i]);
    out.x[i] = r.x_star;
    const double d = g.derivative(r.x_star);
    sq += d * d;
  }
  out.grad_norm = std::sqrt(sq);
  return out;
}

void minimize_lagrangian(const ProblemInstance& instance, double lambda, std::vector<double>& x) {
  const auto n = instance.size();
  x.resize(n);
  const auto& phi = instance.phi();
  const auto& g = instance.g();
  const auto& l = instance.lower();
  const auto& u = instance.upper();
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = minimize_scalar(phi[i], g[i], lambda, l[i], u[i]).x_star;
  }
}

}  // namespace conrap
