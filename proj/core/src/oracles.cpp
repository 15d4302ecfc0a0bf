#include "conrap/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "conrap/scalar_minimizer.hpp"

namespace conrap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DualPoint {
  double lambda;
  std::vector<double> x;
  double g;
  double value;  // L(λ)
};

DualPoint dual_at(const ProblemInstance& instance, double lambda) {
  DualPoint p{lambda, {}, 0.0, 0.0};
  minimize_lagrangian(instance, lambda, p.x);
  p.g = eval_g(instance, p.x);
  p.value = eval_phi(instance, p.x) + lambda * (p.g - instance.rhs());
  return p;
}

// Mix a point with g ≥ b and a point with g ≤ b so that g = b.
std::vector<double> mix_to_rhs(const ProblemInstance& instance, const DualPoint& over,
                               const DualPoint& under) {
  const double b = instance.rhs();
  if (over.g == b) return over.x;
  if (under.g == b || over.g <= under.g) return under.x;
  const auto n = instance.size();
  std::vector<double> x(n);
  auto combine = [&](double a) {
    for (std::size_t i = 0; i < n; ++i) x[i] = a * over.x[i] + (1.0 - a) * under.x[i];
  };
  double alpha = (b - under.g) / (over.g - under.g);
  if (!instance.has_linear_constraint()) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      alpha = 0.5 * (lo + hi);
      if (alpha <= lo || alpha >= hi) break;
      combine(alpha);
      (eval_g(instance, x) > b ? hi : lo) = alpha;
    }
  }
  combine(std::clamp(alpha, 0.0, 1.0));
  return x;
}

}  // namespace

OracleSolution oracle_dual_search(const ProblemInstance& original, double tol) {
  const ProblemInstance instance = normalize_signs(original);
  const double sign = instance.g().front().param(0) == original.g().front().param(0) ? 1.0 : -1.0;
  const bool equality = instance.constraint_kind() == ConstraintKind::LinearEquality;
  const double b = instance.rhs();

  if (equality) {
    if (eval_g(instance, instance.lower()) > b || eval_g(instance, instance.upper()) < b) {
      throw std::invalid_argument("oracle_dual_search: infeasible instance");
    }
  } else if (eval_g(instance, argmin_g_box(instance).x) > b) {
    throw std::invalid_argument("oracle_dual_search: infeasible instance");
  }

  const DualPoint at_zero = dual_at(instance, 0.0);
  if ((!equality && at_zero.g <= b) || at_zero.g == b) return {at_zero.x, 0.0};

  // g(x(λ)) is nonincreasing in λ. Bracket λ* on the side indicated at λ = 0.
  const bool positive = at_zero.g > b;
  double far = positive ? 1.0 : -1.0;
  for (int it = 0;; ++it) {
    const auto p = dual_at(instance, far);
    if (positive ? p.g <= b : p.g >= b) break;
    if (it > 2000 || !std::isfinite(far)) {
      throw std::runtime_error("oracle_dual_search: could not bracket the multiplier");
    }
    far *= 2.0;
  }
  double lo = positive ? 0.0 : far;
  double hi = positive ? far : 0.0;

  // Golden-section maximization of the concave L(λ).
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = dual_at(instance, c).value;
  double fd = dual_at(instance, d).value;
  while (hi - lo > tol * std::max(1.0, std::max(std::abs(lo), std::abs(hi)))) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = dual_at(instance, c).value;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = dual_at(instance, d).value;
    }
  }
  const double lambda = 0.5 * (lo + hi);

  // Function values resolve λ* only to about √ε near the flat top of L, so
  // widen around the estimate until the two sides straddle b, then shrink the
  // straddling pair on the sign of the supergradient g(x(λ)) − b.
  double delta = tol * std::max(1.0, std::abs(lambda));
  for (int it = 0; it < 2000; ++it, delta *= 2.0) {
    double left = lambda - delta;
    if (!equality) left = std::max(left, 0.0);
    DualPoint over = dual_at(instance, left);
    DualPoint under = dual_at(instance, lambda + delta);
    if (!(over.g >= b && under.g <= b)) continue;
    for (int k = 0; k < 200; ++k) {
      const double width = under.lambda - over.lambda;
      if (width <= tol * std::max(1.0, std::abs(over.lambda)) || over.g == b || under.g == b) break;
      const double mid = over.lambda + 0.5 * width;
      if (mid <= over.lambda || mid >= under.lambda) break;
      auto p = dual_at(instance, mid);
      (p.g >= b ? over : under) = std::move(p);
    }
    const double lambda_star = over.g == b    ? over.lambda
                               : under.g == b ? under.lambda
                                              : 0.5 * (over.lambda + under.lambda);
    return {mix_to_rhs(instance, over, under), sign * lambda_star};
  }
  throw std::runtime_error("oracle_dual_search: no straddling pair around the dual maximizer");
}

// ---------------------------------------------------------------------------
// Grid oracle

namespace {

struct AxisGrid {
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<double> g;
};

AxisGrid make_axis(const ProblemInstance& instance, std::size_t i, double step) {
  const double l = instance.lower()[i];
  const double u = instance.upper()[i];
  AxisGrid axis;
  const double width = u - l;
  if (step > width) {
    axis.x.push_back(l);
  } else {
    const auto count = static_cast<std::size_t>(std::floor(width / step)) + 1;
    if (count > 100'000'000) throw std::invalid_argument("oracle_grid: grid too fine");
    axis.x.reserve(count + 1);
    for (std::size_t k = 0; k < count; ++k) axis.x.push_back(std::min(u, l + step * double(k)));
    if (axis.x.back() < u) axis.x.push_back(u);
  }
  for (double v : axis.x) {
    axis.phi.push_back(instance.phi()[i].value(v));
    axis.g.push_back(instance.g()[i].value(v));
  }
  return axis;
}

// {x ∈ [l, u] : term(x) ≤ c} for a convex term; empty → nullopt.
std::optional<std::pair<double, double>> sublevel_interval(const ScalarTerm& term, double l,
                                                           double u, double c) {
  const double m = minimize_scalar(term, term, 0.0, l, u).x_star;
  if (term.value(m) > c) return std::nullopt;
  auto boundary = [&](double inside, double outside) {
    if (term.value(outside) <= c) return outside;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      (term.value(mid) <= c ? inside : outside) = mid;
    }
    return inside;
  };
  return std::pair{boundary(m, l), boundary(m, u)};
}

class GridSearch {
 public:
  GridSearch(const ProblemInstance& instance, double step) : inst_(instance) {
    for (std::size_t i = 0; i < instance.size(); ++i) axes_.push_back(make_axis(instance, i, step));
    equality_ = instance.constraint_kind() == ConstraintKind::LinearEquality;
    for (std::size_t i = 0; i < instance.size(); ++i) {
      const auto& g = instance.g()[i];
      g_min_.push_back(g.value(minimize_scalar(g, g, 0.0, instance.lower()[i],
                                               instance.upper()[i]).x_star));
    }
  }

  std::optional<std::vector<double>> run() {
    const auto n = inst_.size();
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> others;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != j) others.push_back(i);
      }
      search(j, others);
    }
    if (!best_) return std::nullopt;
    return best_;
  }

 private:
  // Best feasible closing value of coordinate j for Σ_{i≠j} gᵢ = b − rhs.
  std::optional<double> close(std::size_t j, double rhs) const {
    const double l = inst_.lower()[j];
    const double u = inst_.upper()[j];
    const auto& g = inst_.g()[j];
    if (equality_) {
      const double x = rhs / g.param(0);
      const double slack = 1e-12 * (1.0 + std::abs(l) + std::abs(u));
      if (x < l - slack || x > u + slack) return std::nullopt;
      return std::clamp(x, l, u);
    }
    const auto range = sublevel_interval(g, l, u, rhs + rounding_slack());
    if (!range) return std::nullopt;
    const double target = minimize_scalar(inst_.phi()[j], inst_.phi()[j], 0.0, l, u).x_star;
    return std::clamp(target, range->first, range->second);
  }

  void consider(std::size_t j, std::span<const std::size_t> idx_coords,
                std::span<const std::size_t> idx, double partial_phi, double partial_g) {
    const auto xj = close(j, inst_.rhs() - partial_g);
    if (!xj) return;
    const double value = partial_phi + inst_.phi()[j].value(*xj);
    if (value < best_value_) {
      best_value_ = value;
      std::vector<double> x(inst_.size());
      for (std::size_t k = 0; k < idx_coords.size(); ++k) {
        x[idx_coords[k]] = axes_[idx_coords[k]].x[idx[k]];
      }
      x[j] = *xj;
      best_ = std::move(x);
    }
  }

  // Reduced objective of coordinate k's grid index given the fixed prefix;
  // +inf when the closing coordinate has no feasible value.
  double reduced(std::size_t j, std::size_t k, std::size_t idx, double partial_phi,
                 double partial_g) const {
    const auto& ax = axes_[k];
    const auto xj = close(j, inst_.rhs() - partial_g - ax.g[idx]);
    if (!xj) return kInf;
    return partial_phi + ax.phi[idx] + inst_.phi()[j].value(*xj);
  }

  void search(std::size_t j, const std::vector<std::size_t>& others) {
    if (others.empty()) {
      consider(j, {}, {}, 0.0, 0.0);
      return;
    }
    const std::size_t a = others[0];
    const auto& ax = axes_[a];
    if (others.size() == 1) {
      for (std::size_t p = 0; p < ax.x.size(); ++p) {
        const std::size_t idx[] = {p};
        consider(j, std::span(others.data(), 1), idx, ax.phi[p], ax.g[p]);
      }
      return;
    }
    const std::size_t k = others[1];
    const auto& inner = axes_[k];
    for (std::size_t p = 0; p < ax.x.size(); ++p) {
      const auto range = inner_range(j, k, ax.g[p]);
      if (!range) continue;
      auto [lo, hi] = *range;
      while (hi - lo > 2) {
        const std::size_t m1 = lo + (hi - lo) / 3;
        const std::size_t m2 = hi - (hi - lo) / 3;
        const double f1 = reduced(j, k, m1, ax.phi[p], ax.g[p]);
        const double f2 = reduced(j, k, m2, ax.phi[p], ax.g[p]);
        if (f1 < f2) {
          hi = m2 - 1;
        } else if (f1 > f2) {
          lo = m1 + 1;
        } else {
          lo = m1;
          hi = m2;
        }
      }
      for (std::size_t q = lo; q <= hi; ++q) {
        const std::size_t idx[] = {p, q};
        consider(j, others, idx, ax.phi[p] + inner.phi[q], ax.g[p] + inner.g[q]);
      }
    }
  }

  // Grid indices of coordinate k for which the closing coordinate j can still
  // be feasible, given the constraint mass `used` of the outer coordinate.
  std::optional<std::pair<std::size_t, std::size_t>> inner_range(std::size_t j, std::size_t k,
                                                                 double used) const {
    const auto& xs = axes_[k].x;
    const double lk = inst_.lower()[k];
    const double uk = inst_.upper()[k];
    double lo_x, hi_x;
    if (equality_) {
      const double aj = inst_.g()[j].param(0);
      const double ak = inst_.g()[k].param(0);
      const double rest = inst_.rhs() - used;
      const double e1 = (rest - aj * inst_.upper()[j]) / ak;
      const double e2 = (rest - aj * inst_.lower()[j]) / ak;
      const double slack = 1e-12 * (1.0 + std::abs(lk) + std::abs(uk));
      lo_x = std::max(lk, std::min(e1, e2) - slack);
      hi_x = std::min(uk, std::max(e1, e2) + slack);
      if (lo_x > hi_x) return std::nullopt;
    } else {
      const auto r = sublevel_interval(inst_.g()[k], lk, uk, inst_.rhs() - used - g_min_[j] + rounding_slack());
      if (!r) return std::nullopt;
      lo_x = r->first;
      hi_x = r->second;
    }
    const auto first = std::lower_bound(xs.begin(), xs.end(), lo_x);
    const auto last = std::upper_bound(xs.begin(), xs.end(), hi_x);
    if (first >= last) return std::nullopt;
    return std::pair{static_cast<std::size_t>(first - xs.begin()),
                     static_cast<std::size_t>(last - xs.begin()) - 1};
  }

  // b − Σ gᵢ loses a few ulps; without slack a feasible set that is a single
  // grid point (b = g(l)) is missed.
  double rounding_slack() const { return 1e-12 * (1.0 + std::abs(inst_.rhs())); }

  const ProblemInstance& inst_;
  std::vector<AxisGrid> axes_;
  std::vector<double> g_min_;
  bool equality_ = false;
  double best_value_ = kInf;
  std::optional<std::vector<double>> best_;
};

}  // namespace

std::optional<std::vector<double>> oracle_grid(const ProblemInstance& original, double step) {
  if (original.size() > 3) throw std::invalid_argument("oracle_grid: requires n <= 3");
  if (!(step > 0)) throw std::invalid_argument("oracle_grid: step must be positive");
  const ProblemInstance instance = normalize_signs(original);
  return GridSearch(instance, step).run();
}

}  // namespace conrap
