#pragma once

#include <span>

#include "conrap/problem.hpp"

namespace conrap {

/// Residuals of the KKT system for min φ s.t. g ≤ b (or g = b), l ≤ x ≤ u:
///
///   φᵢ′ + λgᵢ′ − vᵢ + wᵢ = 0        stationarity
///   g(x) ≤ b  (= b)                  primal
///   λ(g(x) − b) = 0                  complementarity, with vᵢ(lᵢ−xᵢ) = wᵢ(xᵢ−uᵢ) = 0
///   l ≤ x ≤ u                        box
///   v, w ≥ 0,  λ ≥ 0 (inequality)    signs
///
/// The box multipliers v, w are recovered from x and λ, so every field is a
/// nonnegative violation.
struct KktResiduals {
  double stationarity = 0.0;
  double primal = 0.0;
  double comp_slack = 0.0;
  double box = 0.0;
  double mult_sign = 0.0;
  double v_max = 0.0;  ///< largest recovered lower-bound multiplier
  double w_max = 0.0;  ///< largest recovered upper-bound multiplier
  double scale = 1.0;  ///< max(1, |b|, ‖∇φ(x)‖∞)
  bool pass = false;

  /// Largest residual field (stationarity, primal, comp_slack, box, mult_sign).
  double max_residual() const noexcept;
};

/// |x − bound| ≤ 1e−9·(1 + |bound|) counts as sitting on the bound.
bool at_bound(double x, double bound) noexcept;

/// Evaluates the residuals; `pass` iff every residual ≤ tol·(1 + scale).
KktResiduals kkt_check(const ProblemInstance& instance, std::span<const double> x, double lambda,
                       double tol);

/// Multiplier for a solution that is forced to a corner of the feasible set
/// (every coordinate that depends on λ sits on a bound): the λ closest to
/// zero, within the admissible sign range, that makes all recovered box
/// multipliers nonnegative.
double recover_boundary_multiplier(const ProblemInstance& instance, std::span<const double> x);

}  // namespace conrap
