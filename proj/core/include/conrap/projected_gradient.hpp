#pragma once

#include <span>
#include <vector>

#include "conrap/problem.hpp"

namespace conrap {

struct PGConfig {
  double beta_lo = 1.0;   ///< smallest gradient step β
  double beta_hi = 1.0;   ///< largest gradient step β
  double sigma = 1e-4;    ///< Armijo sufficient-decrease constant in (0, 1)
  double eps_pg = 1e-10;  ///< stop when ‖x^{k+1} − x^k‖ ≤ eps_pg
  int max_iter = 100000;

  void validate() const;
};

/// Box of per-coordinate minimizer intervals [pᵢ, qᵢ] of gᵢ on [lᵢ, uᵢ]; by
/// separability this product is the whole set of box minimizers of g.
struct OmegaG {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const noexcept { return lower.size(); }
};

OmegaG omega_g_intervals(const ProblemInstance& instance);

/// Coordinatewise clip onto Ω_g (the Euclidean projection onto a box).
std::vector<double> project_onto_omega_g(std::span<const double> x, const OmegaG& omega);

struct PGResult {
  std::vector<double> x;
  int iterations = 0;
  bool converged = false;
  /// ‖P(x − β∇φ(x)) − x‖₂ at the returned point.
  double fixed_point_residual = 0.0;
};

/// Minimizes φ over Ω_g from x0 ∈ Ω_g by projected gradient steps with an
/// Armijo rule on the feasible direction d = P(x − β∇φ(x)) − x.
PGResult projected_gradient(const ProblemInstance& instance, const OmegaG& omega,
                            std::span<const double> x0, const PGConfig& config = {});

}  // namespace conrap
