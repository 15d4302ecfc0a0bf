#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace conrap {

/// Family of a separable scalar term. The same catalog serves objective and
/// constraint terms; the names follow the application each form comes from.
enum class TermKind {
  QuadLin,         ///< ½·d·x² − c·x            params {d > 0, c}
  Holding,         ///< c·x + k/x               params {c > 0, k > 0}, x > 0
  Recip,           ///< c/x                     params {c > 0}, x > 0
  ExpSearch,       ///< m·(exp(−c·x) − 1)       params {m > 0, c > 0}
  NegEntropy,      ///< x·log(x/a − 1)          params {a > 0}, x > a
  QuadConstraint,  ///< ½·a·x² − z·x            params {a ≥ 0, z}
  LinConstraint,   ///< a·x                     params {a ≠ 0}
};

enum class ConstraintKind { Inequality, LinearEquality };

enum class SolveStatus { Optimal, Infeasible, BoundaryDegenerate, MaxIterFallback };

std::string_view to_string(TermKind kind);
std::string_view to_string(ConstraintKind kind);
std::string_view to_string(SolveStatus status);
TermKind term_kind_from_string(std::string_view name);
SolveStatus solve_status_from_string(std::string_view name);

/// Raised when an instance or a term violates its structural invariants.
/// `index()` names the offending coordinate, or npos for whole-instance errors.
class InvalidInstance : public std::invalid_argument {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  explicit InvalidInstance(const std::string& what, std::size_t index = npos);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Raised when a term is evaluated outside its domain (e.g. x ≤ 0 for Recip).
class DomainError : public std::domain_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  explicit DomainError(const std::string& what, std::size_t index = npos);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// One coordinate's objective or constraint term. Value type; the parameter
/// layout is fixed per family (see TermKind).
class ScalarTerm {
 public:
  static ScalarTerm quad_lin(double d, double c);
  static ScalarTerm holding(double c, double k);
  static ScalarTerm recip(double c);
  static ScalarTerm exp_search(double m, double c);
  static ScalarTerm neg_entropy(double a);
  static ScalarTerm quad_constraint(double a, double z);
  static ScalarTerm lin_constraint(double a);

  TermKind kind() const noexcept { return kind_; }
  double param(std::size_t i) const { return params_.at(i); }
  const std::array<double, 2>& params() const noexcept { return params_; }

  /// Number of meaningful entries in params() for this family.
  std::size_t param_count() const noexcept;
  /// Parameter names in JSON order, e.g. {"d", "c"} for QuadLin.
  std::span<const std::string_view> param_names() const noexcept;

  /// Open lower end of the natural domain (−inf when unrestricted).
  double domain_lower() const noexcept;
  bool in_domain(double x) const noexcept { return x > domain_lower(); }

  // Unchecked evaluation; callers guarantee in_domain(x).
  double value(double x) const noexcept;
  double derivative(double x) const noexcept;
  double second_derivative(double x) const noexcept;
  /// value(y) − value(x), evaluated without the cancellation of the plain
  /// difference when y is close to x.
  double value_change(double x, double y) const noexcept;

  /// True when the term is affine in x (zero curvature everywhere).
  bool is_affine() const noexcept;

  /// True when the term is identically zero (QuadConstraint with a = z = 0).
  bool is_constant() const noexcept;

  /// Checks convexity and domain on [l, u]; throws InvalidInstance with `index`.
  void validate_on(double l, double u, std::size_t index) const;

  friend bool operator==(const ScalarTerm&, const ScalarTerm&) = default;

 private:
  ScalarTerm(TermKind kind, double p0, double p1);
  TermKind kind_;
  std::array<double, 2> params_;
};

/// Immutable separable problem
///   min Σ φᵢ(xᵢ)  s.t.  Σ gᵢ(xᵢ) ≤ b  (or Σ aᵢxᵢ = b),  l ≤ x ≤ u.
class ProblemInstance {
 public:
  ProblemInstance(std::vector<ScalarTerm> phi, std::vector<ScalarTerm> g,
                  std::vector<double> lower, std::vector<double> upper, double b,
                  ConstraintKind kind);

  std::size_t size() const noexcept { return phi_.size(); }
  const std::vector<ScalarTerm>& phi() const noexcept { return phi_; }
  const std::vector<ScalarTerm>& g() const noexcept { return g_; }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double rhs() const noexcept { return b_; }
  ConstraintKind constraint_kind() const noexcept { return kind_; }

  /// True when every constraint term is LinConstraint.
  bool has_linear_constraint() const noexcept { return linear_g_; }

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;

 private:
  std::vector<ScalarTerm> phi_;
  std::vector<ScalarTerm> g_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  double b_;
  ConstraintKind kind_;
  bool linear_g_;
};

/// Σ φᵢ(xᵢ). Throws DomainError naming the first out-of-domain coordinate.
double eval_phi(const ProblemInstance& instance, std::span<const double> x);
/// Σ gᵢ(xᵢ). Throws DomainError naming the first out-of-domain coordinate.
double eval_g(const ProblemInstance& instance, std::span<const double> x);

/// Returns the equality instance with every aᵢ > 0, negating a and b when all
/// aᵢ are negative. Inequality instances are returned unchanged.
ProblemInstance normalize_signs(const ProblemInstance& instance);

}  // namespace conrap
