#include "conrap/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace conrap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::string_view kQuadLinNames[] = {"d", "c"};
constexpr std::string_view kHoldingNames[] = {"c", "k"};
constexpr std::string_view kRecipNames[] = {"c"};
constexpr std::string_view kExpSearchNames[] = {"m", "c"};
constexpr std::string_view kNegEntropyNames[] = {"a"};
constexpr std::string_view kQuadConstraintNames[] = {"a", "z"};
constexpr std::string_view kLinConstraintNames[] = {"a"};

std::string at_coordinate(std::size_t index) {
  return index == InvalidInstance::npos ? std::string{}
                                        : " at coordinate " + std::to_string(index);
}

void require(bool ok, const std::string& what, std::size_t index) {
  if (!ok) throw InvalidInstance(what + at_coordinate(index), index);
}

}  // namespace

InvalidInstance::InvalidInstance(const std::string& what, std::size_t index)
    : std::invalid_argument(what), index_(index) {}

DomainError::DomainError(const std::string& what, std::size_t index)
    : std::domain_error(what), index_(index) {}

std::string_view to_string(TermKind kind) {
  switch (kind) {
    case TermKind::QuadLin: return "QuadLin";
    case TermKind::Holding: return "Holding";
    case TermKind::Recip: return "Recip";
    case TermKind::ExpSearch: return "ExpSearch";
    case TermKind::NegEntropy: return "NegEntropy";
    case TermKind::QuadConstraint: return "QuadConstraint";
    case TermKind::LinConstraint: return "LinConstraint";
  }
  return "?";
}

std::string_view to_string(ConstraintKind kind) {
  return kind == ConstraintKind::Inequality ? "inequality" : "equality";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::BoundaryDegenerate: return "BoundaryDegenerate";
    case SolveStatus::MaxIterFallback: return "MaxIterFallback";
  }
  return "?";
}

TermKind term_kind_from_string(std::string_view name) {
  for (auto kind : {TermKind::QuadLin, TermKind::Holding, TermKind::Recip, TermKind::ExpSearch,
                    TermKind::NegEntropy, TermKind::QuadConstraint, TermKind::LinConstraint}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidInstance("unknown term kind '" + std::string(name) + "'");
}

SolveStatus solve_status_from_string(std::string_view name) {
  for (auto s : {SolveStatus::Optimal, SolveStatus::Infeasible, SolveStatus::BoundaryDegenerate,
                 SolveStatus::MaxIterFallback}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown solve status '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// ScalarTerm

ScalarTerm::ScalarTerm(TermKind kind, double p0, double p1) : kind_(kind), params_{p0, p1} {
  const auto finite = std::isfinite(p0) && std::isfinite(p1);
  require(finite, std::string(to_string(kind)) + " parameters must be finite", InvalidInstance::npos);
  switch (kind) {
    case TermKind::QuadLin:
      require(p0 > 0, "QuadLin requires d > 0", InvalidInstance::npos);
      break;
    case TermKind::Holding:
      require(p0 > 0 && p1 > 0, "Holding requires c > 0 and k > 0", InvalidInstance::npos);
      break;
    case TermKind::Recip:
      require(p0 > 0, "Recip requires c > 0", InvalidInstance::npos);
      break;
    case TermKind::ExpSearch:
      require(p0 > 0 && p1 > 0, "ExpSearch requires m > 0 and c > 0", InvalidInstance::npos);
      break;
    case TermKind::NegEntropy:
      require(p0 > 0, "NegEntropy requires a > 0", InvalidInstance::npos);
      break;
    case TermKind::QuadConstraint:
      require(p0 >= 0, "QuadConstraint requires a >= 0", InvalidInstance::npos);
      break;
    case TermKind::LinConstraint:
      require(p0 != 0, "LinConstraint requires a != 0", InvalidInstance::npos);
      break;
  }
}

ScalarTerm ScalarTerm::quad_lin(double d, double c) { return {TermKind::QuadLin, d, c}; }
ScalarTerm ScalarTerm::holding(double c, double k) { return {TermKind::Holding, c, k}; }
ScalarTerm ScalarTerm::recip(double c) { return {TermKind::Recip, c, 0.0}; }
ScalarTerm ScalarTerm::exp_search(double m, double c) { return {TermKind::ExpSearch, m, c}; }
ScalarTerm ScalarTerm::neg_entropy(double a) { return {TermKind::NegEntropy, a, 0.0}; }
ScalarTerm ScalarTerm::quad_constraint(double a, double z) {
  return {TermKind::QuadConstraint, a, z};
}
ScalarTerm ScalarTerm::lin_constraint(double a) { return {TermKind::LinConstraint, a, 0.0}; }

std::span<const std::string_view> ScalarTerm::param_names() const noexcept {
  switch (kind_) {
    case TermKind::QuadLin: return kQuadLinNames;
    case TermKind::Holding: return kHoldingNames;
    case TermKind::Recip: return kRecipNames;
    case TermKind::ExpSearch: return kExpSearchNames;
    case TermKind::NegEntropy: return kNegEntropyNames;
    case TermKind::QuadConstraint: return kQuadConstraintNames;
    case TermKind::LinConstraint: return kLinConstraintNames;
  }
  return {};
}

std::size_t ScalarTerm::param_count() const noexcept { return param_names().size(); }

double ScalarTerm::domain_lower() const noexcept {
  switch (kind_) {
    case TermKind::Holding:
    case TermKind::Recip: return 0.0;
    case TermKind::NegEntropy: return params_[0];
    default: return -kInf;
  }
}

double ScalarTerm::value(double x) const noexcept {
  const auto [p, q] = params_;
  switch (kind_) {
    case TermKind::QuadLin: return 0.5 * p * x * x - q * x;
    case TermKind::Holding: return p * x + q / x;
    case TermKind::Recip: return p / x;
    case TermKind::ExpSearch: return p * std::expm1(-q * x);
    case TermKind::NegEntropy: return x * std::log(x / p - 1.0);
    case TermKind::QuadConstraint: return 0.5 * p * x * x - q * x;
    case TermKind::LinConstraint: return p * x;
  }
  return 0.0;
}

double ScalarTerm::derivative(double x) const noexcept {
  const auto [p, q] = params_;
  switch (kind_) {
    case TermKind::QuadLin: return p * x - q;
    case TermKind::Holding: return p - q / (x * x);
    case TermKind::Recip: return -p / (x * x);
    case TermKind::ExpSearch: return -p * q * std::exp(-q * x);
    case TermKind::NegEntropy: return std::log(x / p - 1.0) + x / (x - p);
    case TermKind::QuadConstraint: return p * x - q;
    case TermKind::LinConstraint: return p;
  }
  return 0.0;
}

double ScalarTerm::value_change(double x, double y) const noexcept {
  const auto [p, q] = params_;
  const double dx = y - x;
  switch (kind_) {
    case TermKind::QuadLin:
    case TermKind::QuadConstraint: return dx * (0.5 * p * (x + y) - q);
    case TermKind::Holding: return dx * (p - q / (x * y));
    case TermKind::Recip: return -dx * p / (x * y);
    case TermKind::ExpSearch: return p * std::exp(-q * x) * std::expm1(-q * dx);
    case TermKind::NegEntropy: return dx * std::log(y / p - 1.0) + x * std::log1p(dx / (x - p));
    case TermKind::LinConstraint: return p * dx;
  }
  return 0.0;
}

double ScalarTerm::second_derivative(double x) const noexcept {
  const auto [p, q] = params_;
  switch (kind_) {
    case TermKind::QuadLin: return p;
    case TermKind::Holding: return 2.0 * q / (x * x * x);
    case TermKind::Recip: return 2.0 * p / (x * x * x);
    case TermKind::ExpSearch: return p * q * q * std::exp(-q * x);
    case TermKind::NegEntropy: {
      const double s = x - p;
      return (x - 2.0 * p) / (s * s);
    }
    case TermKind::QuadConstraint: return p;
    case TermKind::LinConstraint: return 0.0;
  }
  return 0.0;
}

bool ScalarTerm::is_affine() const noexcept {
  return kind_ == TermKind::LinConstraint ||
         (kind_ == TermKind::QuadConstraint && params_[0] == 0.0);
}

bool ScalarTerm::is_constant() const noexcept {
  return kind_ == TermKind::QuadConstraint && params_[0] == 0.0 && params_[1] == 0.0;
}

void ScalarTerm::validate_on(double l, double u, std::size_t index) const {
  switch (kind_) {
    case TermKind::Holding:
    case TermKind::Recip:
      require(l > 0, std::string(to_string(kind_)) + " requires l > 0", index);
      break;
    case TermKind::NegEntropy:
      require(l > params_[0], "NegEntropy requires l > a", index);
      // φ″ = (x − 2a)/(x − a)² is nonnegative exactly when x ≥ 2a.
      require(l >= 2.0 * params_[0], "NegEntropy is not convex on the box: requires l >= 2a",
              index);
      break;
    default:
      break;
  }
  (void)u;
}

// ---------------------------------------------------------------------------
// ProblemInstance

ProblemInstance::ProblemInstance(std::vector<ScalarTerm> phi, std::vector<ScalarTerm> g,
                                 std::vector<double> lower, std::vector<double> upper, double b,
                                 ConstraintKind kind)
    : phi_(std::move(phi)),
      g_(std::move(g)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      b_(b),
      kind_(kind),
      linear_g_(false) {
  const auto n = phi_.size();
  require(n >= 1, "instance must have at least one variable", InvalidInstance::npos);
  require(g_.size() == n && lower_.size() == n && upper_.size() == n,
          "phi, g, l and u must all have length n", InvalidInstance::npos);
  require(std::isfinite(b_), "right-hand side b must be finite", InvalidInstance::npos);

  linear_g_ = std::all_of(g_.begin(), g_.end(),
                          [](const ScalarTerm& t) { return t.kind() == TermKind::LinConstraint; });

  for (std::size_t i = 0; i < n; ++i) {
    require(std::isfinite(lower_[i]) && std::isfinite(upper_[i]), "bounds must be finite", i);
    require(lower_[i] <= upper_[i], "lower bound exceeds upper bound", i);
    phi_[i].validate_on(lower_[i], upper_[i], i);
    g_[i].validate_on(lower_[i], upper_[i], i);
  }

  if (kind_ == ConstraintKind::LinearEquality) {
    for (std::size_t i = 0; i < n; ++i) {
      require(g_[i].kind() == TermKind::LinConstraint,
              "equality constraint terms must be LinConstraint", i);
      require((g_[i].param(0) > 0) == (g_[0].param(0) > 0),
              "equality constraint coefficients must share one sign", i);
    }
  }
}

namespace {

double checked_sum(const std::vector<ScalarTerm>& terms, std::span<const double> x,
                   const char* what) {
  if (x.size() != terms.size()) {
    throw std::invalid_argument(std::string(what) + ": vector length does not match instance");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!terms[i].in_domain(x[i]) || std::isnan(x[i])) {
      throw DomainError(std::string(what) + ": x outside the domain of " +
                            std::string(to_string(terms[i].kind())) + " at coordinate " +
                            std::to_string(i),
                        i);
    }
    sum += terms[i].value(x[i]);
  }
  return sum;
}

}  // namespace

double eval_phi(const ProblemInstance& instance, std::span<const double> x) {
  return checked_sum(instance.phi(), x, "eval_phi");
}

double eval_g(const ProblemInstance& instance, std::span<const double> x) {
  return checked_sum(instance.g(), x, "eval_g");
}

ProblemInstance normalize_signs(const ProblemInstance& instance) {
  if (instance.constraint_kind() != ConstraintKind::LinearEquality ||
      instance.g().front().param(0) > 0) {
    return instance;
  }
  std::vector<ScalarTerm> g;
  g.reserve(instance.size());
  for (const auto& t : instance.g()) g.push_back(ScalarTerm::lin_constraint(-t.param(0)));
  return ProblemInstance(instance.phi(), std::move(g), instance.lower(), instance.upper(),
                         -instance.rhs(), instance.constraint_kind());
}

}  // namespace conrap
