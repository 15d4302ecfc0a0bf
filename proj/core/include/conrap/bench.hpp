#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conrap/dual_solver.hpp"
#include "conrap/generators.hpp"

namespace conrap {

enum class Method { Algorithm1, Algorithm2, DualBisectionBaseline };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

/// The safeguarded secant solver matching the constraint kind.
Method primary_method_for(ConstraintKind kind);

/// Runs one method on an instance (the method must match the constraint kind
/// unless it is the baseline).
SolveReport solve_with(Method method, const ProblemInstance& instance,
                       const SolverConfig& config = {});

/// One timed solve. `status` holds a SolveStatus name, "Timeout" when the
/// solve was capped, or "KktFailed" for an Optimal solve that did not
/// certify.
struct BenchRecord {
  std::string problem_id;
  std::string method;
  double wall_seconds = 0.0;
  int iterations = 0;
  std::string status;
  double objective = 0.0;

  /// Counted as solved by the performance profile.
  bool solved() const;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct BenchOptions {
  std::vector<Family> families;
  std::vector<std::size_t> sizes;
  int reps = 1;
  std::uint64_t seed0 = 1;
  double timeout_s = 60.0;
  double b_fraction = 0.5;
  double kkt_tol = 1e-6;
  SolverConfig solver{};
  unsigned parallel = 1;  ///< worker threads; each solve stays on one thread
};

/// One record per (instance, method). Instances are generated with seeds
/// seed0, seed0 + 1, …; each family is solved by its primary method and by
/// the bisection baseline. Timing excludes generation and verification.
std::vector<BenchRecord> run_bench(const BenchOptions& options);

/// exp(mean(log t)); every entry must be positive.
double geometric_mean(std::span<const double> times);

struct TimingRow {
  std::string group;  ///< problem_id without the seed suffix
  std::string method;
  double geometric_mean_seconds;
  int solved;
  int total;
};

/// Geometric-mean wall time per (group, method); unsolved runs enter at
/// `cap_seconds`.
std::vector<TimingRow> timing_table(std::span<const BenchRecord> records, double cap_seconds);

struct ProfilePoint {
  double tau;
  std::vector<double> rho;  ///< one entry per method, ordered as PerformanceProfile::methods
};

struct PerformanceProfile {
  std::vector<std::string> methods;  ///< lexical order
  std::vector<ProfilePoint> points;  ///< ascending τ, one per distinct finite ratio
};

/// Dolan–Moré profile: r_{p,s} = t_{p,s} / min_s t_{p,s}, ρ_s(τ) = |{p : r_{p,s} ≤ τ}| / n_p.
/// Unsolved runs get r = ∞.
PerformanceProfile performance_profile(std::span<const BenchRecord> records);

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records);
std::vector<BenchRecord> read_bench_csv(std::istream& in);
std::string bench_to_json(std::span<const BenchRecord> records, int indent = -1);
std::vector<BenchRecord> bench_from_json(const std::string& text);

void write_profile_csv(std::ostream& out, const PerformanceProfile& profile);
std::string profile_to_json(const PerformanceProfile& profile, int indent = -1);

}  // namespace conrap
