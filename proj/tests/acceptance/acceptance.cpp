// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "conrap/bench.hpp"
#include "conrap/dual_solver.hpp"
#include "conrap/generators.hpp"
#include "conrap/kkt.hpp"
#include "conrap/oracles.hpp"
#include "conrap/projected_gradient.hpp"

using namespace conrap;

namespace {

// Tolerances and limits, fixed here rather than read from the solver defaults.
constexpr double kOracleRelTol = 1e-6;
constexpr double kGridStep = 1e-3;
constexpr double kGridAbsTol = 1e-4;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr double kKktTol = 1e-6;
constexpr double kGamma = 0.2;
constexpr double kEps = 1e-10;
constexpr double kShrinkSlack = 1e-15;
constexpr double kClipTol = 1e-6;
constexpr std::size_t kLargeN = 2'000'000;
constexpr double kLargeBudget = 60.0;
constexpr double kNegEntropyBudget = 300.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Solves kept for the trace-based criteria 3 to 5.
struct TracedRun {
  std::string label;
  ConstraintKind kind;
  double rhs;
  SolveReport report;
};

std::vector<TracedRun> g_runs;

SolverConfig traced_config() {
  SolverConfig cfg;
  cfg.gamma = kGamma;
  cfg.eps = kEps;
  cfg.kkt_tol = kKktTol;
  cfg.record_trace = true;
  return cfg;
}

std::string label_of(Family f, std::size_t n, std::uint64_t seed) {
  return std::string(to_string(f)) + "-n" + std::to_string(n) + "-s" + std::to_string(seed);
}

Outcome criterion1() {
  Outcome out;
  const auto t0 = Clock::now();
  double worst_rel = 0, worst_grid = 0;
  int solved = 0, grid_checked = 0;
  for (Family f : all_families()) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const std::size_t n = 2 + seed % 9;
      const auto inst = generate({f, n, 1000 + seed, 0.5});
      const auto r = solve(inst, traced_config());
      g_runs.push_back({label_of(f, n, 1000 + seed), inst.constraint_kind(), inst.rhs(), r});
      if (r.status != SolveStatus::Optimal && r.status != SolveStatus::BoundaryDegenerate) {
        out.pass = false;
        out.detail += " " + label_of(f, n, 1000 + seed) + ":" + std::string(to_string(r.status));
        continue;
      }
      ++solved;
      const double phi_o = eval_phi(inst, oracle_dual_search(inst, 1e-12).x);
      const double rel = std::abs(r.objective - phi_o) / (1 + std::abs(phi_o));
      worst_rel = std::max(worst_rel, rel);
      if (rel > kOracleRelTol) out.pass = false;
      if (n <= 3) {
        const auto grid = oracle_grid(inst, kGridStep);
        if (!grid) {
          out.pass = false;
          out.detail += " grid-infeasible:" + label_of(f, n, 1000 + seed);
          continue;
        }
        ++grid_checked;
        const double gap = std::abs(r.objective - eval_phi(inst, *grid));
        worst_grid = std::max(worst_grid, gap);
        if (gap > kGridAbsTol) out.pass = false;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= kOracleBudgetSeconds) out.pass = false;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%d/300 solved, worst rel gap %.2e (tol %.0e), %d grid checks worst abs gap %.2e (tol %.0e), %.2f s",
                solved, worst_rel, kOracleRelTol, grid_checked, worst_grid, kGridAbsTol, elapsed);
  out.detail = buf + out.detail;
  return out;
}

Outcome criterion2() {
  Outcome out;
  int optimal = 0, failed = 0, other = 0;
  double worst = 0;
  for (Family f : all_families()) {
    for (std::size_t n : {std::size_t{100}, std::size_t{1000}, std::size_t{10000}}) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (double fraction : {0.1, 0.5, 0.9}) {
          const auto inst = generate({f, n, seed, fraction});
          const auto r = solve(inst, traced_config());
          g_runs.push_back({label_of(f, n, seed), inst.constraint_kind(), inst.rhs(), r});
          if (r.status != SolveStatus::Optimal) {
            ++other;
            continue;
          }
          ++optimal;
          // Fresh certificate, independent of the one stored in the report.
          const auto kkt = kkt_check(inst, r.x, r.lambda, kKktTol);
          worst = std::max(worst, kkt.max_residual() / (1 + kkt.scale));
          if (!kkt.pass) {
            ++failed;
            out.pass = false;
            if (failed <= 5) out.detail += " " + label_of(f, n, seed);
          }
        }
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d Optimal solves, %d failed KKT at tol %.0e (worst scaled residual %.2e), %d not Optimal",
                optimal, failed, kKktTol, worst, other);
  out.detail = buf + out.detail;
  return out;
}

Outcome criterion3() {
  Outcome out;
  const int bound = static_cast<int>(std::ceil(std::log((2 / std::numbers::pi) * kEps) / std::log(1 - kGamma)));
  int worst = 0;
  for (const auto& run : g_runs) {
    worst = std::max(worst, run.report.iterations);
    if (run.report.iterations > bound) {
      out.pass = false;
      out.detail += " " + run.label;
    }
  }
  if (bound != 106) out.pass = false;
  out.detail = "bound " + std::to_string(bound) + ", worst " + std::to_string(worst) + " over " +
               std::to_string(g_runs.size()) + " runs" + out.detail;
  return out;
}

Outcome criterion4() {
  Outcome out;
  std::size_t records = 0;
  double worst_ratio = 0;
  for (const auto& run : g_runs) {
    const auto& r = run.report;
    for (const auto& t : r.trace) {
      // On an exact hit the loop stops before shrinking, so the last record
      // carries the interval that was in force during iteration k.
      const bool unshrunk = r.branch == SolveBranch::ExactHit && t.iteration == r.iterations;
      const int k = unshrunk ? t.iteration - 1 : t.iteration;
      const double allowed = std::numbers::pi / 2 * std::pow(1 - kGamma, k);
      const double width = t.theta_hi - t.theta_lo;
      worst_ratio = std::max(worst_ratio, width / allowed);
      ++records;
      if (width > allowed + kShrinkSlack) {
        out.pass = false;
        out.detail += " " + run.label + "@" + std::to_string(t.iteration);
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu iteration records, max width/bound %.4f", records, worst_ratio);
  out.detail = buf + out.detail;
  return out;
}

Outcome criterion5() {
  Outcome out;
  std::size_t ineq = 0, eq = 0;
  for (const auto& run : g_runs) {
    for (const auto& t : run.report.trace) {
      (run.kind == ConstraintKind::Inequality ? ineq : eq) += 1;
      if (!(t.g_plus > run.rhs && t.g_minus < run.rhs)) {
        out.pass = false;
        out.detail += " " + run.label + "@" + std::to_string(t.iteration);
      }
    }
  }
  if (ineq == 0 || eq == 0) out.pass = false;
  out.detail = std::to_string(ineq) + " inequality and " + std::to_string(eq) + " equality records checked" + out.detail;
  return out;
}

Outcome criterion6() {
  Outcome out;
  const struct {
    Family family;
    double budget;
  } cases[] = {{Family::Portfolio, kLargeBudget}, {Family::Commodity, kLargeBudget},
               {Family::NegEntropy, kNegEntropyBudget}};
  for (const auto& c : cases) {
    const auto inst = generate({c.family, kLargeN, 1, 0.5});
    SolverConfig cfg;
    cfg.kkt_tol = kKktTol;
    const auto t0 = Clock::now();
    const auto r = solve(inst, cfg);
    const double elapsed = seconds_since(t0);
    const bool ok = r.status == SolveStatus::Optimal && elapsed < c.budget;
    if (!ok) out.pass = false;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s%s %s %.3f s (limit %.0f, %d iterations, KKT %s)", out.detail.empty() ? "" : "; ",
                  std::string(to_string(c.family)).c_str(), std::string(to_string(r.status)).c_str(), elapsed,
                  c.budget, r.iterations, r.kkt.pass ? "pass" : "fail");
    out.detail += buf;
  }
  return out;
}

Outcome criterion7() {
  Outcome out;
  auto expect = [&](const char* name, const ProblemInstance& inst, SolveStatus status, SolveBranch branch,
                    const std::vector<double>& x_expected) {
    const auto r = solve(inst, traced_config());
    bool ok = r.status == status && r.branch == branch;
    if (ok && status == SolveStatus::Optimal) ok = kkt_check(inst, r.x, r.lambda, kKktTol).pass;
    for (std::size_t i = 0; ok && i < x_expected.size(); ++i) ok = std::abs(r.x[i] - x_expected[i]) <= 1e-8;
    if (ok && status == SolveStatus::Infeasible) ok = r.x.empty();
    if (!ok) out.pass = false;
    out.detail += std::string(out.detail.empty() ? "" : ", ") + name + (ok ? " ok" : " WRONG") + " (" +
                  std::string(to_string(r.branch)) + ")";
  };
  const auto quad = ScalarTerm::quad_lin(1, 0);
  const auto one = ScalarTerm::lin_constraint(1);
  // min ½x² s.t. x ≤ 1 on [−5, 5]: unconstrained minimizer is feasible.
  expect("shortcut", ProblemInstance({quad}, {one}, {-5}, {5}, 1, ConstraintKind::Inequality), SolveStatus::Optimal,
         SolveBranch::FeasibleShortcut, {0.0});
  // x ≥ 2 forced by the box, x ≤ 1 required.
  expect("infeasible-ineq", ProblemInstance({quad}, {one}, {2}, {5}, 1, ConstraintKind::Inequality),
         SolveStatus::Infeasible, SolveBranch::Infeasible, {});
  // x₁ + x₂ = 7 on [0, 3]².
  expect("infeasible-eq", ProblemInstance({quad, quad}, {one, one}, {0, 0}, {3, 3}, 7, ConstraintKind::LinearEquality),
         SolveStatus::Infeasible, SolveBranch::Infeasible, {});
  // min ½(x₁² + x₂²) s.t. x₁ + x₂ ≤ −2: optimum (−1, −1), λ = 1.
  expect("exact-hit", ProblemInstance({quad, quad}, {one, one}, {-5, -5}, {5, 5}, -2, ConstraintKind::Inequality),
         SolveStatus::Optimal, SolveBranch::ExactHit, {-1.0, -1.0});
  // Linear objective: the Lagrangian minimizer jumps over b, optimum (1, ¼).
  const auto neg = ScalarTerm::lin_constraint(-1);
  expect("alpha-step",
         ProblemInstance({neg, neg}, {one, ScalarTerm::lin_constraint(2)}, {0, 0}, {1, 1}, 1.5,
                         ConstraintKind::Inequality),
         SolveStatus::Optimal, SolveBranch::AlphaStep, {1.0, 0.25});
  // b equals min g with zero slope there: g₁ = x² − 2x, g₂ ≡ 0.
  expect("degenerate",
         ProblemInstance({ScalarTerm::quad_lin(1, 4), ScalarTerm::quad_lin(1, -2)},
                         {ScalarTerm::quad_constraint(2, 2), ScalarTerm::quad_constraint(0, 0)}, {0, -1}, {3, 1}, -1,
                         ConstraintKind::Inequality),
         SolveStatus::BoundaryDegenerate, SolveBranch::Degenerate, {1.0, -1.0});
  return out;
}

// Minimizer of a convex scalar term on [lo, hi] by bisection on its derivative.
double scalar_argmin(const ScalarTerm& t, double lo, double hi) {
  if (t.derivative(lo) >= 0) return lo;
  if (t.derivative(hi) <= 0) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (t.derivative(mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome criterion8() {
  Outcome out;
  // Quadratic constraint terms with interior minimizers (Ω_g fixes them),
  // plus terms with g ≡ 0 whose Ω_g component is the whole box.
  const std::vector<ScalarTerm> phi{ScalarTerm::quad_lin(1, 4),   ScalarTerm::quad_lin(2, 1),
                                    ScalarTerm::quad_lin(1, -2),  ScalarTerm::quad_lin(3, 1),
                                    ScalarTerm::exp_search(2, 1), ScalarTerm::holding(4, 1),
                                    ScalarTerm::recip(1)};
  const std::vector<ScalarTerm> g{ScalarTerm::quad_constraint(2, 2), ScalarTerm::quad_constraint(1, 3),
                                  ScalarTerm::quad_constraint(0, 0), ScalarTerm::quad_constraint(0, 0),
                                  ScalarTerm::quad_constraint(0, 0), ScalarTerm::quad_constraint(0, 0),
                                  ScalarTerm::quad_constraint(0, 0)};
  const std::vector<double> l{0, 0, -1, -2, 0, 0.1, 0.5};
  const std::vector<double> u{3, 5, 1, 2, 4, 3, 2};
  // x_g = (1, 3, ·): g(x_g) = −1 − 4.5.
  const ProblemInstance inst(phi, g, l, u, -5.5, ConstraintKind::Inequality);

  std::vector<double> clip{1.0, 3.0};
  for (std::size_t i = 2; i < phi.size(); ++i) clip.push_back(scalar_argmin(phi[i], l[i], u[i]));

  const auto r = solve(inst);
  double worst = 0;
  for (std::size_t i = 0; i < clip.size() && i < r.x.size(); ++i) worst = std::max(worst, std::abs(r.x[i] - clip[i]));
  out.pass = r.branch == SolveBranch::Degenerate && r.x.size() == clip.size() && worst <= kClipTol;
  char buf[160];
  std::snprintf(buf, sizeof buf, "branch %s, status %s, max |x − clip| = %.2e (tol %.0e)",
                std::string(to_string(r.branch)).c_str(), std::string(to_string(r.status)).c_str(), worst, kClipTol);
  out.detail = buf;
  return out;
}

Outcome criterion9() {
  Outcome out;
  auto rec = [](const char* id, const char* method, double t) {
    return BenchRecord{id, method, t, 1, "Optimal", 0.0};
  };
  const std::vector records{rec("p1", "m1", 1), rec("p1", "m2", 2), rec("p2", "m1", 3), rec("p2", "m2", 3)};
  const auto p = performance_profile(records);
  out.pass = p.methods == std::vector<std::string>{"m1", "m2"} && p.points.size() == 2 && p.points[0].tau == 1.0 &&
             p.points[0].rho == std::vector{1.0, 0.5} && p.points[1].tau == 2.0 &&
             p.points[1].rho == std::vector{1.0, 1.0};
  std::ostringstream s;
  for (const auto& pt : p.points) {
    s << " tau=" << pt.tau << " rho=(";
    for (std::size_t i = 0; i < pt.rho.size(); ++i) s << (i ? "," : "") << pt.rho[i];
    s << ")";
  }
  out.detail = "step function" + s.str();
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
  int failures = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
