#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "conrap/dual_solver.hpp"
#include "conrap/generators.hpp"
#include "conrap/kkt.hpp"
#include "conrap/oracles.hpp"
#include "support.hpp"

using namespace conrap;

namespace {

const ProblemInstance& two_var() {
  static const auto inst = conrap::test::shifted_quadratic({0, 0}, -5, 5, -2, ConstraintKind::Inequality);
  return inst;
}

}  // namespace

TEST_CASE("hand-checked KKT point") {
  const auto r = kkt_check(two_var(), std::vector{-1.0, -1.0}, 1.0, 1e-9);
  CHECK(r.pass);
  CHECK(r.max_residual() <= 1e-12);
  CHECK(r.v_max == 0.0);
  CHECK(r.w_max == 0.0);
  CHECK(r.scale == 2.0);
}

TEST_CASE("feasible but suboptimal point fails stationarity") {
  const auto r = kkt_check(two_var(), std::vector{-0.9, -1.1}, 1.0, 1e-6);
  CHECK(r.primal == 0.0);
  CHECK(r.stationarity == doctest::Approx(0.1));
  CHECK_FALSE(r.pass);
}

TEST_CASE("negative multiplier on an inequality") {
  const auto r = kkt_check(two_var(), std::vector{-1.0, -1.0}, -0.5, 1e-6);
  CHECK(r.mult_sign == 0.5);
  CHECK_FALSE(r.pass);
}

TEST_CASE("equality residuals ignore the multiplier sign") {
  const auto inst = conrap::test::shifted_quadratic({1, 1}, 0, 3, 4, ConstraintKind::LinearEquality);
  const auto r = kkt_check(inst, std::vector{2.0, 2.0}, -1.0, 1e-12);
  CHECK(r.pass);
  CHECK(r.mult_sign == 0.0);
  const auto off = kkt_check(inst, std::vector{2.0, 1.5}, -1.0, 1e-6);
  CHECK(off.primal == doctest::Approx(0.5));
  CHECK_FALSE(off.pass);
}

TEST_CASE("box multipliers are recovered at the bounds") {
  // φ = ½(x₁ − 4)² + ½(x₂ + 4)², x₁ + x₂ ≤ 0 on [−1, 1]²: both coordinates
  // sit on a bound with λ = 0.
  const ProblemInstance inst({ScalarTerm::quad_lin(1, 4), ScalarTerm::quad_lin(1, -4)},
                             {ScalarTerm::lin_constraint(1), ScalarTerm::lin_constraint(1)}, {-1, -1},
                             {1, 1}, 0, ConstraintKind::Inequality);
  const auto r = kkt_check(inst, std::vector{1.0, -1.0}, 0.0, 1e-12);
  CHECK(r.pass);
  CHECK(r.w_max == doctest::Approx(3.0));
  CHECK(r.v_max == doctest::Approx(3.0));
  CHECK(recover_boundary_multiplier(inst, std::vector{1.0, -1.0}) == 0.0);
}

TEST_CASE("box violation is reported") {
  const auto r = kkt_check(two_var(), std::vector{-6.0, 4.0}, 0.0, 1e-6);
  CHECK(r.box == doctest::Approx(1.0));
  CHECK_FALSE(r.pass);
}

TEST_CASE("at_bound band") {
  CHECK(at_bound(1.0 + 1e-9, 1.0));
  CHECK_FALSE(at_bound(1.0 + 3e-9, 1.0));
  CHECK(at_bound(100.0 + 1e-7, 100.0));
}

TEST_CASE("residual size bounds the objective gap") {
  // φ(x) ≤ φ* + C·τ for perturbed points, with C pinned at 1e3.
  constexpr double kC = 1e3;
  std::mt19937_64 rng(12);
  double worst = 0;
  for (auto family : all_families()) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = generate({family, 2 + seed % 9, seed, 0.5});
      const auto opt = solve(inst);
      REQUIRE(opt.kkt.pass);
      const double phi_star = opt.objective;
      for (int k = 0; k < 40; ++k) {
        const double delta = std::pow(10.0, -1 - k % 8);
        std::normal_distribution<double> noise(0, delta);
        auto x = opt.x;
        for (std::size_t i = 0; i < x.size(); ++i) {
          x[i] = std::clamp(x[i] + noise(rng), inst.lower()[i], inst.upper()[i]);
        }
        const double lambda = inst.constraint_kind() == ConstraintKind::Inequality
                                  ? std::max(0.0, opt.lambda + noise(rng))
                                  : opt.lambda + noise(rng);
        const auto r = kkt_check(inst, x, lambda, 1e-6);
        const double tau = r.max_residual();
        const double gap = eval_phi(inst, x) - phi_star;
        if (gap > 0 && tau > 0) worst = std::max(worst, gap / tau);
        CHECK(gap <= kC * tau + 1e-9 * (1 + std::abs(phi_star)));
      }
    }
  }
  MESSAGE("largest observed gap/residual ratio: " << worst);
}

TEST_CASE("oracle solutions certify at ten times the oracle tolerance") {
  constexpr double kTol = 1e-12;
  for (auto family : all_families()) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = generate({family, 2 + seed % 9, seed, 0.5});
      const auto o = oracle_dual_search(inst, kTol);
      const auto r = kkt_check(inst, o.x, o.lambda, 10 * kTol);
      INFO(to_string(family), " seed ", seed, " residual ", r.max_residual(), " scale ", r.scale);
      CHECK(r.pass);
    }
  }
}
