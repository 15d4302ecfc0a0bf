#include "conrap/generators.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "conrap/scalar_minimizer.hpp"

namespace conrap {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string squash(std::string_view name) {
  std::string out;
  for (char ch : name) {
    if (ch == '_' || ch == '-' || ch == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

}  // namespace

SplitMix64Stream::SplitMix64Stream(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed + kGolden * (stream + 1))) {}

std::uint64_t SplitMix64Stream::next() noexcept {
  state_ += kGolden;
  return mix(state_);
}

double SplitMix64Stream::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Commodity: return "commodity";
    case Family::QuadQuad: return "quad_quad";
    case Family::Portfolio: return "portfolio";
    case Family::Sampling: return "sampling";
    case Family::TargetSearch: return "target_search";
    case Family::NegEntropy: return "neg_entropy";
  }
  return "?";
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families{Family::Commodity,  Family::QuadQuad,
                                            Family::Portfolio,  Family::Sampling,
                                            Family::TargetSearch, Family::NegEntropy};
  return families;
}

Family family_from_string(std::string_view name) {
  const auto key = squash(name);
  for (auto f : all_families()) {
    if (squash(to_string(f)) == key) return f;
  }
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

ConstraintKind constraint_kind_of(Family family) {
  return family == Family::Commodity || family == Family::QuadQuad ? ConstraintKind::Inequality
                                                                   : ConstraintKind::LinearEquality;
}

void GeneratorSpec::validate() const {
  if (n < 1) throw std::invalid_argument("GeneratorSpec: n must be >= 1");
  if (!(b_fraction > 0.0 && b_fraction < 1.0)) {
    throw std::invalid_argument("GeneratorSpec: b_fraction must lie in (0, 1)");
  }
}

ProblemInstance generate(const GeneratorSpec& spec) {
  spec.validate();
  const auto n = spec.n;
  std::vector<ScalarTerm> phi, g;
  std::vector<double> l(n), u(n);
  phi.reserve(n);
  g.reserve(n);

  // Draw order within a coordinate is part of the reproducibility contract.
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64Stream rng(spec.seed, i);
    switch (spec.family) {
      case Family::Commodity: {
        const double a = rng.closed_open(1, 4);
        const double c = rng.closed_open(10, 30);
        const double k = rng.closed_open(5, 30);
        l[i] = rng.open_closed(0, 3);
        u[i] = rng.open_closed(3, 6);
        phi.push_back(ScalarTerm::holding(c, k));
        g.push_back(ScalarTerm::lin_constraint(a));
        break;
      }
      case Family::QuadQuad: {
        const double a = rng.closed_open(1, 30);
        const double z = rng.closed_open(1, 35);
        const double d = rng.closed_open(1, 20);
        const double c = rng.closed_open(1, 25);
        l[i] = rng.closed_open(0, 3);
        u[i] = rng.open_closed(3, 11);
        phi.push_back(ScalarTerm::quad_lin(d, c));
        g.push_back(ScalarTerm::quad_constraint(a, z));
        break;
      }
      case Family::Portfolio: {
        const double a = rng.closed_open(1, 30);
        const double d = rng.closed_open(1, 20);
        const double c = rng.closed_open(1, 25);
        l[i] = rng.closed_open(0, 3);
        u[i] = rng.open_closed(3, 11);
        phi.push_back(ScalarTerm::quad_lin(d, c));
        g.push_back(ScalarTerm::lin_constraint(a));
        break;
      }
      case Family::Sampling: {
        const double a = rng.closed_open(1, 4);
        const double c = rng.closed_open(5, 30);
        l[i] = rng.open_closed(0, 3);
        u[i] = rng.open_closed(3, 6);
        phi.push_back(ScalarTerm::recip(c));
        g.push_back(ScalarTerm::lin_constraint(a));
        break;
      }
      case Family::TargetSearch: {
        const double a = rng.closed_open(1, 3);
        const double m = rng.closed_open(0.5, 8);
        const double c = rng.closed_open(0.1, 3);
        l[i] = rng.closed_open(0, 0.1);
        u[i] = rng.open_closed(0.1, 5);
        phi.push_back(ScalarTerm::exp_search(m, c));
        g.push_back(ScalarTerm::lin_constraint(a));
        break;
      }
      case Family::NegEntropy: {
        const double a = rng.closed_open(1, 3);
        // Convexity of x·log(x/a − 1) needs x ≥ 2a.
        l[i] = std::max(rng.closed_open(2, 10), 2.0 * a + 0.1);
        u[i] = rng.open_closed(l[i] + 1, l[i] + 11);
        phi.push_back(ScalarTerm::neg_entropy(a));
        g.push_back(ScalarTerm::lin_constraint(a));
        break;
      }
    }
  }

  const auto kind = constraint_kind_of(spec.family);
  // Place b on a provisional instance, then rebuild with the final value.
  ProblemInstance draft(phi, g, l, u, 0.0, kind);
  double b;
  if (kind == ConstraintKind::Inequality) {
    const double g_min = eval_g(draft, argmin_g_box(draft).x);
    const double g_phi = eval_g(draft, argmin_phi_box(draft));
    b = g_min + spec.b_fraction * (g_phi - g_min);
  } else {
    const double g_lo = eval_g(draft, l);
    const double g_hi = eval_g(draft, u);
    b = g_lo + spec.b_fraction * (g_hi - g_lo);
  }
  return ProblemInstance(std::move(phi), std::move(g), std::move(l), std::move(u), b, kind);
}

}  // namespace conrap
