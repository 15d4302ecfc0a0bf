#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "conrap/problem.hpp"

namespace conrap {

enum class Family { Commodity, QuadQuad, Portfolio, Sampling, TargetSearch, NegEntropy };

std::string_view to_string(Family family);
/// Accepts the canonical names ("commodity", "quad_quad", "portfolio",
/// "sampling", "target_search", "neg_entropy") case-insensitively, with or
/// without separators.
Family family_from_string(std::string_view name);
const std::vector<Family>& all_families();
/// Commodity and QuadQuad carry an inequality; the rest a linear equality.
ConstraintKind constraint_kind_of(Family family);

struct GeneratorSpec {
  Family family = Family::Portfolio;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  double b_fraction = 0.5;

  void validate() const;
};

/// Counter-based SplitMix64 stream. Coordinate i of a generated instance draws
/// from SplitMix64Stream(seed, i), so every coordinate is reproducible on its
/// own and independent of n.
class SplitMix64Stream {
 public:
  SplitMix64Stream(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform in [lo, hi).
  double closed_open(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform in (lo, hi].
  double open_closed(double lo, double hi) noexcept { return hi - (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Random instance of the family; identical specs give identical instances.
/// b sits at b_fraction of the way from the smallest attainable constraint
/// value to g(x_φ) (inequality) or g(u) (equality).
ProblemInstance generate(const GeneratorSpec& spec);

}  // namespace conrap
