#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "semiteam/semiring.hpp"

namespace semiteam {

/// Seeded PRNG wrapper used by the sampling probes. Deterministic across
/// platforms (mt19937_64 with explicit reductions only).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(raw() % static_cast<std::uint64_t>(n)); }
  bool chance(int num, int den) { return below(den) < num; }

private:
  std::mt19937_64 eng_;
};

/// A small random element of the given semiring; `nonzero` forces a value
/// distinct from 0. Magnitudes stay single-digit so products remain readable.
Value random_value(Rng& rng, const SpecPtr& spec, bool nonzero = false);

} // namespace semiteam
