#pragma once

#include <cstdint>
#include <vector>

#include "flexkrylov/vector_ops.hpp"

namespace flexkrylov {

/// Deterministic counter-based generator (splitmix64). The k-th raw output is
/// a pure function of (seed, k): the state walks a fixed odd increment and the
/// output is a bijective mix of the counter, so streams are reproducible,
/// cheap to fork, and carry no global state. Normal variates use Box-Muller.
class Splitmix64Rng {
 public:
  explicit Splitmix64Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53 significant bits.
  double uniform01();

  /// Standard normal.
  double normal();

  Vector normal_vector(std::size_t n);

  /// Derives an independent substream; does not advance this generator.
  Splitmix64Rng fork(std::uint64_t stream) const;

  /// `count` distinct indices drawn uniformly from {0, ..., population-1},
  /// returned sorted.
  std::vector<int> sample_without_replacement(int population, int count);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace flexkrylov
