#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "graphomic/numcore/matrix.hpp"

namespace graphomic {

/// Seedable, splittable pseudo-random generator (mt19937_64 core).
///
/// Every stochastic operation in the library takes an Rng explicitly. `split`
/// advances this generator once and returns an independent child stream, so
/// the sequence of splits is itself deterministic.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Child generator; advances this generator by one draw.
  Rng split();

  /// Child generator keyed by `salt`; does not advance this generator.
  Rng derive(std::uint64_t salt) const;

  double uniform(double lo = 0.0, double hi = 1.0);
  double normal(double mean = 0.0, double stddev = 1.0);
  bool bernoulli(double p);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  Matrix normal_matrix(Index rows, Index cols, double mean = 0.0, double stddev = 1.0);
  Matrix uniform_matrix(Index rows, Index cols, double lo, double hi);

  /// Uniformly random permutation of 0..n-1.
  std::vector<Index> permutation(Index n);

  engine_type& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  engine_type engine_;
};

/// SplitMix64 finaliser; used to derive child seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace graphomic
