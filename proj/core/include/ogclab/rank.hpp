#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ogclab/sparse_matrix.hpp"

namespace ogclab {

enum class RankMethod { Rational, Modular, Consensus };

struct RankStrategy {
  RankMethod method = RankMethod::Consensus;
  std::uint32_t prime = 2147483629u;  // Modular
  int primes = 3;                     // Consensus
  std::uint64_t seed = 0x5eed;        // Consensus prime selection

  static RankStrategy rational() { return {RankMethod::Rational}; }
  static RankStrategy modular(std::uint32_t p) { return {RankMethod::Modular, p}; }
  static RankStrategy consensus(int k = 3, std::uint64_t seed = 0x5eed) {
    return {RankMethod::Consensus, 0, k, seed};
  }
};

struct RankResult {
  int rank = 0;
  RankMethod method_used = RankMethod::Rational;
  std::vector<std::uint32_t> primes;
  std::vector<int> modular_ranks;
  bool escalated = false;  // consensus disagreed and rational elimination decided
};

/// Rank of `m`. A matrix tagged with a prime field is always ranked over that
/// field. Rational rank uses fraction-free elimination with Markowitz pivots.
[[nodiscard]] RankResult rank_of(const SparseIntMatrix& m, const RankStrategy& strategy = {});
[[nodiscard]] int rank(const SparseIntMatrix& m, const RankStrategy& strategy = {});

[[nodiscard]] int rational_rank(const SparseIntMatrix& m);
[[nodiscard]] int modular_rank(const SparseIntMatrix& m, std::uint32_t p);

/// Deterministic Miller-Rabin, exact for all 32-bit inputs.
[[nodiscard]] bool is_prime_u32(std::uint32_t n);
/// k distinct primes drawn uniformly from [2^30, 2^31) with a seeded generator.
[[nodiscard]] std::vector<std::uint32_t> random_primes(int k, std::uint64_t seed);

}  // namespace ogclab
