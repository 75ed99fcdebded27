#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "naive.hpp"

namespace oracle {

/// Naive pipeline vs the library for one (g, S) and one flavor.
struct Comparison {
  bool catalogs = false;       // same classes per stratum, same zero-generator flags
  bool differentials = false;  // equal up to basis permutation, per-generator orientation and a global sign per D_k
  bool betti = false;          // dense rational Betti numbers equal the library's table
  std::string detail;          // first mismatch, empty when all agree
  std::size_t graphs = 0;
  [[nodiscard]] bool ok() const { return catalogs && differentials && betti; }
};

struct Limits {
  std::uint64_t max_candidates = 0;     // naive enumeration budget
  int max_dense = 0;                    // largest stratum the dense elimination accepts
  std::uint64_t max_library_cells = 0;  // cap on the library catalog
};

/// Throws std::runtime_error("budget: ...") or ogclab::ResourceCapError when a
/// limit (0 = none) is exceeded; the stratum sizes are checked before any
/// naive work starts.
Comparison compare_with_library(int g, const std::vector<int>& labels, bool oriented, const Limits& limits = {});

}  // namespace oracle
