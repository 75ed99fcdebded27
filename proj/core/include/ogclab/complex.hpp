#pragma once

// The two weight-0 complexes, stored homologically (contraction lowers the
// cell degree by one):
//   marked:   C_k = span of graphs with |E| = k, orientation = det(E),
//             D(G, e_0..e_{k-1}) = sum_i (-1)^i (G/e_i, e_0..^e_i..e_{k-1});
//   oriented: C_k = span of acyclic graphs with |V| = k, orientation = det(V),
//             D contracts single directed edges a->b; the pair (a,b) is moved
//             to the last two slots and replaced by the merged vertex.
// Terms leaving the weight-0 stable locus (loops, parallel pairs, directed
// cycles) are dropped. The vertex-splitting differential is the transpose.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ogclab/enumerate.hpp"
#include "ogclab/rank.hpp"
#include "ogclab/sparse_matrix.hpp"

namespace ogclab {

class GradedComplex {
 public:
  Flavor flavor = Flavor::Marked;
  int genus = 0;
  std::vector<int> labels;
  int parity = 0;  // 0 for the marked complex, 1 for the oriented one
  std::shared_ptr<const GraphCatalog> catalog;
  /// degree -> indices into catalog->strata[degree], zero generators removed.
  std::map<int, std::vector<int>> basis;
  /// degree k -> D_k : C_k -> C_{k-1} (rows: basis k-1, cols: basis k),
  /// present for every k in [min_degree, max_degree + 1].
  std::map<int, SparseIntMatrix> boundary;

  [[nodiscard]] int dim(int k) const;
  [[nodiscard]] int min_degree() const;  // 0 when empty
  [[nodiscard]] int max_degree() const;  // -1 when empty
  [[nodiscard]] std::size_t total_dim() const;
  [[nodiscard]] const CatalogEntry& generator(int k, int i) const;
  /// Degree and basis position of a canonical code, if it is a basis element.
  [[nodiscard]] std::optional<std::pair<int, int>> position(const std::string& code) const;
  /// D_k, or an empty matrix of the right shape.
  [[nodiscard]] SparseIntMatrix d(int k) const;

  void rebuild_positions();

 private:
  std::map<std::string, std::pair<int, int>> positions_;
};

struct BuildOptions {
  int threads = 1;
  bool check_d_squared = true;  // throw InternalCheckError on failure
};

[[nodiscard]] GradedComplex build_marked_complex(std::shared_ptr<const GraphCatalog> catalog, int d_parity = 0,
                                                 const BuildOptions& opts = {});
[[nodiscard]] GradedComplex build_oriented_complex(std::shared_ptr<const GraphCatalog> catalog,
                                                   const BuildOptions& opts = {});
[[nodiscard]] GradedComplex build_complex(std::shared_ptr<const GraphCatalog> catalog,
                                          const BuildOptions& opts = {});

/// Boundary of one generator: (row position in degree k-1, coefficient).
[[nodiscard]] std::vector<std::pair<int, int>> boundary_column(const GradedComplex& c, int k, int i);

struct DSquaredReport {
  bool ok = true;
  std::vector<int> checked_degrees;
  /// First failure: D_{k-1} D_k has a nonzero entry (row in degree k-2, column in degree k).
  std::optional<int> failing_degree;
  std::string detail;
};

[[nodiscard]] DSquaredReport check_d_squared(const GradedComplex& c);

/// d^2 = 0 verified generator by generator without storing a catalog or any
/// matrix: every stable graph is produced once, its boundary and the boundary
/// of each target are recomputed from canonical forms.
struct StreamingCheckOptions {
  int threads = 1;
  std::uint64_t max_generators = 0;  // 0 = unlimited; ResourceCapError beyond
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct StreamingReport {
  bool ok = true;
  std::uint64_t generators = 0;     // non-zero generators visited
  std::uint64_t terms = 0;          // nonzero D entries encountered
  std::string detail;
};

[[nodiscard]] StreamingReport streaming_d_squared(Flavor flavor, int g, const std::vector<int>& labels,
                                                  const StreamingCheckOptions& opts = {});

// ---------------------------------------------------------------------------
// Betti tables

struct BettiRow {
  int cell_degree = 0;
  int hc_degree = 0;
  int dim = 0;
  int rank_in = 0;   // rank D_k
  int rank_out = 0;  // rank D_{k+1}
  int betti = 0;
};

struct BettiTable {
  Flavor flavor = Flavor::Marked;
  int genus = 0;
  std::vector<int> labels;
  int parity = 0;
  std::map<int, BettiRow> rows;  // keyed by cell degree

  /// betti by hc_degree, zeros omitted.
  [[nodiscard]] std::map<int, int> by_hc_degree() const;
  [[nodiscard]] int total() const;
};

struct BettiOptions {
  RankStrategy strategy = RankStrategy::consensus();
  /// Also compute rational ranks and fail hard if they disagree.
  bool cross_check_rational = false;
};

[[nodiscard]] BettiTable betti(const GradedComplex& c, const BettiOptions& opts = {});

/// Degree dictionary. hc_degree is |E| for the marked complex and |V| - |S|
/// for the oriented complex, so the two tables line up.
[[nodiscard]] int hc_degree(Flavor flavor, int cell_degree, int num_labels);
[[nodiscard]] int cell_degree_from_hc(Flavor flavor, int hc, int num_labels);
/// Literal normalizations reported as extra columns (oriented flavor only).
[[nodiscard]] int ogc_formula_degree(int cell_degree, int g, int d, int num_labels);
[[nodiscard]] int cousin_degree(int cell_degree, int g, int d);

struct EulerPair {
  std::int64_t from_basis = 0;
  std::int64_t from_betti = 0;
};

/// Computes both alternating sums; throws InternalCheckError if they differ.
[[nodiscard]] EulerPair euler_characteristic(const GradedComplex& c, const BettiTable& t);
[[nodiscard]] EulerPair euler_characteristic(const GradedComplex& c, const BettiOptions& opts = {});

/// True iff both tables agree degree by degree after the hc shift.
[[nodiscard]] bool shifted_equal(const BettiTable& a, const BettiTable& b);

[[nodiscard]] std::string betti_csv(const std::vector<BettiTable>& tables);
[[nodiscard]] std::string betti_json(const std::vector<BettiTable>& tables);

}  // namespace ogclab
