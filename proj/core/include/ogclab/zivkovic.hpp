#pragma once

// The forest map Psi from the marked complex to the oriented complex.
//
// For a marked graph G and a rooted spanning forest tau, G_tau is built by
//   * directing every forest edge toward the root of its component,
//   * subdividing every other edge (loops included) by a fresh double source,
//   * moving every non-root hair to a fresh source with one edge into the old
//     vertex; root hairs stay.
// q sends a forest edge to its endpoint farther from the root, a non-forest
// edge to its subdivision vertex, a non-root hair to its source and a root
// hair to the root vertex. q is a bijection E(G) + S -> V(G_tau), so
// Psi_k : C^marked_k -> C^oriented_{k+|S|}.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ogclab/complex.hpp"
#include "ogclab/enumerate.hpp"
#include "ogclab/graph.hpp"

namespace ogclab {

struct ForestOrientedGraph {
  HalfEdgeGraph source;
  RootedForest forest;
  HalfEdgeGraph oriented;       // G_tau
  std::vector<int> edge_cell;   // edge of G -> vertex of G_tau
  std::vector<int> hair_cell;   // marking (label order) -> vertex of G_tau
  std::vector<int> root_vertices;
};

/// Throws PreconditionError if tau is not a rooted spanning forest of g.
[[nodiscard]] ForestOrientedGraph forest_orient(const HalfEdgeGraph& g, const RootedForest& tau);
/// A literal forest (one marking per component) rooted at those markings.
[[nodiscard]] ForestOrientedGraph forest_orient(const HalfEdgeGraph& g, const SpanningForest& tau);

/// Orderings of V(G_tau) used as the orientation of the image. The list of
/// q-images is (q(e_0), ..., q(e_{k-1}), q(h_1), ..., q(h_n)) with hairs in
/// label order.
enum class PsiConvention {
  ReversedImages,    // the whole list reversed
  ImagesInOrder,     // the list as is
  HairsFirst,        // (q(h_1..h_n), q(e_0..e_{k-1}))
  ReversedBlocks,    // (q(e_{k-1}..e_0), q(h_n..h_1))
};

[[nodiscard]] std::string convention_name(PsiConvention c);
[[nodiscard]] std::vector<PsiConvention> all_conventions();
/// Vertex sequence of G_tau realizing the orientation image of e_0..e_{k-1}.
[[nodiscard]] std::vector<int> image_order(const ForestOrientedGraph& f, PsiConvention c);

struct PsiFamily {
  PsiConvention convention = PsiConvention::ReversedImages;
  int shift = 0;  // |S|
  /// k -> Psi_k (rows: oriented basis k + shift, cols: marked basis k).
  std::map<int, SparseIntMatrix> blocks;

  [[nodiscard]] SparseIntMatrix at(int k, const GradedComplex& marked, const GradedComplex& oriented) const;
};

[[nodiscard]] PsiFamily psi_matrix(const GradedComplex& marked, const GradedComplex& oriented,
                                   PsiConvention convention = PsiConvention::ReversedImages, int threads = 1);

struct ChainMapReport {
  bool ok = true;
  int epsilon = 0;  // D_or Psi = epsilon Psi D_marked; 0 if both sides vanish everywhere
  std::string direction = "marked->oriented, homological";
  PsiConvention convention = PsiConvention::ReversedImages;
  struct Degree {
    int k = 0;  // marked degree of the source column
    bool lhs_zero = true;
    int sign = 0;  // +1 / -1 when the degree matches with that sign, 0 if both vanish, 2 if neither
  };
  std::vector<Degree> degrees;
  /// Minimal offending generator (smallest degree, then basis position) with
  /// both sides expanded as (oriented generator description, coefficient).
  std::optional<int> bad_degree;
  std::optional<int> bad_column;
  std::string bad_generator;
  std::vector<std::pair<std::string, long>> lhs_expansion;
  std::vector<std::pair<std::string, long>> rhs_expansion;
};

[[nodiscard]] ChainMapReport verify_chain_map(const PsiFamily& psi, const GradedComplex& marked,
                                              const GradedComplex& oriented);

/// Tries conventions in all_conventions() order; returns the first passing
/// one (or the first convention with its failing report).
[[nodiscard]] std::pair<PsiFamily, ChainMapReport> select_psi_convention(const GradedComplex& marked,
                                                                         const GradedComplex& oriented,
                                                                         int threads = 1);

struct QuasiIsoReport {
  bool ok = true;
  bool betti_match = true;
  BettiTable marked_betti;
  BettiTable oriented_betti;
  struct ConeDegree {
    int m = 0;  // oriented degree; Cone_m = marked_{m-1-|S|} + oriented_m
    int dim = 0;
    int rank_in = 0;
    int rank_out = 0;
    int homology = 0;
  };
  std::vector<ConeDegree> cone;
};

/// Psi is a quasi-isomorphism iff its mapping cone is acyclic; ranks of the
/// cone differential [[-eps D_marked, 0], [Psi, D_or]] decide it exactly.
[[nodiscard]] QuasiIsoReport verify_quasi_iso(const PsiFamily& psi, const GradedComplex& marked,
                                              const GradedComplex& oriented, int epsilon,
                                              const BettiOptions& opts = {});

/// Cone differential out of Cone_m (as used by verify_quasi_iso).
[[nodiscard]] SparseIntMatrix cone_differential(const PsiFamily& psi, const GradedComplex& marked,
                                                const GradedComplex& oriented, int epsilon, int m);

}  // namespace ogclab
