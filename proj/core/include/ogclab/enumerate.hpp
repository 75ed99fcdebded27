#pragma once

// Isomorphism classes of stable weight-0 graphs of genus g with markings S,
// spanning forests, and contraction morphisms.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ogclab/canonical.hpp"
#include "ogclab/graph.hpp"

namespace ogclab {

enum class Flavor { Marked, Oriented };

[[nodiscard]] std::string flavor_name(Flavor f);
[[nodiscard]] Flavor flavor_from_name(const std::string& name);

struct CatalogEntry {
  HalfEdgeGraph graph;  // canonical representative
  std::string code;
  /// Has an automorphism reversing the orientation (det E for marked, det V
  /// for oriented); kept as a category object, dropped from complex bases.
  bool zero_generator = false;
  std::uint64_t aut_order = 1;
};

struct CatalogRef {
  int stratum = 0;
  int index = 0;
};

class GraphCatalog {
 public:
  Flavor flavor = Flavor::Marked;
  int genus = 0;
  std::vector<int> labels;
  StabilityProfile profile;
  std::string generator_version;
  /// Keyed by |E| (marked) or |V| (oriented); entries sorted by code.
  std::map<int, std::vector<CatalogEntry>> strata;

  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] std::optional<CatalogRef> find(const std::string& code) const;
  [[nodiscard]] const CatalogEntry& at(CatalogRef r) const;
  /// Stratum key of a graph in this catalog's grading.
  [[nodiscard]] int stratum_of(const HalfEdgeGraph& g) const;
  /// Rebuild the code index after editing `strata` by hand.
  void reindex();

 private:
  std::unordered_map<std::string, CatalogRef> index_;
};

struct GenerateOptions {
  int threads = 1;
  std::uint64_t max_cells = 0;  // 0 = unlimited
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Throws DomainError unless 2g + |S| - 2 > 0.
void check_stable_range(int g, std::size_t num_labels);

/// Connected stable weight-0 graphs (loops and multi-edges included), by |E|.
[[nodiscard]] GraphCatalog generate_marked(int g, const std::vector<int>& labels,
                                           const StabilityProfile& profile = StabilityProfile::marked(),
                                           const GenerateOptions& opts = {});

/// Acyclic directed stable weight-0 graphs, by |V|.
[[nodiscard]] GraphCatalog generate_oriented(int g, const std::vector<int>& labels,
                                             const StabilityProfile& profile = StabilityProfile::oriented(),
                                             const GenerateOptions& opts = {});

/// Calls fn once per isomorphism class of stable oriented graphs, without
/// building a catalog. Graphs are not canonicalized; fn runs concurrently on
/// up to opts.threads workers. max_cells caps the number of classes visited.
void for_each_oriented_class(int g, const std::vector<int>& labels, const StabilityProfile& profile,
                             const GenerateOptions& opts, const std::function<void(const HalfEdgeGraph&)>& fn);

[[nodiscard]] GraphCatalog generate(Flavor flavor, int g, const std::vector<int>& labels,
                                    const StabilityProfile& profile, const GenerateOptions& opts = {});

/// Upper bounds derived from valence >= 3: |V| <= 2g-2+|S|, |E| <= 3g-3+|S|.
[[nodiscard]] int max_marked_vertices(int g, std::size_t num_labels);
[[nodiscard]] int max_marked_edges(int g, std::size_t num_labels);

// ---------------------------------------------------------------------------
// Spanning forests

/// Acyclic set of non-loop edges covering all vertices, each component
/// carrying exactly one marking.
struct SpanningForest {
  std::vector<int> edges;            // sorted edge ids
  std::vector<int> component_label;  // vertex -> the marking label of its component
};

/// Acyclic set of non-loop edges whose components each carry at least one
/// marking, together with a chosen root marking per component.
struct RootedForest {
  std::vector<int> edges;        // sorted edge ids
  std::vector<int> root_labels;  // sorted; one per component
  std::vector<int> root_of;      // vertex -> root label of its component
};

[[nodiscard]] std::vector<SpanningForest> spanning_forests(const HalfEdgeGraph& g);
[[nodiscard]] std::vector<RootedForest> rooted_spanning_forests(const HalfEdgeGraph& g);

// ---------------------------------------------------------------------------
// Contractions

enum class ContractionStatus { InLocus, ExitsLoop, ExitsParallel, ExitsCycle, ExitsUnstable, NotInCatalog };

[[nodiscard]] std::string status_name(ContractionStatus s);

struct ContractionTarget {
  int edge = -1;
  ContractionStatus status = ContractionStatus::InLocus;
  std::optional<CatalogRef> target;
  std::vector<int> vertex_map;  // source vertex -> canonical target vertex
  std::vector<int> edge_map;    // source edge -> canonical target edge, -1 if contracted
  int merged_vertex = -1;       // canonical index of the merged vertex
};

[[nodiscard]] std::vector<ContractionTarget> contraction_targets(const HalfEdgeGraph& g,
                                                                 const GraphCatalog& catalog);

}  // namespace ogclab
