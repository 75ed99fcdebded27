#pragma once

// Half-edge graphs with vertex weights and S-markings (hairs).
//
// Edge e owns half-edges 2e and 2e+1; the pairing involution is h <-> h^1.
// In a directed graph half-edge 2e is the source end and 2e+1 the target end.
// Markings are labelled hairs: they count toward valence and, in the oriented
// flavor, as outgoing half-edges, but they are never contracted.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ogclab {

struct Edge {
  int u = 0;  // source when directed
  int v = 0;  // target when directed

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Marking {
  int label = 0;
  int vertex = 0;

  friend bool operator==(const Marking&, const Marking&) = default;
};

class HalfEdgeGraph {
 public:
  HalfEdgeGraph() = default;

  /// Edge i joins edges[i].u and edges[i].v (u -> v when directed).
  /// Validates indices, label uniqueness and (directed) the absence of loops.
  static HalfEdgeGraph from_edges(std::vector<int> weights, std::vector<Edge> edges,
                                  std::vector<Marking> markings, bool directed);

  /// General half-edge carrier. `pairing` must be a fixed-point-free involution
  /// on half-edge ids; `source_half`, when present, lists for every edge (in
  /// order of its smaller half-edge id) which half is the source.
  static HalfEdgeGraph from_half_edges(std::vector<int> weights, std::vector<int> half_vertex,
                                       std::vector<int> pairing,
                                       std::optional<std::vector<int>> source_half,
                                       std::vector<Marking> markings);

  [[nodiscard]] int num_vertices() const { return static_cast<int>(weights_.size()); }
  [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }
  [[nodiscard]] int num_half_edges() const { return 2 * num_edges(); }
  [[nodiscard]] int num_markings() const { return static_cast<int>(markings_.size()); }
  [[nodiscard]] bool is_directed() const { return directed_; }

  [[nodiscard]] int weight(int v) const { return weights_.at(static_cast<std::size_t>(v)); }
  [[nodiscard]] const std::vector<int>& weights() const { return weights_; }
  [[nodiscard]] const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  /// Sorted by label.
  [[nodiscard]] const std::vector<Marking>& markings() const { return markings_; }
  [[nodiscard]] std::vector<int> labels() const;

  [[nodiscard]] int half_edge_vertex(int h) const {
    const Edge& e = edge(h / 2);
    return (h % 2 == 0) ? e.u : e.v;
  }
  [[nodiscard]] static int pair(int h) { return h ^ 1; }
  [[nodiscard]] bool is_loop(int e) const { return edge(e).u == edge(e).v; }

  /// Half-edges plus hairs at v.
  [[nodiscard]] int valence(int v) const;
  [[nodiscard]] int hair_count(int v) const;
  /// Incoming edge half-edges (directed graphs only; 0 otherwise).
  [[nodiscard]] int in_degree(int v) const;
  /// Outgoing edge half-edges, hairs excluded (directed graphs only).
  [[nodiscard]] int out_degree(int v) const;
  /// Edges parallel to e (same endpoint pair, either direction), e excluded.
  [[nodiscard]] std::vector<int> parallel_edges(int e) const;
  [[nodiscard]] bool has_multi_edges() const;
  [[nodiscard]] bool is_connected() const;

  friend bool operator==(const HalfEdgeGraph&, const HalfEdgeGraph&) = default;

 private:
  void validate() const;

  std::vector<int> weights_;
  std::vector<Edge> edges_;
  std::vector<Marking> markings_;
  bool directed_ = false;
};

// ---------------------------------------------------------------------------
// Stability profiles

enum class StabilityFlavor { MarkedStable, OrientedStable };

struct StabilityProfile {
  StabilityFlavor flavor = StabilityFlavor::MarkedStable;
  /// Minimum valence (hairs included) of weight-0 vertices.
  int min_weight0_valence = 3;
  /// Reject weight-0 vertices of valence 2 with one incoming half-edge.
  bool forbid_passing = false;
  /// Count hairs as outgoing when detecting passing vertices.
  bool hairs_are_outgoing = true;
  /// Every vertex needs an outgoing edge or a hair.
  bool require_outgoing = false;
  /// Literal reading: every vertex carries at least one marking.
  bool require_marking_everywhere = false;

  [[nodiscard]] std::string name() const;

  static StabilityProfile marked();
  static StabilityProfile oriented();
  /// The "every vertex is marked" reading of the oriented conditions.
  static StabilityProfile oriented_strict();
  /// Accepts "marked", "oriented", "oriented-strict".
  static StabilityProfile from_name(const std::string& name);

  friend bool operator==(const StabilityProfile&, const StabilityProfile&) = default;
};

// ---------------------------------------------------------------------------
// Orientation data

enum class OrientationKind { EdgeOrder, VertexOrder };

struct Orientation {
  OrientationKind kind = OrientationKind::EdgeOrder;
  std::vector<int> reference;
  int sign = 1;
};

/// An isomorphism of a graph onto itself, acting on vertices and half-edges.
struct Automorphism {
  std::vector<int> vertex_map;
  std::vector<int> half_edge_map;

  [[nodiscard]] std::vector<int> edge_map() const;
};

// ---------------------------------------------------------------------------
// Structural operations

/// b1(G) + sum of weights. Throws StructuralError on a disconnected graph.
[[nodiscard]] int genus(const HalfEdgeGraph& g);

/// Topological-sort feasibility. Throws PreconditionError on undirected input.
[[nodiscard]] bool is_acyclic(const HalfEdgeGraph& g);

[[nodiscard]] bool is_stable(const HalfEdgeGraph& g, const StabilityProfile& profile);

struct Contraction {
  HalfEdgeGraph graph;
  std::vector<int> vertex_map;  // old vertex -> new vertex
  std::vector<int> edge_map;    // old edge -> new edge, -1 if removed
  int merged_vertex = -1;
  int weight_gain = 0;          // parallel partners collapsed (or 1 for a loop)
};

/// Contract a non-loop edge. Parallel partners are removed together with e and
/// the merged vertex gains one unit of weight per partner. The merged vertex
/// keeps the smaller endpoint index; later vertices shift down by one.
[[nodiscard]] Contraction contract_edge_mapped(const HalfEdgeGraph& g, int e);
[[nodiscard]] HalfEdgeGraph contract_edge(const HalfEdgeGraph& g, int e);

/// Remove a loop and raise the weight of its vertex by one.
[[nodiscard]] Contraction contract_loop_mapped(const HalfEdgeGraph& g, int e);
[[nodiscard]] HalfEdgeGraph contract_loop(const HalfEdgeGraph& g, int e);

/// Relabel vertices: new index of vertex v is perm[v]. Edges keep their ids.
[[nodiscard]] HalfEdgeGraph relabel_vertices(const HalfEdgeGraph& g, std::span<const int> perm);

/// Sign of the permutation induced by `aut` on the orientation's reference set.
[[nodiscard]] int orientation_sign(const HalfEdgeGraph& g, const Orientation& orientation,
                                   const Automorphism& aut);

/// Sign of a permutation given as an image array.
[[nodiscard]] int permutation_sign(std::span<const int> perm);

/// Human-readable one-line description, e.g. "V=2 E=[0>1,0>1] S={1:1}".
[[nodiscard]] std::string describe(const HalfEdgeGraph& g);

}  // namespace ogclab
