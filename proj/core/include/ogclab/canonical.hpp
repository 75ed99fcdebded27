#pragma once

// Canonical labeling by ordered partition refinement with full search of the
// individualization tree. The canonical code is the lexicographically smallest
// byte encoding over all leaves, so equal codes <=> isomorphic graphs
// (isomorphisms preserve weights, directions and marking labels).

#include <cstdint>
#include <string>
#include <vector>

#include "ogclab/graph.hpp"

namespace ogclab {

struct CanonicalForm {
  HalfEdgeGraph graph;                 // edges sorted by (u,v); undirected stored as (min,max)
  std::string code;                    // byte encoding of `graph`
  std::vector<int> vertex_map;         // input vertex -> canonical vertex
  std::vector<int> edge_map;           // input edge -> canonical edge
  std::vector<int> half_edge_map;      // input half-edge -> canonical half-edge
  std::vector<Automorphism> generators;  // generate Aut of the input graph
  std::uint64_t aut_order = 1;
  std::uint64_t vertex_aut_order = 1;  // order of the image of Aut in Sym(V)
  bool odd_on_edges = false;           // some automorphism permutes E oddly
  bool odd_on_vertices = false;        // some automorphism permutes V oddly
};

struct CanonicalOptions {
  /// Skip automorphism bookkeeping (generators, orders, parity flags).
  bool automorphisms = true;
};

[[nodiscard]] CanonicalForm canonical_form(const HalfEdgeGraph& g, CanonicalOptions opts = {});

/// Just the code.
[[nodiscard]] std::string canonical_code(const HalfEdgeGraph& g);

[[nodiscard]] bool are_isomorphic(const HalfEdgeGraph& a, const HalfEdgeGraph& b);

/// Compose automorphisms: (a*b)(x) = a(b(x)).
[[nodiscard]] Automorphism compose(const Automorphism& a, const Automorphism& b);

/// Hex rendering of a code, for logs and file names.
[[nodiscard]] std::string code_hex(const std::string& code);

}  // namespace ogclab
