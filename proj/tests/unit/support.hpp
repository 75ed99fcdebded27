#pragma once

#include <utility>
#include <vector>

#include "ogclab/graph.hpp"

namespace testing_support {

using ogclab::Edge;
using ogclab::HalfEdgeGraph;
using ogclab::Marking;

inline HalfEdgeGraph undirected(int nv, std::vector<Edge> edges, std::vector<Marking> marks,
                                std::vector<int> weights = {}) {
  if (weights.empty()) weights.assign(static_cast<std::size_t>(nv), 0);
  return HalfEdgeGraph::from_edges(std::move(weights), std::move(edges), std::move(marks), false);
}

inline HalfEdgeGraph directed(int nv, std::vector<Edge> edges, std::vector<Marking> marks,
                              std::vector<int> weights = {}) {
  if (weights.empty()) weights.assign(static_cast<std::size_t>(nv), 0);
  return HalfEdgeGraph::from_edges(std::move(weights), std::move(edges), std::move(marks), true);
}

inline std::vector<int> labels(int n) {
  std::vector<int> s;
  for (int i = 1; i <= n; ++i) s.push_back(i);
  return s;
}

}  // namespace testing_support
