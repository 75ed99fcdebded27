#pragma once

// JSON graph schema, field order fixed:
// {"vertices":[{"w":0},...],"edges":[{"h":[0,1],"dir":0},...],"markings":{"1":0,...}}
// "dir" is 0 when the first endpoint is the source, 1 when it is the target,
// and null for undirected edges. A graph is directed iff every edge has a
// non-null "dir"; graphs without edges are undirected unless `directed` is set.

#include <filesystem>
#include <string>

#include "ogclab/graph.hpp"

namespace ogclab {

[[nodiscard]] std::string graph_to_json(const HalfEdgeGraph& g);

/// Parses and validates. `source` names the origin in ValidationError messages.
/// `directed_hint` decides the flavor of edgeless graphs.
[[nodiscard]] HalfEdgeGraph graph_from_json(const std::string& text, const std::string& source,
                                            bool directed_hint = false);

void save_graph(const std::filesystem::path& path, const HalfEdgeGraph& g);
[[nodiscard]] HalfEdgeGraph load_graph(const std::filesystem::path& path, bool directed_hint = false);

}  // namespace ogclab
