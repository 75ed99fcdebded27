#include "ogclab/graph_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ogclab/errors.hpp"

namespace ogclab {

using ojson = nlohmann::ordered_json;

std::string graph_to_json(const HalfEdgeGraph& g) {
  ojson j;
  j["vertices"] = ojson::array();
  for (int w : g.weights()) j["vertices"].push_back(ojson{{"w", w}});
  j["edges"] = ojson::array();
  for (const Edge& e : g.edges()) {
    ojson ej;
    ej["h"] = {e.u, e.v};
    ej["dir"] = g.is_directed() ? ojson(0) : ojson(nullptr);
    j["edges"].push_back(ej);
  }
  j["markings"] = ojson::object();
  for (const Marking& m : g.markings()) j["markings"][std::to_string(m.label)] = m.vertex;
  return j.dump();
}

HalfEdgeGraph graph_from_json(const std::string& text, const std::string& source, bool directed_hint) {
  auto fail = [&](const std::string& why) -> ValidationError {
    return ValidationError(source + ": " + why);
  };
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& ex) {
    throw fail(std::string("malformed JSON: ") + ex.what());
  }
  try {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges") || !j.contains("markings"))
      throw fail("expected keys vertices, edges, markings");
    std::vector<int> weights;
    for (const auto& v : j.at("vertices")) {
      const int w = v.at("w").get<int>();
      if (w < 0) throw fail("negative weight");
      weights.push_back(w);
    }
    std::vector<Edge> edges;
    int directed_count = 0;
    for (const auto& e : j.at("edges")) {
      const auto& h = e.at("h");
      if (!h.is_array() || h.size() != 2) throw fail("edge endpoints must be a pair");
      int a = h[0].get<int>(), b = h[1].get<int>();
      const auto& d = e.at("dir");
      if (!d.is_null()) {
        const int dir = d.get<int>();
        if (dir != 0 && dir != 1) throw fail("dir must be 0, 1 or null");
        if (dir == 1) std::swap(a, b);
        ++directed_count;
      }
      edges.push_back({a, b});
    }
    if (directed_count != 0 && directed_count != static_cast<int>(edges.size()))
      throw fail("mixed directed and undirected edges");
    const bool directed = edges.empty() ? directed_hint : directed_count > 0;
    std::vector<Marking> marks;
    for (const auto& [key, value] : j.at("markings").items()) {
      std::size_t pos = 0;
      int label = 0;
      try {
        label = std::stoi(key, &pos);
      } catch (const std::exception&) {
        throw fail("marking label '" + key + "' is not an integer");
      }
      if (pos != key.size()) throw fail("marking label '" + key + "' is not an integer");
      marks.push_back({label, value.get<int>()});
    }
    HalfEdgeGraph g = HalfEdgeGraph::from_edges(std::move(weights), std::move(edges), std::move(marks), directed);
    if (!g.is_connected()) throw fail("graph is not connected");
    return g;
  } catch (const ValidationError&) {
    throw;
  } catch (const StructuralError& ex) {
    throw fail(ex.what());
  } catch (const ojson::exception& ex) {
    throw fail(ex.what());
  }
}

void save_graph(const std::filesystem::path& path, const HalfEdgeGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path.string() + ": cannot open for writing");
  out << graph_to_json(g) << '\n';
}

HalfEdgeGraph load_graph(const std::filesystem::path& path, bool directed_hint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return graph_from_json(ss.str(), path.string(), directed_hint);
}

}  // namespace ogclab
