#include "ogclab/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ogclab/errors.hpp"

namespace ogclab {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

HalfEdgeGraph HalfEdgeGraph::from_edges(std::vector<int> weights, std::vector<Edge> edges,
                                        std::vector<Marking> markings, bool directed) {
  HalfEdgeGraph g;
  g.weights_ = std::move(weights);
  g.edges_ = std::move(edges);
  g.markings_ = std::move(markings);
  g.directed_ = directed;
  std::sort(g.markings_.begin(), g.markings_.end(),
            [](const Marking& a, const Marking& b) { return a.label < b.label; });
  g.validate();
  return g;
}

HalfEdgeGraph HalfEdgeGraph::from_half_edges(std::vector<int> weights,
                                             std::vector<int> half_vertex,
                                             std::vector<int> pairing,
                                             std::optional<std::vector<int>> source_half,
                                             std::vector<Marking> markings) {
  const std::size_t nh = half_vertex.size();
  if (pairing.size() != nh) throw StructuralError("pairing and half-edge lists differ in length");
  std::vector<Edge> edges;
  std::vector<std::pair<int, int>> halves;
  for (std::size_t h = 0; h < nh; ++h) {
    const int p = pairing[h];
    if (p < 0 || idx(p) >= nh || p == static_cast<int>(h) || pairing[idx(p)] != static_cast<int>(h))
      throw StructuralError("pairing is not a fixed-point-free involution");
    if (static_cast<int>(h) < p) halves.emplace_back(static_cast<int>(h), p);
  }
  if (source_half && source_half->size() != halves.size())
    throw StructuralError("direction list does not match the number of edges");
  for (std::size_t e = 0; e < halves.size(); ++e) {
    auto [a, b] = halves[e];
    if (source_half) {
      const int s = (*source_half)[e];
      if (s == b) std::swap(a, b);
      else if (s != a) throw StructuralError("source half-edge does not belong to its edge");
    }
    edges.push_back({half_vertex[idx(a)], half_vertex[idx(b)]});
  }
  return from_edges(std::move(weights), std::move(edges), std::move(markings),
                    source_half.has_value());
}

void HalfEdgeGraph::validate() const {
  const int n = num_vertices();
  for (int w : weights_)
    if (w < 0) throw StructuralError("negative vertex weight");
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw StructuralError("edge endpoint out of range");
    if (directed_ && e.u == e.v) throw StructuralError("directed loop edge");
  }
  for (std::size_t i = 0; i < markings_.size(); ++i) {
    if (markings_[i].vertex < 0 || markings_[i].vertex >= n)
      throw StructuralError("marking on a nonexistent vertex");
    if (i > 0 && markings_[i].label == markings_[i - 1].label)
      throw StructuralError("duplicate marking label");
  }
}

std::vector<int> HalfEdgeGraph::labels() const {
  std::vector<int> out;
  out.reserve(markings_.size());
  for (const auto& m : markings_) out.push_back(m.label);
  return out;
}

int HalfEdgeGraph::hair_count(int v) const {
  return static_cast<int>(
      std::count_if(markings_.begin(), markings_.end(), [v](const Marking& m) { return m.vertex == v; }));
}

int HalfEdgeGraph::valence(int v) const {
  int k = hair_count(v);
  for (const Edge& e : edges_) k += (e.u == v) + (e.v == v);
  return k;
}

int HalfEdgeGraph::in_degree(int v) const {
  if (!directed_) return 0;
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [v](const Edge& e) { return e.v == v; }));
}

int HalfEdgeGraph::out_degree(int v) const {
  if (!directed_) return 0;
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [v](const Edge& e) { return e.u == v; }));
}

std::vector<int> HalfEdgeGraph::parallel_edges(int e) const {
  const Edge& a = edge(e);
  std::vector<int> out;
  for (int f = 0; f < num_edges(); ++f) {
    if (f == e) continue;
    const Edge& b = edges_[idx(f)];
    if ((b.u == a.u && b.v == a.v) || (b.u == a.v && b.v == a.u)) out.push_back(f);
  }
  return out;
}

bool HalfEdgeGraph::has_multi_edges() const {
  std::vector<std::pair<int, int>> keys;
  keys.reserve(edges_.size());
  for (const Edge& e : edges_) keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  std::sort(keys.begin(), keys.end());
  return std::adjacent_find(keys.begin(), keys.end()) != keys.end();
}

bool HalfEdgeGraph::is_connected() const {
  const int n = num_vertices();
  if (n == 0) return false;
  std::vector<int> parent(idx(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[idx(x)] != x) x = parent[idx(x)] = parent[idx(parent[idx(x)])];
    return x;
  };
  int comps = n;
  for (const Edge& e : edges_) {
    const int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[idx(a)] = b;
      --comps;
    }
  }
  return comps == 1;
}

std::vector<int> Automorphism::edge_map() const {
  std::vector<int> out(half_edge_map.size() / 2);
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = half_edge_map[2 * e] / 2;
  return out;
}

// ---------------------------------------------------------------------------

std::string StabilityProfile::name() const {
  if (flavor == StabilityFlavor::MarkedStable) return "marked";
  return require_marking_everywhere ? "oriented-strict" : "oriented";
}

StabilityProfile StabilityProfile::marked() { return {}; }

StabilityProfile StabilityProfile::oriented() {
  StabilityProfile p;
  p.flavor = StabilityFlavor::OrientedStable;
  p.min_weight0_valence = 2;
  p.forbid_passing = true;
  p.hairs_are_outgoing = true;
  p.require_outgoing = true;
  return p;
}

StabilityProfile StabilityProfile::oriented_strict() {
  StabilityProfile p = oriented();
  p.require_marking_everywhere = true;
  return p;
}

StabilityProfile StabilityProfile::from_name(const std::string& name) {
  if (name == "marked") return marked();
  if (name == "oriented") return oriented();
  if (name == "oriented-strict") return oriented_strict();
  throw PreconditionError("unknown stability profile '" + name + "'");
}

// ---------------------------------------------------------------------------

int genus(const HalfEdgeGraph& g) {
  if (!g.is_connected()) throw StructuralError("genus of a disconnected graph");
  const int b1 = g.num_edges() - g.num_vertices() + 1;
  return b1 + std::accumulate(g.weights().begin(), g.weights().end(), 0);
}

bool is_acyclic(const HalfEdgeGraph& g) {
  if (!g.is_directed()) throw PreconditionError("is_acyclic needs a directed graph");
  const int n = g.num_vertices();
  std::vector<int> indeg(idx(n), 0);
  std::vector<std::vector<int>> out(idx(n));
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) return false;
    out[idx(e.u)].push_back(e.v);
    ++indeg[idx(e.v)];
  }
  std::vector<int> stack;
  for (int v = 0; v < n; ++v)
    if (indeg[idx(v)] == 0) stack.push_back(v);
  int seen = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    ++seen;
    for (int w : out[idx(v)])
      if (--indeg[idx(w)] == 0) stack.push_back(w);
  }
  return seen == n;
}

bool is_stable(const HalfEdgeGraph& g, const StabilityProfile& p) {
  const int n = g.num_vertices();
  std::vector<int> in(idx(n), 0), out(idx(n), 0), und(idx(n), 0), hairs(idx(n), 0);
  for (const Edge& e : g.edges()) {
    if (g.is_directed()) {
      ++out[idx(e.u)];
      ++in[idx(e.v)];
    } else {
      ++und[idx(e.u)];
      ++und[idx(e.v)];
    }
  }
  for (const Marking& m : g.markings()) ++hairs[idx(m.vertex)];
  for (int v = 0; v < n; ++v) {
    const std::size_t i = idx(v);
    if (p.require_marking_everywhere && hairs[i] == 0) return false;
    if (g.weight(v) > 0) continue;
    const int val = in[i] + out[i] + und[i] + hairs[i];
    if (val < p.min_weight0_valence) return false;
    if (p.flavor != StabilityFlavor::OrientedStable) continue;
    const int outgoing = out[i] + (p.hairs_are_outgoing ? hairs[i] : 0);
    if (p.forbid_passing && val == 2 && in[i] == 1 && outgoing == 1) return false;
    if (p.require_outgoing && g.is_directed() && out[i] + hairs[i] == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Contraction contract_edge_mapped(const HalfEdgeGraph& g, int e) {
  if (e < 0 || e >= g.num_edges()) throw PreconditionError("edge id out of range");
  const Edge ce = g.edge(e);
  if (ce.u == ce.v) throw PreconditionError("contract_edge on a loop; use contract_loop");
  const int keep = std::min(ce.u, ce.v), drop = std::max(ce.u, ce.v);
  const auto partners = g.parallel_edges(e);

  Contraction c;
  c.weight_gain = static_cast<int>(partners.size());
  c.vertex_map.resize(idx(g.num_vertices()));
  for (int v = 0; v < g.num_vertices(); ++v)
    c.vertex_map[idx(v)] = v == drop ? keep : (v > drop ? v - 1 : v);
  c.merged_vertex = keep;

  std::vector<int> weights;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (v != drop) weights.push_back(g.weight(v));
  weights[idx(keep)] = g.weight(ce.u) + g.weight(ce.v) + c.weight_gain;

  std::vector<char> removed(idx(g.num_edges()), 0);
  removed[idx(e)] = 1;
  for (int f : partners) removed[idx(f)] = 1;
  std::vector<Edge> edges;
  c.edge_map.assign(idx(g.num_edges()), -1);
  for (int f = 0; f < g.num_edges(); ++f) {
    if (removed[idx(f)]) continue;
    c.edge_map[idx(f)] = static_cast<int>(edges.size());
    edges.push_back({c.vertex_map[idx(g.edge(f).u)], c.vertex_map[idx(g.edge(f).v)]});
  }
  std::vector<Marking> marks;
  for (const Marking& m : g.markings()) marks.push_back({m.label, c.vertex_map[idx(m.vertex)]});
  c.graph = HalfEdgeGraph::from_edges(std::move(weights), std::move(edges), std::move(marks),
                                      g.is_directed());
  return c;
}

HalfEdgeGraph contract_edge(const HalfEdgeGraph& g, int e) { return contract_edge_mapped(g, e).graph; }

Contraction contract_loop_mapped(const HalfEdgeGraph& g, int e) {
  if (e < 0 || e >= g.num_edges()) throw PreconditionError("edge id out of range");
  if (!g.is_loop(e)) throw PreconditionError("contract_loop on a non-loop edge");
  Contraction c;
  c.weight_gain = 1;
  c.merged_vertex = g.edge(e).u;
  c.vertex_map.resize(idx(g.num_vertices()));
  std::iota(c.vertex_map.begin(), c.vertex_map.end(), 0);
  std::vector<int> weights = g.weights();
  ++weights[idx(c.merged_vertex)];
  std::vector<Edge> edges;
  c.edge_map.assign(idx(g.num_edges()), -1);
  for (int f = 0; f < g.num_edges(); ++f) {
    if (f == e) continue;
    c.edge_map[idx(f)] = static_cast<int>(edges.size());
    edges.push_back(g.edge(f));
  }
  c.graph = HalfEdgeGraph::from_edges(std::move(weights), std::move(edges), g.markings(), g.is_directed());
  return c;
}

HalfEdgeGraph contract_loop(const HalfEdgeGraph& g, int e) { return contract_loop_mapped(g, e).graph; }

HalfEdgeGraph relabel_vertices(const HalfEdgeGraph& g, std::span<const int> perm) {
  const int n = g.num_vertices();
  if (static_cast<int>(perm.size()) != n) throw PreconditionError("relabeling has the wrong size");
  std::vector<int> weights(idx(n));
  std::vector<char> hit(idx(n), 0);
  for (int v = 0; v < n; ++v) {
    const int p = perm[idx(v)];
    if (p < 0 || p >= n || hit[idx(p)]) throw PreconditionError("relabeling is not a permutation");
    hit[idx(p)] = 1;
    weights[idx(p)] = g.weight(v);
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) edges.push_back({perm[idx(e.u)], perm[idx(e.v)]});
  std::vector<Marking> marks;
  for (const Marking& m : g.markings()) marks.push_back({m.label, perm[idx(m.vertex)]});
  return HalfEdgeGraph::from_edges(std::move(weights), std::move(edges), std::move(marks), g.is_directed());
}

int permutation_sign(std::span<const int> perm) {
  std::vector<char> seen(perm.size(), 0);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = idx(perm[j])) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

int orientation_sign(const HalfEdgeGraph& g, const Orientation& o, const Automorphism& aut) {
  if (o.kind == OrientationKind::VertexOrder) {
    if (static_cast<int>(aut.vertex_map.size()) != g.num_vertices())
      throw PreconditionError("automorphism does not match the vertex count");
    return permutation_sign(aut.vertex_map);
  }
  if (static_cast<int>(aut.half_edge_map.size()) != g.num_half_edges())
    throw PreconditionError("automorphism does not match the half-edge count");
  const auto em = aut.edge_map();
  return permutation_sign(em);
}

std::string describe(const HalfEdgeGraph& g) {
  std::ostringstream os;
  os << "V=" << g.num_vertices();
  bool pos = false;
  for (int w : g.weights()) pos = pos || w > 0;
  if (pos) {
    os << " w=[";
    for (int v = 0; v < g.num_vertices(); ++v) os << (v ? "," : "") << g.weight(v);
    os << ']';
  }
  os << " E=[";
  for (int e = 0; e < g.num_edges(); ++e)
    os << (e ? "," : "") << g.edge(e).u << (g.is_directed() ? '>' : '-') << g.edge(e).v;
  os << "] S={";
  for (std::size_t i = 0; i < g.markings().size(); ++i)
    os << (i ? "," : "") << g.markings()[i].label << ':' << g.markings()[i].vertex;
  os << '}';
  return os.str();
}

}  // namespace ogclab
