#include "ogclab/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <numeric>
#include <set>

#include "ogclab/errors.hpp"
#include "ogclab/parallel.hpp"

namespace ogclab {

namespace {

constexpr const char* kGeneratorVersion = "ogclab-enumerate/1";

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void check_deadline(const GenerateOptions& opts) {
  if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
    throw ResourceCapError("time limit reached during enumeration");
}

void check_cells(const GenerateOptions& opts, std::uint64_t count) {
  if (opts.max_cells != 0 && count > opts.max_cells)
    throw ResourceCapError("cell cap of " + std::to_string(opts.max_cells) + " exceeded during enumeration");
}

std::vector<int> normalized_labels(const std::vector<int>& labels) {
  std::vector<int> s = labels;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw PreconditionError("duplicate marking labels");
  for (int l : s)
    if (l < 0 || l > 65535) throw PreconditionError("marking labels must lie in [0, 65535]");
  return s;
}

CatalogEntry make_entry(const HalfEdgeGraph& g, Flavor flavor) {
  CanonicalForm cf = canonical_form(g);
  CatalogEntry e;
  e.graph = std::move(cf.graph);
  e.code = std::move(cf.code);
  e.aut_order = cf.aut_order;
  e.zero_generator = flavor == Flavor::Marked ? cf.odd_on_edges : cf.odd_on_vertices;
  return e;
}

// All splittings of vertex x into x and a new vertex joined by an edge.
void vertex_splits(const HalfEdgeGraph& g, int x, int min_part, std::vector<HalfEdgeGraph>& out) {
  struct Half {
    int edge;  // -1 for a hair
    int end;   // 0 = u side, 1 = v side; hair: index into markings
  };
  std::vector<Half> halves;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.edge(e).u == x) halves.push_back({e, 0});
    if (g.edge(e).v == x) halves.push_back({e, 1});
  }
  for (int m = 0; m < g.num_markings(); ++m)
    if (g.markings()[idx(m)].vertex == x) halves.push_back({-1, m});
  const int k = static_cast<int>(halves.size());
  if (k < 2 * min_part || k > 30) return;
  const int n = g.num_vertices();
  for (std::uint32_t mask = 1; mask < (1u << k); mask += 2) {
    const int in_a = std::popcount(mask);
    if (in_a < min_part || k - in_a < min_part) continue;
    std::vector<Edge> edges = g.edges();
    std::vector<Marking> marks = g.markings();
    for (int i = 0; i < k; ++i) {
      if (mask >> i & 1u) continue;
      const Half& h = halves[idx(i)];
      if (h.edge < 0) marks[idx(h.end)].vertex = n;
      else if (h.end == 0) edges[idx(h.edge)].u = n;
      else edges[idx(h.edge)].v = n;
    }
    edges.push_back({x, n});
    std::vector<int> w = g.weights();
    w.push_back(0);
    out.push_back(HalfEdgeGraph::from_edges(std::move(w), std::move(edges), std::move(marks), false));
  }
}

GraphCatalog empty_catalog(Flavor flavor, int g, std::vector<int> labels, const StabilityProfile& profile) {
  GraphCatalog c;
  c.flavor = flavor;
  c.genus = g;
  c.labels = std::move(labels);
  c.profile = profile;
  c.generator_version = kGeneratorVersion;
  return c;
}

void finish_catalog(GraphCatalog& cat, std::vector<CatalogEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) { return a.code < b.code; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].code == entries[i - 1].code)
      throw InternalCheckError("duplicate isomorphism class in generated catalog: " + describe(entries[i].graph));
  for (auto& e : entries) {
    const int key = cat.stratum_of(e.graph);
    cat.strata[key].push_back(std::move(e));
  }
  cat.reindex();
}

// Signed edge permutations of the skeleton: act[e] = image half-edge of 2e.
using EdgeAction = std::vector<int>;

std::vector<EdgeAction> edge_action_group(const HalfEdgeGraph& sk) {
  const CanonicalForm cf = canonical_form(sk);
  const int ne = sk.num_edges();
  auto normalize = [&](EdgeAction a) {
    for (int e = 0; e < ne; ++e)
      if (sk.is_loop(e)) a[idx(e)] &= ~1;
    return a;
  };
  std::vector<EdgeAction> gens;
  for (const auto& aut : cf.generators) {
    EdgeAction a(idx(ne));
    for (int e = 0; e < ne; ++e) a[idx(e)] = aut.half_edge_map[idx(2 * e)];
    gens.push_back(normalize(std::move(a)));
  }
  EdgeAction id(idx(ne));
  for (int e = 0; e < ne; ++e) id[idx(e)] = 2 * e;
  std::set<EdgeAction> group{id};
  std::vector<EdgeAction> frontier{id};
  while (!frontier.empty()) {
    std::vector<EdgeAction> next;
    for (const auto& x : frontier)
      for (const auto& gen : gens) {
        EdgeAction y(idx(ne));
        for (int e = 0; e < ne; ++e) {
          const int h = x[idx(e)];
          const int img = gen[idx(h / 2)];
          y[idx(e)] = (h & 1) ? (img ^ 1) : img;
        }
        y = normalize(std::move(y));
        if (group.insert(y).second) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  group.erase(id);
  return {group.begin(), group.end()};
}

// Edge choices: 0 = subdivide by a double source, 1 = u->v, 2 = v->u.
bool is_orbit_minimal(const std::vector<int>& choice, const std::vector<EdgeAction>& group) {
  const std::size_t ne = choice.size();
  std::vector<int> img(ne);
  for (const auto& a : group) {
    for (std::size_t e = 0; e < ne; ++e) {
      int c = choice[e];
      if ((a[e] & 1) && c != 0) c = 3 - c;
      img[idx(a[e] / 2)] = c;
    }
    if (img < choice) return false;
  }
  return true;
}

HalfEdgeGraph orient_skeleton(const HalfEdgeGraph& sk, const std::vector<int>& choice,
                              const std::vector<char>& detached) {
  int n = sk.num_vertices();
  std::vector<Edge> edges;
  for (int e = 0; e < sk.num_edges(); ++e) {
    const Edge& ed = sk.edge(e);
    switch (choice[idx(e)]) {
      case 1: edges.push_back({ed.u, ed.v}); break;
      case 2: edges.push_back({ed.v, ed.u}); break;
      default: {
        const int s = n++;
        edges.push_back({s, ed.u});
        edges.push_back({s, ed.v});
      }
    }
  }
  std::vector<Marking> marks;
  for (int m = 0; m < sk.num_markings(); ++m) {
    const Marking& mk = sk.markings()[idx(m)];
    if (detached[idx(m)]) {
      const int s = n++;
      edges.push_back({s, mk.vertex});
      marks.push_back({mk.label, s});
    } else {
      marks.push_back(mk);
    }
  }
  return HalfEdgeGraph::from_edges(std::vector<int>(idx(n), 0), std::move(edges), std::move(marks), true);
}

bool directed_part_acyclic(const HalfEdgeGraph& sk, const std::vector<int>& choice) {
  const int n = sk.num_vertices();
  std::vector<int> indeg(idx(n), 0);
  std::vector<std::vector<int>> out(idx(n));
  for (int e = 0; e < sk.num_edges(); ++e) {
    const int c = choice[idx(e)];
    if (c == 0) continue;
    const int a = c == 1 ? sk.edge(e).u : sk.edge(e).v;
    const int b = c == 1 ? sk.edge(e).v : sk.edge(e).u;
    out[idx(a)].push_back(b);
    ++indeg[idx(b)];
  }
  std::vector<int> st;
  for (int v = 0; v < n; ++v)
    if (indeg[idx(v)] == 0) st.push_back(v);
  int seen = 0;
  while (!st.empty()) {
    const int v = st.back();
    st.pop_back();
    ++seen;
    for (int w : out[idx(v)])
      if (--indeg[idx(w)] == 0) st.push_back(w);
  }
  return seen == n;
}

// Calls fn(graph) once per isomorphism class of oriented graphs over skeleton sk.
template <class Fn>
void visit_orientations(const HalfEdgeGraph& sk, const StabilityProfile& profile, const GenerateOptions& opts,
                        Fn&& fn) {
  const int ne = sk.num_edges();
  const int n = sk.num_vertices();
  const int nm = sk.num_markings();
  const auto group = edge_action_group(sk);
  std::vector<int> choice(idx(ne), 0);
  std::vector<char> detached(idx(nm), 0);
  std::vector<int> hairs_at(idx(n), 0);
  for (const Marking& m : sk.markings()) ++hairs_at[idx(m.vertex)];

  auto emit_hairs = [&]() {
    // vertices without an outgoing skeleton edge keep at least one hair
    std::vector<char> has_out(idx(n), 0);
    for (int e = 0; e < ne; ++e) {
      if (choice[idx(e)] == 1) has_out[idx(sk.edge(e).u)] = 1;
      if (choice[idx(e)] == 2) has_out[idx(sk.edge(e).v)] = 1;
    }
    for (int v = 0; v < n; ++v)
      if (!has_out[idx(v)] && hairs_at[idx(v)] == 0) return;
    std::vector<int> attached(idx(n));
    for (std::uint32_t mask = 0; mask < (1u << nm); ++mask) {
      std::fill(attached.begin(), attached.end(), 0);
      for (int m = 0; m < nm; ++m) {
        detached[idx(m)] = static_cast<char>(mask >> m & 1u);
        if (!detached[idx(m)]) ++attached[idx(sk.markings()[idx(m)].vertex)];
      }
      bool ok = true;
      for (int v = 0; v < n && ok; ++v) ok = has_out[idx(v)] || attached[idx(v)] > 0;
      if (!ok) continue;
      HalfEdgeGraph og = orient_skeleton(sk, choice, detached);
      if (!is_stable(og, profile) || !is_acyclic(og)) continue;
      fn(og);
    }
  };

  std::function<void(int)> rec = [&](int e) {
    if (e == ne) {
      if (!directed_part_acyclic(sk, choice)) return;
      if (!group.empty() && !is_orbit_minimal(choice, group)) return;
      emit_hairs();
      return;
    }
    if (sk.is_loop(e)) {
      choice[idx(e)] = 0;
      rec(e + 1);
      return;
    }
    for (int c = 0; c < 3; ++c) {
      choice[idx(e)] = c;
      rec(e + 1);
    }
    choice[idx(e)] = 0;
  };
  check_deadline(opts);
  rec(0);
}

std::vector<const HalfEdgeGraph*> skeleton_list(const GraphCatalog& skeletons) {
  std::vector<const HalfEdgeGraph*> sks;
  for (const auto& [k, list] : skeletons.strata)
    for (const auto& e : list) sks.push_back(&e.graph);
  return sks;
}

}  // namespace

std::string flavor_name(Flavor f) { return f == Flavor::Marked ? "marked" : "oriented"; }

Flavor flavor_from_name(const std::string& name) {
  if (name == "marked") return Flavor::Marked;
  if (name == "oriented") return Flavor::Oriented;
  throw PreconditionError("unknown flavor '" + name + "'");
}

std::size_t GraphCatalog::size() const {
  std::size_t n = 0;
  for (const auto& [k, v] : strata) n += v.size();
  return n;
}

std::optional<CatalogRef> GraphCatalog::find(const std::string& code) const {
  auto it = index_.find(code);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const CatalogEntry& GraphCatalog::at(CatalogRef r) const { return strata.at(r.stratum).at(idx(r.index)); }

int GraphCatalog::stratum_of(const HalfEdgeGraph& g) const {
  return flavor == Flavor::Marked ? g.num_edges() : g.num_vertices();
}

void GraphCatalog::reindex() {
  index_.clear();
  index_.reserve(size());
  for (const auto& [k, list] : strata)
    for (std::size_t i = 0; i < list.size(); ++i) index_.emplace(list[i].code, CatalogRef{k, static_cast<int>(i)});
}

void check_stable_range(int g, std::size_t num_labels) {
  if (g < 0) throw DomainError("genus must be non-negative");
  if (2 * g + static_cast<int>(num_labels) - 2 <= 0)
    throw DomainError("(g, |S|) = (" + std::to_string(g) + ", " + std::to_string(num_labels) +
                      ") violates the stability inequality 2g + |S| - 2 > 0");
}

int max_marked_vertices(int g, std::size_t num_labels) { return 2 * g - 2 + static_cast<int>(num_labels); }
int max_marked_edges(int g, std::size_t num_labels) { return 3 * g - 3 + static_cast<int>(num_labels); }

GraphCatalog generate_marked(int g, const std::vector<int>& labels_in, const StabilityProfile& profile,
                             const GenerateOptions& opts) {
  check_stable_range(g, labels_in.size());
  if (profile.flavor != StabilityFlavor::MarkedStable)
    throw PreconditionError("generate_marked needs a marked stability profile");
  const std::vector<int> labels = normalized_labels(labels_in);
  GraphCatalog cat = empty_catalog(Flavor::Marked, g, labels, profile);
  const int min_part = std::max(1, profile.min_weight0_valence - 1);

  std::vector<Marking> marks;
  for (int l : labels) marks.push_back({l, 0});
  HalfEdgeGraph bouquet =
      HalfEdgeGraph::from_edges({0}, std::vector<Edge>(idx(g), Edge{0, 0}), std::move(marks), false);
  if (!is_stable(bouquet, profile)) {
    finish_catalog(cat, {});
    return cat;
  }

  std::vector<CatalogEntry> all;
  std::vector<HalfEdgeGraph> level{canonical_form(bouquet, {false}).graph};
  const int max_v = max_marked_vertices(g, labels.size());
  for (int nv = 1; !level.empty(); ++nv) {
    check_deadline(opts);
    if (nv > max_v) throw InternalCheckError("vertex-count bound exceeded during marked enumeration");
    std::vector<CatalogEntry> entries(level.size());
    parallel_for(level.size(), opts.threads, [&](std::size_t i) { entries[i] = make_entry(level[i], Flavor::Marked); });
    for (auto& e : entries) all.push_back(std::move(e));
    check_cells(opts, all.size());

    std::vector<std::vector<std::pair<std::string, HalfEdgeGraph>>> found(level.size());
    parallel_for(level.size(), opts.threads, [&](std::size_t i) {
      std::vector<HalfEdgeGraph> splits;
      for (int x = 0; x < level[i].num_vertices(); ++x) vertex_splits(level[i], x, min_part, splits);
      std::set<std::string> local;
      for (const auto& s : splits) {
        if (!is_stable(s, profile)) continue;
        CanonicalForm cf = canonical_form(s, {false});
        if (local.insert(cf.code).second) found[i].emplace_back(std::move(cf.code), std::move(cf.graph));
      }
    });
    std::map<std::string, HalfEdgeGraph> next;
    for (auto& list : found)
      for (auto& [code, graph] : list) next.emplace(std::move(code), std::move(graph));
    level.clear();
    for (auto& [code, graph] : next) level.push_back(std::move(graph));
  }
  finish_catalog(cat, std::move(all));
  return cat;
}

GraphCatalog generate_oriented(int g, const std::vector<int>& labels_in, const StabilityProfile& profile,
                               const GenerateOptions& opts) {
  check_stable_range(g, labels_in.size());
  if (profile.flavor != StabilityFlavor::OrientedStable)
    throw PreconditionError("generate_oriented needs an oriented stability profile");
  const std::vector<int> labels = normalized_labels(labels_in);
  GraphCatalog cat = empty_catalog(Flavor::Oriented, g, labels, profile);
  if (labels.empty()) {
    // every acyclic graph has a sink, which would need a hair
    finish_catalog(cat, {});
    return cat;
  }
  // Smoothing the bivalent sources of a stable oriented graph yields a stable
  // marked graph (its skeleton); conversely every oriented graph arises from
  // exactly one skeleton class by choosing per edge a direction or a
  // subdividing double source, and per hair whether it sits on its own source.
  GenerateOptions skel_opts = opts;
  skel_opts.max_cells = 0;
  const GraphCatalog skeletons = generate_marked(g, labels, StabilityProfile::marked(), skel_opts);
  const auto sks = skeleton_list(skeletons);

  std::atomic<std::uint64_t> produced{0};
  std::vector<std::vector<CatalogEntry>> per(sks.size());
  parallel_for(sks.size(), opts.threads, [&](std::size_t i) {
    visit_orientations(*sks[i], profile, opts, [&](const HalfEdgeGraph& og) {
      per[i].push_back(make_entry(og, Flavor::Oriented));
      check_cells(opts, ++produced);
    });
  });
  std::vector<CatalogEntry> all;
  all.reserve(produced.load());
  for (auto& list : per) {
    for (auto& e : list) all.push_back(std::move(e));
    list.clear();
    list.shrink_to_fit();
  }
  finish_catalog(cat, std::move(all));
  return cat;
}

void for_each_oriented_class(int g, const std::vector<int>& labels_in, const StabilityProfile& profile,
                             const GenerateOptions& opts, const std::function<void(const HalfEdgeGraph&)>& fn) {
  check_stable_range(g, labels_in.size());
  if (profile.flavor != StabilityFlavor::OrientedStable)
    throw PreconditionError("for_each_oriented_class needs an oriented stability profile");
  const std::vector<int> labels = normalized_labels(labels_in);
  if (labels.empty()) return;
  GenerateOptions skel_opts = opts;
  skel_opts.max_cells = 0;
  const GraphCatalog skeletons = generate_marked(g, labels, StabilityProfile::marked(), skel_opts);
  const auto sks = skeleton_list(skeletons);
  std::atomic<std::uint64_t> produced{0};
  parallel_for(sks.size(), opts.threads, [&](std::size_t i) {
    visit_orientations(*sks[i], profile, opts, [&](const HalfEdgeGraph& og) {
      check_cells(opts, ++produced);
      fn(og);
    });
  });
}

GraphCatalog generate(Flavor flavor, int g, const std::vector<int>& labels, const StabilityProfile& profile,
                      const GenerateOptions& opts) {
  return flavor == Flavor::Marked ? generate_marked(g, labels, profile, opts)
                                  : generate_oriented(g, labels, profile, opts);
}

// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(idx(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[idx(x)] != x) x = parent[idx(x)] = parent[idx(parent[idx(x)])];
    return x;
  }
};

// Calls visit(edges, uf) for every acyclic subset of non-loop edges.
template <class Visit>
void acyclic_subsets(const HalfEdgeGraph& g, Visit&& visit) {
  std::vector<int> candidates;
  for (int e = 0; e < g.num_edges(); ++e)
    if (!g.is_loop(e)) candidates.push_back(e);
  std::vector<int> chosen;
  std::function<void(std::size_t, UnionFind)> rec = [&](std::size_t i, UnionFind uf) {
    if (i == candidates.size()) {
      visit(chosen, uf);
      return;
    }
    rec(i + 1, uf);
    const Edge& ed = g.edge(candidates[i]);
    const int a = uf.find(ed.u), b = uf.find(ed.v);
    if (a == b) return;
    uf.parent[idx(a)] = b;
    chosen.push_back(candidates[i]);
    rec(i + 1, uf);
    chosen.pop_back();
  };
  rec(0, UnionFind(g.num_vertices()));
}

}  // namespace

std::vector<SpanningForest> spanning_forests(const HalfEdgeGraph& g) {
  if (g.num_markings() == 0) throw PreconditionError("spanning_forests needs at least one marking");
  std::vector<SpanningForest> out;
  const int n = g.num_vertices();
  acyclic_subsets(g, [&](const std::vector<int>& edges, UnionFind& uf) {
    std::vector<int> count(idx(n), 0), label(idx(n), -1);
    for (const Marking& m : g.markings()) {
      const int r = uf.find(m.vertex);
      ++count[idx(r)];
      label[idx(r)] = m.label;
    }
    SpanningForest f;
    f.component_label.resize(idx(n));
    for (int v = 0; v < n; ++v) {
      const int r = uf.find(v);
      if (count[idx(r)] != 1) return;
      f.component_label[idx(v)] = label[idx(r)];
    }
    f.edges = edges;
    std::sort(f.edges.begin(), f.edges.end());
    out.push_back(std::move(f));
  });
  return out;
}

std::vector<RootedForest> rooted_spanning_forests(const HalfEdgeGraph& g) {
  if (g.num_markings() == 0) throw PreconditionError("rooted_spanning_forests needs at least one marking");
  std::vector<RootedForest> out;
  const int n = g.num_vertices();
  acyclic_subsets(g, [&](const std::vector<int>& edges, UnionFind& uf) {
    std::map<int, std::vector<int>> labels_of;  // component root -> labels
    for (const Marking& m : g.markings()) labels_of[uf.find(m.vertex)].push_back(m.label);
    for (int v = 0; v < n; ++v)
      if (!labels_of.count(uf.find(v))) return;
    std::vector<int> comps;
    for (const auto& [r, l] : labels_of) comps.push_back(r);
    std::vector<int> pick(comps.size(), 0);
    std::vector<int> sorted_edges = edges;
    std::sort(sorted_edges.begin(), sorted_edges.end());
    for (;;) {
      RootedForest f;
      f.edges = sorted_edges;
      std::map<int, int> root_label;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        const int l = labels_of[comps[c]][idx(pick[c])];
        root_label[comps[c]] = l;
        f.root_labels.push_back(l);
      }
      std::sort(f.root_labels.begin(), f.root_labels.end());
      f.root_of.resize(idx(n));
      for (int v = 0; v < n; ++v) f.root_of[idx(v)] = root_label[uf.find(v)];
      out.push_back(std::move(f));
      std::size_t c = 0;
      for (; c < comps.size(); ++c) {
        if (++pick[c] < static_cast<int>(labels_of[comps[c]].size())) break;
        pick[c] = 0;
      }
      if (c == comps.size()) break;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------

std::string status_name(ContractionStatus s) {
  switch (s) {
    case ContractionStatus::InLocus: return "in-locus";
    case ContractionStatus::ExitsLoop: return "exits weight-0 locus (loop)";
    case ContractionStatus::ExitsParallel: return "exits weight-0 locus (parallel edges)";
    case ContractionStatus::ExitsCycle: return "directed cycle";
    case ContractionStatus::ExitsUnstable: return "unstable";
    case ContractionStatus::NotInCatalog: return "not in catalog";
  }
  return "?";
}

std::vector<ContractionTarget> contraction_targets(const HalfEdgeGraph& g, const GraphCatalog& catalog) {
  std::vector<ContractionTarget> out;
  for (int e = 0; e < g.num_edges(); ++e) {
    ContractionTarget t;
    t.edge = e;
    if (g.is_loop(e)) {
      t.status = ContractionStatus::ExitsLoop;
    } else if (!g.parallel_edges(e).empty()) {
      t.status = ContractionStatus::ExitsParallel;
    } else {
      Contraction c = contract_edge_mapped(g, e);
      if (g.is_directed() && !is_acyclic(c.graph)) {
        t.status = ContractionStatus::ExitsCycle;
      } else if (!is_stable(c.graph, catalog.profile)) {
        t.status = ContractionStatus::ExitsUnstable;
      } else {
        CanonicalForm cf = canonical_form(c.graph, {false});
        t.target = catalog.find(cf.code);
        t.status = t.target ? ContractionStatus::InLocus : ContractionStatus::NotInCatalog;
        t.vertex_map.resize(idx(g.num_vertices()));
        for (int v = 0; v < g.num_vertices(); ++v) t.vertex_map[idx(v)] = cf.vertex_map[idx(c.vertex_map[idx(v)])];
        t.edge_map.resize(idx(g.num_edges()));
        for (int f = 0; f < g.num_edges(); ++f) {
          const int m = c.edge_map[idx(f)];
          t.edge_map[idx(f)] = m < 0 ? -1 : cf.edge_map[idx(m)];
        }
        t.merged_vertex = cf.vertex_map[idx(c.merged_vertex)];
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace ogclab
