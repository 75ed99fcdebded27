#include "ogclab/zivkovic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ogclab/canonical.hpp"
#include "ogclab/errors.hpp"
#include "ogclab/parallel.hpp"

namespace ogclab {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void check_forest(const HalfEdgeGraph& g, const RootedForest& tau) {
  const int n = g.num_vertices();
  std::vector<int> parent(idx(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[idx(x)] != x) x = parent[idx(x)] = parent[idx(parent[idx(x)])];
    return x;
  };
  for (int e : tau.edges) {
    if (e < 0 || e >= g.num_edges()) throw PreconditionError("forest edge out of range");
    if (g.is_loop(e)) throw PreconditionError("a loop cannot belong to a forest");
    const int a = find(g.edge(e).u), b = find(g.edge(e).v);
    if (a == b) throw PreconditionError("forest edges contain a cycle");
    parent[idx(a)] = b;
  }
  if (static_cast<int>(tau.root_of.size()) != n) throw PreconditionError("root assignment has the wrong size");
  std::map<int, int> root_label_of_comp;
  for (int v = 0; v < n; ++v) {
    auto [it, fresh] = root_label_of_comp.emplace(find(v), tau.root_of[idx(v)]);
    if (!fresh && it->second != tau.root_of[idx(v)]) throw PreconditionError("component has two roots");
  }
  for (const auto& [comp, label] : root_label_of_comp) {
    bool found = false;
    for (const Marking& m : g.markings()) found = found || (m.label == label && find(m.vertex) == comp);
    if (!found) throw PreconditionError("root marking does not lie in its component");
  }
}

}  // namespace

ForestOrientedGraph forest_orient(const HalfEdgeGraph& g, const RootedForest& tau) {
  if (g.is_directed()) throw PreconditionError("forest_orient needs an undirected marked graph");
  check_forest(g, tau);
  const int n = g.num_vertices();
  ForestOrientedGraph f;
  f.source = g;
  f.forest = tau;
  f.edge_cell.assign(idx(g.num_edges()), -1);
  f.hair_cell.assign(idx(g.num_markings()), -1);

  std::vector<std::vector<std::pair<int, int>>> adj(idx(n));
  for (int e : tau.edges) {
    adj[idx(g.edge(e).u)].emplace_back(g.edge(e).v, e);
    adj[idx(g.edge(e).v)].emplace_back(g.edge(e).u, e);
  }
  // Flow toward the root: parent_edge[v] leads from v one step closer.
  std::vector<int> parent_vertex(idx(n), -1), parent_edge(idx(n), -1);
  std::vector<char> seen(idx(n), 0);
  for (const Marking& m : g.markings()) {
    if (std::find(tau.root_labels.begin(), tau.root_labels.end(), m.label) == tau.root_labels.end()) continue;
    if (tau.root_of[idx(m.vertex)] != m.label) continue;
    f.root_vertices.push_back(m.vertex);
    std::vector<int> stack{m.vertex};
    seen[idx(m.vertex)] = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (auto [y, e] : adj[idx(x)]) {
        if (seen[idx(y)]) continue;
        seen[idx(y)] = 1;
        parent_vertex[idx(y)] = x;
        parent_edge[idx(y)] = e;
        stack.push_back(y);
      }
    }
  }
  std::vector<char> in_forest(idx(g.num_edges()), 0);
  for (int e : tau.edges) in_forest[idx(e)] = 1;
  int nv = n;
  std::vector<Edge> edges;
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (in_forest[idx(e)]) {
      const int child = parent_edge[idx(ed.u)] == e ? ed.u : ed.v;
      edges.push_back({child, parent_vertex[idx(child)]});
      f.edge_cell[idx(e)] = child;
    } else {
      const int s = nv++;
      edges.push_back({s, ed.u});
      edges.push_back({s, ed.v});
      f.edge_cell[idx(e)] = s;
    }
  }
  std::vector<Marking> marks;
  for (int i = 0; i < g.num_markings(); ++i) {
    const Marking& m = g.markings()[idx(i)];
    const bool is_root = tau.root_of[idx(m.vertex)] == m.label;
    if (is_root) {
      marks.push_back(m);
      f.hair_cell[idx(i)] = m.vertex;
    } else {
      const int s = nv++;
      edges.push_back({s, m.vertex});
      marks.push_back({m.label, s});
      f.hair_cell[idx(i)] = s;
    }
  }
  f.oriented = HalfEdgeGraph::from_edges(std::vector<int>(idx(nv), 0), std::move(edges), std::move(marks), true);
  return f;
}

ForestOrientedGraph forest_orient(const HalfEdgeGraph& g, const SpanningForest& tau) {
  RootedForest r;
  r.edges = tau.edges;
  r.root_of = tau.component_label;
  r.root_labels = tau.component_label;
  std::sort(r.root_labels.begin(), r.root_labels.end());
  r.root_labels.erase(std::unique(r.root_labels.begin(), r.root_labels.end()), r.root_labels.end());
  return forest_orient(g, r);
}

std::string convention_name(PsiConvention c) {
  switch (c) {
    case PsiConvention::ReversedImages: return "reversed-images";
    case PsiConvention::ImagesInOrder: return "images-in-order";
    case PsiConvention::HairsFirst: return "hairs-first";
    case PsiConvention::ReversedBlocks: return "reversed-blocks";
  }
  return "?";
}

std::vector<PsiConvention> all_conventions() {
  return {PsiConvention::ReversedImages, PsiConvention::ImagesInOrder, PsiConvention::HairsFirst,
          PsiConvention::ReversedBlocks};
}

std::vector<int> image_order(const ForestOrientedGraph& f, PsiConvention c) {
  std::vector<int> e = f.edge_cell, h = f.hair_cell, out;
  switch (c) {
    case PsiConvention::ReversedImages:
      out = e;
      out.insert(out.end(), h.begin(), h.end());
      std::reverse(out.begin(), out.end());
      break;
    case PsiConvention::ImagesInOrder:
      out = e;
      out.insert(out.end(), h.begin(), h.end());
      break;
    case PsiConvention::HairsFirst:
      out = h;
      out.insert(out.end(), e.begin(), e.end());
      break;
    case PsiConvention::ReversedBlocks:
      std::reverse(e.begin(), e.end());
      std::reverse(h.begin(), h.end());
      out = e;
      out.insert(out.end(), h.begin(), h.end());
      break;
  }
  return out;
}

SparseIntMatrix PsiFamily::at(int k, const GradedComplex& marked, const GradedComplex& oriented) const {
  auto it = blocks.find(k);
  if (it != blocks.end()) return it->second;
  return SparseIntMatrix(oriented.dim(k + shift), marked.dim(k));
}

PsiFamily psi_matrix(const GradedComplex& marked, const GradedComplex& oriented, PsiConvention convention,
                     int threads) {
  if (marked.flavor != Flavor::Marked || oriented.flavor != Flavor::Oriented)
    throw PreconditionError("psi_matrix needs a marked and an oriented complex");
  if (marked.genus != oriented.genus || marked.labels != oriented.labels)
    throw PreconditionError("psi_matrix: complexes built from different (g, S)");
  PsiFamily psi;
  psi.convention = convention;
  psi.shift = static_cast<int>(marked.labels.size());
  for (const auto& [k, list] : marked.basis) {
    const int target_degree = k + psi.shift;
    std::vector<std::vector<Triplet>> cols(list.size());
    parallel_for(list.size(), threads, [&](std::size_t i) {
      const HalfEdgeGraph& g = marked.generator(k, static_cast<int>(i)).graph;
      for (const RootedForest& tau : rooted_spanning_forests(g)) {
        const ForestOrientedGraph f = forest_orient(g, tau);
        if (f.oriented.num_vertices() != target_degree)
          throw InternalCheckError("forest image has " + std::to_string(f.oriented.num_vertices()) +
                                   " vertices, expected " + std::to_string(target_degree));
        const CanonicalForm cf = canonical_form(f.oriented, {false});
        const auto ref = oriented.catalog->find(cf.code);
        if (!ref) throw InternalCheckError("forest image missing from the oriented catalog: " + describe(f.oriented));
        const auto pos = oriented.position(cf.code);
        if (!pos) continue;  // zero generator
        std::vector<int> seq;
        for (int v : image_order(f, convention)) seq.push_back(cf.vertex_map[idx(v)]);
        cols[i].push_back({pos->second, static_cast<int>(i), permutation_sign(seq)});
      }
    });
    std::vector<Triplet> all;
    for (auto& c : cols) all.insert(all.end(), c.begin(), c.end());
    psi.blocks.emplace(k, SparseIntMatrix::from_triplets(oriented.dim(target_degree), static_cast<int>(list.size()), all));
  }
  return psi;
}

namespace {

std::vector<std::pair<std::string, long>> expand_column(const SparseIntMatrix& m, int col, const GradedComplex& c,
                                                        int degree) {
  std::vector<std::pair<std::string, long>> out;
  for (const auto& e : m.entries())
    if (e.col == col) out.emplace_back(describe(c.generator(degree, e.row).graph), static_cast<long>(e.num));
  return out;
}

}  // namespace

ChainMapReport verify_chain_map(const PsiFamily& psi, const GradedComplex& marked, const GradedComplex& oriented) {
  ChainMapReport rep;
  rep.convention = psi.convention;
  if (marked.basis.empty()) return rep;
  const int n = psi.shift;
  int eps = 0;
  std::vector<std::pair<int, std::pair<SparseIntMatrix, SparseIntMatrix>>> sides;
  for (int k = marked.min_degree(); k <= marked.max_degree(); ++k) {
    // C^marked_k -> C^oriented_{k+n-1}
    const SparseIntMatrix lhs = multiply(oriented.d(k + n), psi.at(k, marked, oriented));
    const SparseIntMatrix rhs = multiply(psi.at(k - 1, marked, oriented), marked.d(k));
    ChainMapReport::Degree d;
    d.k = k;
    d.lhs_zero = lhs.is_zero();
    if (lhs.is_zero() && rhs.is_zero()) d.sign = 0;
    else if (lhs == rhs) d.sign = 1;
    else if (lhs == rhs.negated()) d.sign = -1;
    else d.sign = 2;
    if (d.sign == 1 || d.sign == -1) {
      if (eps == 0) eps = d.sign;
      else if (eps != d.sign) rep.ok = false;
    }
    if (d.sign == 2) rep.ok = false;
    rep.degrees.push_back(d);
    sides.emplace_back(k, std::make_pair(lhs, rhs));
  }
  rep.epsilon = eps;
  if (rep.ok) return rep;
  // Locate the minimal offending column under the dominant sign.
  const int use = eps == 0 ? 1 : eps;
  for (const auto& [k, lr] : sides) {
    const SparseIntMatrix diff = add(lr.first, use == 1 ? lr.second.negated() : lr.second);
    if (diff.is_zero()) continue;
    int col = diff.entries().front().col;
    for (const auto& e : diff.entries()) col = std::min(col, e.col);
    rep.bad_degree = k;
    rep.bad_column = col;
    rep.bad_generator = describe(marked.generator(k, col).graph);
    rep.lhs_expansion = expand_column(lr.first, col, oriented, k + n - 1);
    rep.rhs_expansion = expand_column(use == 1 ? lr.second : lr.second.negated(), col, oriented, k + n - 1);
    break;
  }
  return rep;
}

std::pair<PsiFamily, ChainMapReport> select_psi_convention(const GradedComplex& marked, const GradedComplex& oriented,
                                                           int threads) {
  std::optional<std::pair<PsiFamily, ChainMapReport>> first;
  for (PsiConvention c : all_conventions()) {
    PsiFamily psi = psi_matrix(marked, oriented, c, threads);
    ChainMapReport rep = verify_chain_map(psi, marked, oriented);
    if (rep.ok) return {std::move(psi), std::move(rep)};
    if (!first) first.emplace(std::move(psi), std::move(rep));
  }
  return std::move(*first);
}

SparseIntMatrix cone_differential(const PsiFamily& psi, const GradedComplex& marked, const GradedComplex& oriented,
                                  int epsilon, int m) {
  const int n = psi.shift;
  const int sgn = epsilon == -1 ? 1 : -1;  // -epsilon, with epsilon = 0 read as +1
  const int a0 = marked.dim(m - 1 - n), a1 = marked.dim(m - 2 - n);
  const int b0 = oriented.dim(m), b1 = oriented.dim(m - 1);
  std::vector<Triplet> t;
  const SparseIntMatrix da = marked.d(m - 1 - n), p = psi.at(m - 1 - n, marked, oriented), db = oriented.d(m);
  for (const auto& e : da.entries()) t.push_back({e.row, e.col, sgn * e.num});
  for (const auto& e : p.entries()) t.push_back({a1 + e.row, e.col, e.num});
  for (const auto& e : db.entries()) t.push_back({a1 + e.row, a0 + e.col, e.num});
  return SparseIntMatrix::from_triplets(a1 + b1, a0 + b0, t);
}

QuasiIsoReport verify_quasi_iso(const PsiFamily& psi, const GradedComplex& marked, const GradedComplex& oriented,
                                int epsilon, const BettiOptions& opts) {
  QuasiIsoReport rep;
  rep.marked_betti = betti(marked, opts);
  rep.oriented_betti = betti(oriented, opts);
  rep.betti_match = shifted_equal(rep.marked_betti, rep.oriented_betti);
  const int n = psi.shift;
  int lo = 0, hi = -1;
  bool any = false;
  auto widen = [&](int a, int b) {
    if (a > b) return;
    lo = any ? std::min(lo, a) : a;
    hi = any ? std::max(hi, b) : b;
    any = true;
  };
  if (!marked.basis.empty()) widen(marked.min_degree() + n + 1, marked.max_degree() + n + 1);
  if (!oriented.basis.empty()) widen(oriented.min_degree(), oriented.max_degree());
  std::map<int, int> rk;
  for (int m = lo; m <= hi + 1 && any; ++m) rk[m] = rank(cone_differential(psi, marked, oriented, epsilon, m), opts.strategy);
  for (int m = lo; m <= hi && any; ++m) {
    QuasiIsoReport::ConeDegree d;
    d.m = m;
    d.dim = marked.dim(m - 1 - n) + oriented.dim(m);
    d.rank_in = rk[m];
    d.rank_out = rk[m + 1];
    d.homology = d.dim - d.rank_in - d.rank_out;
    if (d.homology != 0) rep.ok = false;
    rep.cone.push_back(d);
  }
  if (!rep.betti_match) rep.ok = false;
  return rep;
}

}  // namespace ogclab
