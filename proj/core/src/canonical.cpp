#include "ogclab/canonical.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "ogclab/errors.hpp"

namespace ogclab {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

class Labeler {
 public:
  explicit Labeler(const HalfEdgeGraph& g) : g_(g), n_(g.num_vertices()), directed_(g.is_directed()) {
    if (n_ > 250) throw PreconditionError("canonical_form supports at most 250 vertices");
    if (g.num_edges() > 250 || g.num_markings() > 250)
      throw PreconditionError("canonical_form supports at most 250 edges and markings");
    mult_.assign(idx(n_ * n_), 0);
    loops_.assign(idx(n_), 0);
    for (const Edge& e : g.edges()) {
      if (e.u == e.v) {
        ++loops_[idx(e.u)];
        continue;
      }
      ++mult_[idx(e.u * n_ + e.v)];
      if (!directed_) ++mult_[idx(e.v * n_ + e.u)];
    }
  }

  void run() {
    std::vector<std::vector<int>> keys(idx(n_));
    for (int v = 0; v < n_; ++v) {
      auto& k = keys[idx(v)];
      k.push_back(g_.weight(v));
      k.push_back(loops_[idx(v)]);
      int in = 0, out = 0;
      for (int w = 0; w < n_; ++w) {
        out += mult_[idx(v * n_ + w)];
        in += mult_[idx(w * n_ + v)];
      }
      k.push_back(out);
      k.push_back(in);
      for (const Marking& m : g_.markings())
        if (m.vertex == v) k.push_back(m.label);
      k.push_back(-1);
    }
    std::vector<int> col = rank_by(keys);
    search(col);
  }

  std::vector<int> best_perm;
  std::string best_code;
  std::vector<std::vector<int>> tied;  // all leaf permutations attaining best_code

 private:
  std::vector<int> rank_by(const std::vector<std::vector<int>>& keys) const {
    std::vector<int> order(idx(n_));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[idx(a)] < keys[idx(b)]; });
    std::vector<int> col(idx(n_));
    for (int i = 0; i < n_; ++i) {
      const int v = order[idx(i)];
      col[idx(v)] = (i > 0 && keys[idx(v)] == keys[idx(order[idx(i - 1)])]) ? col[idx(order[idx(i - 1)])] : i;
    }
    return col;
  }

  static int cell_count(const std::vector<int>& col) {
    std::vector<int> c = col;
    std::sort(c.begin(), c.end());
    return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
  }

  void refine(std::vector<int>& col) const {
    int cells = cell_count(col);
    std::vector<std::vector<int>> sig(idx(n_));
    while (cells < n_) {
      for (int v = 0; v < n_; ++v) {
        auto& s = sig[idx(v)];
        s.clear();
        s.push_back(col[idx(v)]);
        const std::size_t start = s.size();
        for (int w = 0; w < n_; ++w) {
          if (w == v) continue;
          const int out = mult_[idx(v * n_ + w)];
          const int in = directed_ ? mult_[idx(w * n_ + v)] : 0;
          if (out == 0 && in == 0) continue;
          s.push_back((col[idx(w)] << 16) | (out << 8) | in);
        }
        std::sort(s.begin() + static_cast<std::ptrdiff_t>(start), s.end());
      }
      col = rank_by(sig);
      const int next = cell_count(col);
      if (next == cells) return;
      cells = next;
    }
  }

  void search(std::vector<int> col) {
    refine(col);
    std::vector<int> size(idx(n_), 0);
    for (int c : col) ++size[idx(c)];
    int target = -1;
    for (int c = 0; c < n_; ++c)
      if (size[idx(c)] > 1) {
        target = c;
        break;
      }
    if (target < 0) {
      leaf(col);
      return;
    }
    for (int v = 0; v < n_; ++v) {
      if (col[idx(v)] != target) continue;
      std::vector<int> next = col;
      for (int x = 0; x < n_; ++x)
        if (x != v && col[idx(x)] == target) next[idx(x)] = target + 1;
      search(std::move(next));
    }
  }

  void leaf(const std::vector<int>& perm) {
    std::string code = encode(g_, perm);
    if (best_code.empty() || code < best_code) {
      best_code = std::move(code);
      best_perm = perm;
      tied.clear();
      tied.push_back(perm);
    } else if (code == best_code) {
      tied.push_back(perm);
    }
  }

 public:
  static std::string encode(const HalfEdgeGraph& g, const std::vector<int>& perm) {
    const int n = g.num_vertices();
    std::string code;
    code.reserve(idx(4 + n + 3 * g.num_markings() + 2 * g.num_edges()));
    code.push_back(static_cast<char>(g.is_directed() ? 1 : 0));
    code.push_back(static_cast<char>(n));
    code.push_back(static_cast<char>(g.num_edges()));
    code.push_back(static_cast<char>(g.num_markings()));
    std::vector<int> w(idx(n));
    for (int v = 0; v < n; ++v) w[idx(perm[idx(v)])] = g.weight(v);
    for (int x : w) {
      if (x > 255) throw PreconditionError("vertex weight too large for canonical encoding");
      code.push_back(static_cast<char>(x));
    }
    for (const Marking& m : g.markings()) {
      code.push_back(static_cast<char>((m.label >> 8) & 0xff));
      code.push_back(static_cast<char>(m.label & 0xff));
      code.push_back(static_cast<char>(perm[idx(m.vertex)]));
    }
    std::vector<int> es;
    es.reserve(g.edges().size());
    for (const Edge& e : g.edges()) {
      int a = perm[idx(e.u)], b = perm[idx(e.v)];
      if (!g.is_directed() && a > b) std::swap(a, b);
      es.push_back((a << 8) | b);
    }
    std::sort(es.begin(), es.end());
    for (int x : es) {
      code.push_back(static_cast<char>(x >> 8));
      code.push_back(static_cast<char>(x & 0xff));
    }
    return code;
  }

 private:
  const HalfEdgeGraph& g_;
  int n_;
  bool directed_;
  std::vector<int> mult_;
  std::vector<int> loops_;
};

std::pair<int, int> bundle_key(const Edge& e, bool directed) {
  if (directed) return {e.u, e.v};
  return {std::min(e.u, e.v), std::max(e.u, e.v)};
}

// Map edge `from` onto edge `to` under vertex map `vm`, writing half-edges.
void map_edge_halves(const HalfEdgeGraph& g, const std::vector<int>& vm, int from, int to,
                     std::vector<int>& half_map) {
  const Edge& a = g.edge(from);
  const Edge& b = g.edge(to);
  const bool straight = a.u == a.v || vm[idx(a.u)] == b.u;
  half_map[idx(2 * from)] = straight ? 2 * to : 2 * to + 1;
  half_map[idx(2 * from + 1)] = straight ? 2 * to + 1 : 2 * to;
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace

CanonicalForm canonical_form(const HalfEdgeGraph& g, CanonicalOptions opts) {
  const int n = g.num_vertices();
  CanonicalForm cf;
  Labeler lab(g);
  if (n > 0) {
    lab.run();
  } else {
    lab.best_code = Labeler::encode(g, {});
    lab.tied.emplace_back();
  }
  cf.code = lab.best_code;
  cf.vertex_map = lab.best_perm;

  // Canonical edge order: sort images, ties by input edge id.
  const int ne = g.num_edges();
  std::vector<std::pair<int, int>> img(idx(ne));
  for (int e = 0; e < ne; ++e) {
    int a = cf.vertex_map[idx(g.edge(e).u)], b = cf.vertex_map[idx(g.edge(e).v)];
    if (!g.is_directed() && a > b) std::swap(a, b);
    img[idx(e)] = {a, b};
  }
  std::vector<int> order(idx(ne));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return img[idx(x)] < img[idx(y)]; });
  cf.edge_map.assign(idx(ne), 0);
  std::vector<Edge> edges(idx(ne));
  for (int i = 0; i < ne; ++i) {
    const int e = order[idx(i)];
    cf.edge_map[idx(e)] = i;
    edges[idx(i)] = {img[idx(e)].first, img[idx(e)].second};
  }
  cf.half_edge_map.assign(idx(2 * ne), 0);
  for (int e = 0; e < ne; ++e) {
    const int t = cf.edge_map[idx(e)];
    const bool straight = cf.vertex_map[idx(g.edge(e).u)] == edges[idx(t)].u;
    cf.half_edge_map[idx(2 * e)] = straight ? 2 * t : 2 * t + 1;
    cf.half_edge_map[idx(2 * e + 1)] = straight ? 2 * t + 1 : 2 * t;
  }
  std::vector<int> weights(idx(n));
  for (int v = 0; v < n; ++v) weights[idx(cf.vertex_map[idx(v)])] = g.weight(v);
  std::vector<Marking> marks;
  for (const Marking& m : g.markings()) marks.push_back({m.label, cf.vertex_map[idx(m.vertex)]});
  cf.graph = HalfEdgeGraph::from_edges(std::move(weights), std::move(edges), std::move(marks), g.is_directed());

  if (!opts.automorphisms) return cf;

  // Bundles of parallel edges (loops included) in the input graph.
  std::map<std::pair<int, int>, std::vector<int>> bundles;
  for (int e = 0; e < ne; ++e) bundles[bundle_key(g.edge(e), g.is_directed())].push_back(e);

  std::vector<int> inv0(idx(n));
  for (int v = 0; v < n; ++v) inv0[idx(cf.vertex_map[idx(v)])] = v;

  cf.vertex_aut_order = lab.tied.size();
  std::uint64_t kernel = 1;
  for (const auto& [key, list] : bundles) {
    const int m = static_cast<int>(list.size());
    kernel *= factorial(m);
    if (key.first == key.second) kernel <<= m;
    if (m >= 2) cf.odd_on_edges = true;
  }
  cf.aut_order = cf.vertex_aut_order * kernel;

  for (const auto& perm : lab.tied) {
    Automorphism a;
    a.vertex_map.resize(idx(n));
    bool identity = true;
    for (int v = 0; v < n; ++v) {
      a.vertex_map[idx(v)] = inv0[idx(perm[idx(v)])];
      identity = identity && a.vertex_map[idx(v)] == v;
    }
    if (identity) continue;
    a.half_edge_map.assign(idx(2 * ne), 0);
    for (const auto& [key, list] : bundles) {
      Edge probe{a.vertex_map[idx(key.first)], a.vertex_map[idx(key.second)]};
      const auto& dest = bundles.at(bundle_key(probe, g.is_directed()));
      for (std::size_t i = 0; i < list.size(); ++i) map_edge_halves(g, a.vertex_map, list[i], dest[i], a.half_edge_map);
    }
    if (permutation_sign(a.vertex_map) < 0) cf.odd_on_vertices = true;
    if (permutation_sign(a.edge_map()) < 0) cf.odd_on_edges = true;
    cf.generators.push_back(std::move(a));
  }
  std::vector<int> id_v(idx(n));
  std::iota(id_v.begin(), id_v.end(), 0);
  std::vector<int> id_h(idx(2 * ne));
  std::iota(id_h.begin(), id_h.end(), 0);
  for (const auto& [key, list] : bundles) {
    for (std::size_t i = 0; i + 1 < list.size(); ++i) {
      Automorphism a{id_v, id_h};
      map_edge_halves(g, id_v, list[i], list[i + 1], a.half_edge_map);
      map_edge_halves(g, id_v, list[i + 1], list[i], a.half_edge_map);
      cf.generators.push_back(std::move(a));
    }
    if (key.first == key.second) {
      for (int e : list) {
        Automorphism a{id_v, id_h};
        std::swap(a.half_edge_map[idx(2 * e)], a.half_edge_map[idx(2 * e + 1)]);
        cf.generators.push_back(std::move(a));
      }
    }
  }
  return cf;
}

std::string canonical_code(const HalfEdgeGraph& g) {
  return canonical_form(g, CanonicalOptions{false}).code;
}

bool are_isomorphic(const HalfEdgeGraph& a, const HalfEdgeGraph& b) {
  return canonical_code(a) == canonical_code(b);
}

Automorphism compose(const Automorphism& a, const Automorphism& b) {
  Automorphism c;
  c.vertex_map.resize(b.vertex_map.size());
  for (std::size_t x = 0; x < b.vertex_map.size(); ++x) c.vertex_map[x] = a.vertex_map[idx(b.vertex_map[x])];
  c.half_edge_map.resize(b.half_edge_map.size());
  for (std::size_t x = 0; x < b.half_edge_map.size(); ++x)
    c.half_edge_map[x] = a.half_edge_map[idx(b.half_edge_map[x])];
  return c;
}

std::string code_hex(const std::string& code) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(code.size() * 2);
  for (unsigned char c : code) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

}  // namespace ogclab
