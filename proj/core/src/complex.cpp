#include "ogclab/complex.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "ogclab/errors.hpp"
#include "ogclab/parallel.hpp"

namespace ogclab {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

struct RawTerm {
  int edge = -1;
  CanonicalForm target;
  int sign = 1;
};

// Contractions of a generator given in canonical form, with orientation signs
// transported to the canonical frame of each target.
std::vector<RawTerm> raw_boundary(const HalfEdgeGraph& g, Flavor flavor, const StabilityProfile& profile,
                                  bool automorphisms) {
  std::vector<RawTerm> out;
  const int ne = g.num_edges();
  const int nv = g.num_vertices();
  for (int e = 0; e < ne; ++e) {
    if (g.is_loop(e) || !g.parallel_edges(e).empty()) continue;
    Contraction c = contract_edge_mapped(g, e);
    if (g.is_directed() && !is_acyclic(c.graph)) continue;
    if (!is_stable(c.graph, profile)) continue;
    RawTerm t;
    t.edge = e;
    t.target = canonical_form(c.graph, {automorphisms});
    if (flavor == Flavor::Marked) {
      std::vector<int> seq;
      seq.reserve(idx(ne - 1));
      for (int f = 0; f < ne; ++f)
        if (f != e) seq.push_back(t.target.edge_map[idx(c.edge_map[idx(f)])]);
      t.sign = (e % 2 == 0 ? 1 : -1) * permutation_sign(seq);
    } else {
      const int a = g.edge(e).u, b = g.edge(e).v;
      std::vector<int> pos(idx(nv));
      std::vector<int> seq;
      seq.reserve(idx(nv - 1));
      int slot = 0;
      for (int x = 0; x < nv; ++x) {
        if (x == a || x == b) continue;
        pos[idx(x)] = slot++;
        seq.push_back(t.target.vertex_map[idx(c.vertex_map[idx(x)])]);
      }
      pos[idx(a)] = nv - 2;
      pos[idx(b)] = nv - 1;
      seq.push_back(t.target.vertex_map[idx(c.merged_vertex)]);
      t.sign = permutation_sign(pos) * permutation_sign(seq);
    }
    out.push_back(std::move(t));
  }
  return out;
}

bool odd_for(Flavor f, const CanonicalForm& cf) { return f == Flavor::Marked ? cf.odd_on_edges : cf.odd_on_vertices; }

GradedComplex assemble(std::shared_ptr<const GraphCatalog> cat, int parity, const BuildOptions& opts) {
  GradedComplex c;
  c.flavor = cat->flavor;
  c.genus = cat->genus;
  c.labels = cat->labels;
  c.parity = parity;
  c.catalog = cat;
  std::map<int, std::vector<int>> pos_in_basis;
  for (const auto& [k, list] : cat->strata) {
    auto& pos = pos_in_basis[k];
    pos.assign(list.size(), -1);
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].zero_generator) continue;
      pos[i] = static_cast<int>(c.basis[k].size());
      c.basis[k].push_back(static_cast<int>(i));
    }
  }
  for (auto it = c.basis.begin(); it != c.basis.end();) it = it->second.empty() ? c.basis.erase(it) : std::next(it);
  c.rebuild_positions();
  if (c.basis.empty()) return c;

  for (int k = c.min_degree(); k <= c.max_degree() + 1; ++k) {
    const int ncols = c.dim(k), nrows = c.dim(k - 1);
    std::vector<std::vector<Triplet>> cols(idx(ncols));
    parallel_for(idx(ncols), opts.threads, [&](std::size_t i) {
      const CatalogEntry& gen = c.generator(k, static_cast<int>(i));
      for (const RawTerm& t : raw_boundary(gen.graph, c.flavor, cat->profile, false)) {
        const auto ref = cat->find(t.target.code);
        if (!ref)
          throw InternalCheckError("contraction target missing from catalog: " + describe(t.target.graph) +
                                   " (from " + describe(gen.graph) + ")");
        const int row = pos_in_basis.at(ref->stratum)[idx(ref->index)];
        if (row < 0) continue;
        if (ref->stratum != k - 1) throw InternalCheckError("contraction changed degree by more than one");
        cols[i].push_back({row, static_cast<int>(i), t.sign});
      }
    });
    std::vector<Triplet> all;
    for (auto& v : cols) all.insert(all.end(), v.begin(), v.end());
    c.boundary.emplace(k, SparseIntMatrix::from_triplets(nrows, ncols, all));
  }
  if (opts.check_d_squared) {
    const DSquaredReport rep = check_d_squared(c);
    if (!rep.ok) throw InternalCheckError("d^2 != 0: " + rep.detail);
  }
  return c;
}

}  // namespace

int GradedComplex::dim(int k) const {
  auto it = basis.find(k);
  return it == basis.end() ? 0 : static_cast<int>(it->second.size());
}

int GradedComplex::min_degree() const { return basis.empty() ? 0 : basis.begin()->first; }
int GradedComplex::max_degree() const { return basis.empty() ? -1 : basis.rbegin()->first; }

std::size_t GradedComplex::total_dim() const {
  std::size_t n = 0;
  for (const auto& [k, v] : basis) n += v.size();
  return n;
}

const CatalogEntry& GradedComplex::generator(int k, int i) const {
  return catalog->strata.at(k).at(idx(basis.at(k).at(idx(i))));
}

std::optional<std::pair<int, int>> GradedComplex::position(const std::string& code) const {
  auto it = positions_.find(code);
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

SparseIntMatrix GradedComplex::d(int k) const {
  auto it = boundary.find(k);
  if (it != boundary.end()) return it->second;
  return SparseIntMatrix(dim(k - 1), dim(k));
}

void GradedComplex::rebuild_positions() {
  positions_.clear();
  for (const auto& [k, list] : basis)
    for (std::size_t i = 0; i < list.size(); ++i)
      positions_.emplace(generator(k, static_cast<int>(i)).code, std::make_pair(k, static_cast<int>(i)));
}

GradedComplex build_marked_complex(std::shared_ptr<const GraphCatalog> catalog, int d_parity,
                                   const BuildOptions& opts) {
  if (!catalog || catalog->flavor != Flavor::Marked)
    throw PreconditionError("build_marked_complex needs a marked catalog");
  if (d_parity % 2 != 0) throw PreconditionError("only the even-parity marked complex is implemented");
  return assemble(std::move(catalog), 0, opts);
}

GradedComplex build_oriented_complex(std::shared_ptr<const GraphCatalog> catalog, const BuildOptions& opts) {
  if (!catalog || catalog->flavor != Flavor::Oriented)
    throw PreconditionError("build_oriented_complex needs an oriented catalog");
  return assemble(std::move(catalog), 1, opts);
}

GradedComplex build_complex(std::shared_ptr<const GraphCatalog> catalog, const BuildOptions& opts) {
  if (!catalog) throw PreconditionError("null catalog");
  return catalog->flavor == Flavor::Marked ? build_marked_complex(std::move(catalog), 0, opts)
                                           : build_oriented_complex(std::move(catalog), opts);
}

std::vector<std::pair<int, int>> boundary_column(const GradedComplex& c, int k, int i) {
  std::vector<std::pair<int, int>> out;
  const SparseIntMatrix d = c.d(k);
  for (const auto& e : d.entries())
    if (e.col == i) out.emplace_back(e.row, static_cast<int>(e.num));
  return out;
}

DSquaredReport check_d_squared(const GradedComplex& c) {
  DSquaredReport rep;
  for (int k = c.min_degree() + 1; k <= c.max_degree() + 1; ++k) {
    rep.checked_degrees.push_back(k);
    const SparseIntMatrix p = multiply(c.d(k - 1), c.d(k));
    if (p.is_zero()) continue;
    rep.ok = false;
    rep.failing_degree = k;
    const auto& e = p.entries().front();
    std::ostringstream os;
    os << "D_" << k - 1 << " D_" << k << " has coefficient " << e.num << " from "
       << describe(c.generator(k, e.col).graph) << " to " << describe(c.generator(k - 2, e.row).graph);
    rep.detail = os.str();
    return rep;
  }
  return rep;
}

StreamingReport streaming_d_squared(Flavor flavor, int g, const std::vector<int>& labels,
                                    const StreamingCheckOptions& opts) {
  StreamingReport rep;
  std::mutex mu;
  std::atomic<std::uint64_t> gens{0}, terms{0};
  std::atomic<bool> failed{false};
  const StabilityProfile profile = flavor == Flavor::Marked ? StabilityProfile::marked() : StabilityProfile::oriented();

  auto visit = [&](const HalfEdgeGraph& raw) {
    if (failed.load(std::memory_order_relaxed)) return;
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
      throw ResourceCapError("time limit reached during the streaming d^2 check");
    const CanonicalForm cf = canonical_form(raw);
    if (odd_for(flavor, cf)) return;
    const std::uint64_t seen = ++gens;
    if (opts.max_generators != 0 && seen > opts.max_generators)
      throw ResourceCapError("generator cap of " + std::to_string(opts.max_generators) +
                             " exceeded during the streaming d^2 check");
    std::unordered_map<std::string, long> dd;
    for (const RawTerm& t : raw_boundary(cf.graph, flavor, profile, true)) {
      if (odd_for(flavor, t.target)) continue;
      ++terms;
      for (const RawTerm& u : raw_boundary(t.target.graph, flavor, profile, true)) {
        if (odd_for(flavor, u.target)) continue;
        dd[u.target.code] += static_cast<long>(t.sign) * u.sign;
      }
    }
    for (const auto& [code, coef] : dd) {
      if (coef == 0) continue;
      std::lock_guard<std::mutex> lock(mu);
      if (!failed.exchange(true)) {
        std::ostringstream os;
        os << "d^2 of " << describe(cf.graph) << " has coefficient " << coef << " on a graph with code "
           << code_hex(code);
        rep.detail = os.str();
      }
      return;
    }
  };

  if (flavor == Flavor::Marked) {
    GenerateOptions gopts;
    gopts.threads = opts.threads;
    gopts.deadline = opts.deadline;
    const GraphCatalog cat = generate_marked(g, labels, profile, gopts);
    std::vector<const HalfEdgeGraph*> all;
    for (const auto& [k, list] : cat.strata)
      for (const auto& e : list) all.push_back(&e.graph);
    parallel_for(all.size(), opts.threads, [&](std::size_t i) { visit(*all[i]); });
  } else {
    GenerateOptions gopts;
    gopts.threads = opts.threads;
    gopts.deadline = opts.deadline;
    for_each_oriented_class(g, labels, profile, gopts, visit);
  }
  rep.ok = !failed.load();
  rep.generators = gens.load();
  rep.terms = terms.load();
  return rep;
}

// ---------------------------------------------------------------------------

std::map<int, int> BettiTable::by_hc_degree() const {
  std::map<int, int> out;
  for (const auto& [k, r] : rows)
    if (r.betti != 0) out[r.hc_degree] = r.betti;
  return out;
}

int BettiTable::total() const {
  int t = 0;
  for (const auto& [k, r] : rows) t += r.betti;
  return t;
}

int hc_degree(Flavor flavor, int cell, int num_labels) {
  return flavor == Flavor::Marked ? cell : cell - num_labels;
}

int cell_degree_from_hc(Flavor flavor, int hc, int num_labels) {
  return flavor == Flavor::Marked ? hc : hc + num_labels;
}

int ogc_formula_degree(int cell, int g, int d, int num_labels) { return cell - g * (1 - d) + num_labels; }

int cousin_degree(int cell, int g, int d) { return cell + g * (1 - d) - 1; }

BettiTable betti(const GradedComplex& c, const BettiOptions& opts) {
  BettiTable t;
  t.flavor = c.flavor;
  t.genus = c.genus;
  t.labels = c.labels;
  t.parity = c.parity;
  if (c.basis.empty()) return t;
  std::map<int, int> rk;
  for (int k = c.min_degree(); k <= c.max_degree() + 1; ++k) {
    const SparseIntMatrix d = c.d(k);
    const int r = rank(d, opts.strategy);
    if (opts.cross_check_rational) {
      const int q = rational_rank(d);
      if (q != r)
        throw InternalCheckError("rank disagreement on D_" + std::to_string(k) + " of the " + flavor_name(c.flavor) +
                                 " complex: " + std::to_string(r) + " vs rational " + std::to_string(q));
    }
    rk[k] = r;
  }
  const int ns = static_cast<int>(c.labels.size());
  for (int k = c.min_degree(); k <= c.max_degree(); ++k) {
    BettiRow row;
    row.cell_degree = k;
    row.hc_degree = hc_degree(c.flavor, k, ns);
    row.dim = c.dim(k);
    row.rank_in = rk[k];
    row.rank_out = rk[k + 1];
    row.betti = row.dim - row.rank_in - row.rank_out;
    if (row.betti < 0) throw InternalCheckError("negative Betti number: rank(D_k) + rank(D_k+1) > dim");
    t.rows[k] = row;
  }
  return t;
}

EulerPair euler_characteristic(const GradedComplex& c, const BettiTable& t) {
  EulerPair e;
  for (const auto& [k, list] : c.basis) e.from_basis += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(list.size());
  for (const auto& [k, r] : t.rows) e.from_betti += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(r.betti);
  if (e.from_basis != e.from_betti)
    throw InternalCheckError("Euler characteristic mismatch: " + std::to_string(e.from_basis) + " from the basis, " +
                             std::to_string(e.from_betti) + " from cohomology");
  return e;
}

EulerPair euler_characteristic(const GradedComplex& c, const BettiOptions& opts) {
  return euler_characteristic(c, betti(c, opts));
}

bool shifted_equal(const BettiTable& a, const BettiTable& b) { return a.by_hc_degree() == b.by_hc_degree(); }

std::string betti_csv(const std::vector<BettiTable>& tables) {
  std::ostringstream os;
  os << "flavor,g,|S|,cell_degree,hc_degree,dim_basis,betti\n";
  for (const auto& t : tables)
    for (const auto& [k, r] : t.rows)
      os << flavor_name(t.flavor) << ',' << t.genus << ',' << t.labels.size() << ',' << r.cell_degree << ','
         << r.hc_degree << ',' << r.dim << ',' << r.betti << '\n';
  return os.str();
}

std::string betti_json(const std::vector<BettiTable>& tables) {
  using ojson = nlohmann::ordered_json;
  ojson arr = ojson::array();
  for (const auto& t : tables) {
    ojson j;
    j["flavor"] = flavor_name(t.flavor);
    j["g"] = t.genus;
    j["n_markings"] = t.labels.size();
    j["labels"] = t.labels;
    j["parity"] = t.parity;
    ojson rows = ojson::array();
    const int ns = static_cast<int>(t.labels.size());
    for (const auto& [k, r] : t.rows) {
      ojson row;
      row["cell_degree"] = r.cell_degree;
      row["hc_degree"] = r.hc_degree;
      row["dim_basis"] = r.dim;
      row["betti"] = r.betti;
      row["rank_in"] = r.rank_in;
      row["rank_out"] = r.rank_out;
      if (t.flavor == Flavor::Oriented) {
        row["ogc_formula_degree"] = ogc_formula_degree(k, t.genus, t.parity, ns);
        row["cousin_degree"] = cousin_degree(k, t.genus, t.parity);
      } else {
        row["ogc_formula_degree"] = nullptr;
        row["cousin_degree"] = nullptr;
      }
      rows.push_back(row);
    }
    j["rows"] = rows;
    j["euler"] = [&] {
      std::int64_t e = 0;
      for (const auto& [k, r] : t.rows) e += (k % 2 == 0 ? 1 : -1) * r.betti;
      return e;
    }();
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

}  // namespace ogclab
