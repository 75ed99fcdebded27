#include "ogclab/rank.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <gmpxx.h>

#include "ogclab/errors.hpp"

namespace ogclab {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

struct ModOps {
  using Value = std::uint64_t;
  std::uint64_t p;

  [[nodiscard]] std::uint64_t inv(std::uint64_t a) const {
    std::uint64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return r;
  }
  // target -= (target[c] / pivot[c]) * pivot
  void eliminate(std::vector<std::pair<int, Value>>& target, const std::vector<std::pair<int, Value>>& pivot,
                 Value tc, Value pc, std::vector<std::pair<int, Value>>& out) const {
    const Value f = tc * inv(pc) % p;
    out.clear();
    std::size_t i = 0, j = 0;
    while (i < target.size() || j < pivot.size()) {
      if (j == pivot.size() || (i < target.size() && target[i].first < pivot[j].first)) {
        out.push_back(target[i++]);
      } else if (i == target.size() || pivot[j].first < target[i].first) {
        out.emplace_back(pivot[j].first, (p - f * pivot[j].second % p) % p);
        ++j;
      } else {
        const Value v = (target[i].second + p - f * pivot[j].second % p) % p;
        if (v) out.emplace_back(target[i].first, v);
        ++i;
        ++j;
      }
    }
    target.swap(out);
  }
};

struct IntOps {
  using Value = mpz_class;

  // target := pc * target - tc * pivot, then strip the content.
  void eliminate(std::vector<std::pair<int, Value>>& target, const std::vector<std::pair<int, Value>>& pivot,
                 const Value& tc_in, const Value& pc_in, std::vector<std::pair<int, Value>>& out) const {
    mpz_class g = gcd(tc_in, pc_in);
    const mpz_class tc = tc_in / g, pc = pc_in / g;
    out.clear();
    std::size_t i = 0, j = 0;
    while (i < target.size() || j < pivot.size()) {
      if (j == pivot.size() || (i < target.size() && target[i].first < pivot[j].first)) {
        out.emplace_back(target[i].first, pc * target[i].second);
        ++i;
      } else if (i == target.size() || pivot[j].first < target[i].first) {
        out.emplace_back(pivot[j].first, -tc * pivot[j].second);
        ++j;
      } else {
        mpz_class v = pc * target[i].second - tc * pivot[j].second;
        if (v != 0) out.emplace_back(target[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    mpz_class content = 0;
    for (const auto& [c, v] : out) {
      content = gcd(content, v);
      if (content == 1) break;
    }
    if (content > 1)
      for (auto& [c, v] : out) v /= content;
    target.swap(out);
  }
};

// Sparse elimination with an approximate Markowitz rule: the shortest active
// row supplies the pivot, in its sparsest column.
template <class Ops>
int eliminate_rank(std::vector<std::vector<std::pair<int, typename Ops::Value>>> rows, int ncols, const Ops& ops) {
  using Row = std::vector<std::pair<int, typename Ops::Value>>;
  const int nrows = static_cast<int>(rows.size());
  std::vector<std::vector<int>> col_rows(idx(ncols));
  std::vector<int> col_count(idx(ncols), 0);
  std::set<std::pair<std::size_t, int>> queue;
  for (int r = 0; r < nrows; ++r) {
    for (const auto& [c, v] : rows[idx(r)]) {
      col_rows[idx(c)].push_back(r);
      ++col_count[idx(c)];
    }
    if (!rows[idx(r)].empty()) queue.emplace(rows[idx(r)].size(), r);
  }
  std::vector<char> active(idx(nrows), 1);
  int rank = 0;
  Row scratch;
  std::vector<int> before, after;
  while (!queue.empty()) {
    const int r = queue.begin()->second;
    queue.erase(queue.begin());
    Row& prow = rows[idx(r)];
    active[idx(r)] = 0;
    if (prow.empty()) continue;
    std::size_t best = 0;
    for (std::size_t k = 1; k < prow.size(); ++k)
      if (col_count[idx(prow[k].first)] < col_count[idx(prow[best].first)]) best = k;
    const int c = prow[best].first;
    const auto pc = prow[best].second;
    ++rank;
    for (const auto& [cc, v] : prow) --col_count[idx(cc)];
    std::vector<int> targets;
    targets.swap(col_rows[idx(c)]);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (int s : targets) {
      if (!active[idx(s)]) continue;
      Row& srow = rows[idx(s)];
      auto it = std::lower_bound(srow.begin(), srow.end(), c,
                                 [](const auto& e, int col) { return e.first < col; });
      if (it == srow.end() || it->first != c) continue;
      const auto tc = it->second;
      queue.erase({srow.size(), s});
      before.clear();
      for (const auto& [cc, v] : srow) before.push_back(cc);
      ops.eliminate(srow, prow, tc, pc, scratch);
      after.clear();
      for (const auto& [cc, v] : srow) after.push_back(cc);
      std::size_t i = 0, j = 0;
      while (i < before.size() || j < after.size()) {
        if (j == after.size() || (i < before.size() && before[i] < after[j])) {
          --col_count[idx(before[i++])];
        } else if (i == before.size() || after[j] < before[i]) {
          ++col_count[idx(after[j])];
          col_rows[idx(after[j])].push_back(s);
          ++j;
        } else {
          ++i;
          ++j;
        }
      }
      if (!srow.empty()) queue.emplace(srow.size(), s);
    }
    Row().swap(prow);
  }
  return rank;
}

mpz_class row_scale(const std::vector<const MatrixEntry*>& row) {
  mpz_class l = 1;
  for (const MatrixEntry* e : row) l = lcm(l, mpz_class(static_cast<long>(e->den)));
  return l;
}

std::vector<std::vector<const MatrixEntry*>> rows_of(const SparseIntMatrix& m) {
  std::vector<std::vector<const MatrixEntry*>> rows(idx(m.rows()));
  for (const auto& e : m.entries()) rows[idx(e.row)].push_back(&e);
  return rows;
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t n) {
  std::uint64_t r = 1;
  a %= n;
  while (e) {
    if (e & 1) r = r * a % n;
    a = a * a % n;
    e >>= 1;
  }
  return r;
}

}  // namespace

int rational_rank(const SparseIntMatrix& m) {
  if (m.field().kind == Field::Kind::Prime) throw PreconditionError("rational_rank on a prime-field matrix");
  std::vector<std::vector<std::pair<int, mpz_class>>> rows(idx(m.rows()));
  const auto src = rows_of(m);
  for (int r = 0; r < m.rows(); ++r) {
    const mpz_class scale = row_scale(src[idx(r)]);
    for (const MatrixEntry* e : src[idx(r)])
      rows[idx(r)].emplace_back(e->col, mpz_class(static_cast<long>(e->num)) * (scale / static_cast<long>(e->den)));
  }
  return eliminate_rank(std::move(rows), m.cols(), IntOps{});
}

int modular_rank(const SparseIntMatrix& m, std::uint32_t p) {
  if (p < 2) throw PreconditionError("modulus must be prime");
  if (m.field().kind == Field::Kind::Prime && m.field().p != p)
    throw PreconditionError("matrix lives over a different prime field");
  std::vector<std::vector<std::pair<int, std::uint64_t>>> rows(idx(m.rows()));
  const auto src = rows_of(m);
  for (int r = 0; r < m.rows(); ++r) {
    // Scaling a row by the lcm of its denominators keeps the rank.
    const mpz_class scale = row_scale(src[idx(r)]);
    for (const MatrixEntry* e : src[idx(r)]) {
      mpz_class v = mpz_class(static_cast<long>(e->num)) * (scale / static_cast<long>(e->den));
      v %= static_cast<unsigned long>(p);
      if (v < 0) v += static_cast<unsigned long>(p);
      const auto x = static_cast<std::uint64_t>(v.get_ui());
      if (x) rows[idx(r)].emplace_back(e->col, x);
    }
  }
  return eliminate_rank(std::move(rows), m.cols(), ModOps{p});
}

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u, 61u})
    if (n % q == 0) return n == q;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 7ull, 61ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint32_t> random_primes(int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> dist(1u << 30, (1u << 31) - 1);
  std::vector<std::uint32_t> out;
  while (static_cast<int>(out.size()) < k) {
    const std::uint32_t c = dist(rng);
    if (is_prime_u32(c) && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

RankResult rank_of(const SparseIntMatrix& m, const RankStrategy& s) {
  RankResult res;
  if (m.field().kind == Field::Kind::Prime) {
    res.method_used = RankMethod::Modular;
    res.primes = {m.field().p};
    res.rank = modular_rank(m, m.field().p);
    res.modular_ranks = {res.rank};
    return res;
  }
  switch (s.method) {
    case RankMethod::Rational:
      res.method_used = RankMethod::Rational;
      res.rank = rational_rank(m);
      return res;
    case RankMethod::Modular:
      res.method_used = RankMethod::Modular;
      res.primes = {s.prime};
      res.rank = modular_rank(m, s.prime);
      res.modular_ranks = {res.rank};
      return res;
    case RankMethod::Consensus: {
      if (s.primes < 1) throw PreconditionError("consensus needs at least one prime");
      res.primes = random_primes(s.primes, s.seed);
      for (std::uint32_t p : res.primes) res.modular_ranks.push_back(modular_rank(m, p));
      const bool unanimous = std::all_of(res.modular_ranks.begin(), res.modular_ranks.end(),
                                         [&](int r) { return r == res.modular_ranks.front(); });
      if (unanimous) {
        res.method_used = RankMethod::Consensus;
        res.rank = res.modular_ranks.front();
      } else {
        res.method_used = RankMethod::Rational;
        res.escalated = true;
        res.rank = rational_rank(m);
      }
      return res;
    }
  }
  throw PreconditionError("unknown rank strategy");
}

int rank(const SparseIntMatrix& m, const RankStrategy& strategy) { return rank_of(m, strategy).rank; }

}  // namespace ogclab
