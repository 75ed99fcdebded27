#include <doctest.h>

#include <random>
#include <sstream>

#include "naive.hpp"
#include "ogclab/complex.hpp"
#include "ogclab/errors.hpp"
#include "ogclab/rank.hpp"
#include "ogclab/sparse_matrix.hpp"
#include "support.hpp"

using namespace ogclab;

namespace {

SparseIntMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, double density, int spread = 2) {
  std::uniform_real_distribution<double> coin(0, 1);
  std::uniform_int_distribution<int> val(-spread, spread);
  std::vector<Triplet> t;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (coin(rng) < density) t.push_back({r, c, val(rng)});
  return SparseIntMatrix::from_triplets(rows, cols, t);
}

// Product of two factors has rank at most the inner dimension.
SparseIntMatrix low_rank(std::mt19937_64& rng, int rows, int cols, int inner) {
  return multiply(random_matrix(rng, rows, inner, 0.5), random_matrix(rng, inner, cols, 0.5));
}

oracle::Dense dense(const SparseIntMatrix& m) {
  oracle::Dense d(static_cast<std::size_t>(m.rows()), std::vector<mpq_class>(static_cast<std::size_t>(m.cols()), 0));
  for (const auto& e : m.entries())
    d[static_cast<std::size_t>(e.row)][static_cast<std::size_t>(e.col)] = mpq_class(e.num, e.den);
  return d;
}

}  // namespace

TEST_CASE("basic ranks") {
  CHECK(rank(SparseIntMatrix::identity(2)) == 2);
  CHECK(rank(SparseIntMatrix(3, 4)) == 0);
  CHECK(rational_rank(SparseIntMatrix(0, 0)) == 0);
  CHECK(modular_rank(SparseIntMatrix::identity(5), 2147483629u) == 5);
}

TEST_CASE("normalization: duplicates summed, zeros dropped, fractions reduced") {
  const auto m = SparseIntMatrix::from_entries(2, 2, {{0, 0, 1, 2}, {0, 0, 1, 2}, {1, 1, 3, 3}, {1, 0, 0, 1}, {0, 1, 2, 4}});
  REQUIRE(m.entries().size() == 3);
  CHECK(m.entries()[0].num == 1);
  CHECK(m.entries()[0].den == 1);
  CHECK(m.entries()[1].num == 1);
  CHECK(m.entries()[1].den == 2);
  CHECK(m.entries()[2].num == 1);
  CHECK(m.is_integral() == false);
  CHECK_THROWS_AS((void)SparseIntMatrix::from_triplets(1, 1, {{1, 0, 1}}), PreconditionError);
}

TEST_CASE("multiply") {
  std::mt19937_64 rng(7);
  const auto a = random_matrix(rng, 6, 5, 0.4);
  CHECK(multiply(a, SparseIntMatrix(5, 3)).is_zero());
  CHECK(multiply(SparseIntMatrix::identity(6), a) == a);
  CHECK(multiply(a, SparseIntMatrix::identity(5)) == a);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_matrix(rng, 4, 7, 0.3), y = random_matrix(rng, 7, 5, 0.3), z = random_matrix(rng, 5, 6, 0.3);
    CHECK(multiply(multiply(x, y), z) == multiply(x, multiply(y, z)));
  }
  CHECK_THROWS_AS((void)multiply(a, a), PreconditionError);
}

TEST_CASE("rational, modular and dense ranks agree on random matrices") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const int rows = 1 + static_cast<int>(rng() % 25), cols = 1 + static_cast<int>(rng() % 25);
    const int inner = 1 + static_cast<int>(rng() % 20);
    const auto m = t % 2 ? low_rank(rng, rows, cols, inner) : random_matrix(rng, rows, cols, 0.2, 5);
    const int q = rational_rank(m);
    CHECK(q == oracle::dense_rank(dense(m)));
    CHECK(q == rational_rank(m.transpose()));
    CHECK(q == rank(m, RankStrategy::consensus(3, static_cast<std::uint64_t>(t))));
    for (std::uint32_t p : random_primes(2, static_cast<std::uint64_t>(t) + 100)) CHECK(modular_rank(m, p) <= q);
    CHECK(modular_rank(m, 3) <= q);
  }
}

TEST_CASE("rational entries") {
  const auto m = SparseIntMatrix::from_entries(2, 2, {{0, 0, 1, 3}, {0, 1, 2, 3}, {1, 0, 1, 2}, {1, 1, 1, 1}});
  CHECK(rational_rank(m) == 1);
  CHECK(rank(m) == 1);
  CHECK(modular_rank(m, 1000003u) == 1);
}

TEST_CASE("consensus escalates when a prime divides a pivot") {
  const auto primes = random_primes(3, 99);
  const auto bad = static_cast<std::int64_t>(primes[0]);
  const auto m = SparseIntMatrix::from_triplets(1, 1, {{0, 0, bad}});
  const RankResult r = rank_of(m, RankStrategy::consensus(3, 99));
  CHECK(r.rank == 1);
  CHECK(r.escalated);
  CHECK(r.method_used == RankMethod::Rational);
  CHECK(r.modular_ranks.front() == 0);

  const RankResult ok = rank_of(SparseIntMatrix::identity(3), RankStrategy::consensus(3, 99));
  CHECK_FALSE(ok.escalated);
  CHECK(ok.method_used == RankMethod::Consensus);
  CHECK(ok.primes == primes);
}

TEST_CASE("random primes") {
  const auto a = random_primes(5, 1), b = random_primes(5, 1), c = random_primes(5, 2);
  CHECK(a == b);
  CHECK(a != c);
  for (auto p : a) {
    CHECK(p >= (1u << 30));
    CHECK(p < (1u << 31));
    CHECK(is_prime_u32(p));
    for (std::uint32_t d = 2; d < 2000; ++d) CHECK(p % d != 0);
  }
  CHECK(is_prime_u32(2));
  CHECK(is_prime_u32(2147483647u));
  CHECK_FALSE(is_prime_u32(1));
  CHECK_FALSE(is_prime_u32(561));
  CHECK_FALSE(is_prime_u32(2147483649u));
}

TEST_CASE("MatrixMarket round trip") {
  std::mt19937_64 rng(3);
  const auto m = random_matrix(rng, 7, 4, 0.4, 9);
  const std::string text = to_matrix_market(m);
  CHECK(text.rfind("%%MatrixMarket matrix coordinate integer general", 0) == 0);
  CHECK(from_matrix_market(text, "mem") == m);

  const auto q = SparseIntMatrix::from_entries(2, 2, {{0, 1, -3, 4}, {1, 0, 5, 1}});
  CHECK(from_matrix_market(to_matrix_market(q), "mem") == q);
  CHECK(to_matrix_market(q).find("rational") != std::string::npos);

  const auto p = m.reduce(101);
  const auto pback = from_matrix_market(to_matrix_market(p), "mem");
  CHECK(pback == p);
  CHECK(pback.field().p == 101u);

  CHECK_THROWS_AS((void)from_matrix_market("%%MatrixMarket matrix coordinate integer general\n2 2 1\n3 1 1\n", "bad.mtx"),
                  ValidationError);
  CHECK_THROWS_AS((void)from_matrix_market("garbage", "bad.mtx"), ValidationError);
}

TEST_CASE("consensus equals rational rank on differentials with 3g-3+|S| <= 4") {
  int matrices = 0;
  for (auto [g, n] : std::vector<std::pair<int, int>>{
           {0, 3}, {0, 4}, {0, 5}, {0, 6}, {0, 7}, {1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 0}, {2, 1}})
    for (Flavor f : {Flavor::Marked, Flavor::Oriented}) {
      if (f == Flavor::Oriented && (n >= 6 || n == 0)) continue;  // large oriented strata: acceptance run
      auto cat = std::make_shared<const GraphCatalog>(
          f == Flavor::Marked ? generate_marked(g, testing_support::labels(n)) : generate_oriented(g, testing_support::labels(n)));
      const GradedComplex c = build_complex(cat);
      for (const auto& [k, d] : c.boundary) {
        CHECK(rank(d, RankStrategy::consensus(3, 5)) == rational_rank(d));
        CHECK(rational_rank(d) == rational_rank(d.transpose()));
        ++matrices;
      }
    }
  CHECK(matrices > 40);
}
