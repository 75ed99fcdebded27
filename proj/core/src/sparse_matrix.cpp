#include "ogclab/sparse_matrix.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <gmpxx.h>

#include "ogclab/errors.hpp"

namespace ogclab {

namespace {

std::int64_t to_i64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw InternalCheckError("matrix entry exceeds 64-bit range");
  return z.get_si();
}

std::int64_t mod_p(std::int64_t x, std::uint32_t p) {
  const auto pp = static_cast<std::int64_t>(p);
  x %= pp;
  return x < 0 ? x + pp : x;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::uint64_t r = 1, e = p - 2;
  a %= p;
  while (e) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

bool entry_less(const MatrixEntry& a, const MatrixEntry& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

}  // namespace

std::string Field::name() const { return kind == Kind::Rational ? "Q" : "F_" + std::to_string(p); }

SparseIntMatrix::SparseIntMatrix(int rows, int cols, Field field) : rows_(rows), cols_(cols), field_(field) {
  if (rows < 0 || cols < 0) throw PreconditionError("negative matrix dimension");
  if (field.kind == Field::Kind::Prime && field.p < 2) throw PreconditionError("invalid prime field");
}

SparseIntMatrix SparseIntMatrix::from_triplets(int rows, int cols, const std::vector<Triplet>& triplets,
                                               Field field) {
  std::vector<MatrixEntry> es;
  es.reserve(triplets.size());
  for (const Triplet& t : triplets) es.push_back({t.row, t.col, t.value, 1});
  return from_entries(rows, cols, std::move(es), field);
}

SparseIntMatrix SparseIntMatrix::from_entries(int rows, int cols, std::vector<MatrixEntry> entries, Field field) {
  SparseIntMatrix m(rows, cols, field);
  m.entries_ = std::move(entries);
  m.validate_and_normalize();
  return m;
}

SparseIntMatrix SparseIntMatrix::identity(int n, Field field) {
  std::vector<MatrixEntry> es;
  for (int i = 0; i < n; ++i) es.push_back({i, i, 1, 1});
  return from_entries(n, n, std::move(es), field);
}

void SparseIntMatrix::validate_and_normalize() {
  for (const auto& e : entries_) {
    if (e.row < 0 || e.row >= rows_ || e.col < 0 || e.col >= cols_)
      throw PreconditionError("matrix entry out of range");
    if (e.den == 0) throw PreconditionError("zero denominator");
  }
  std::sort(entries_.begin(), entries_.end(), entry_less);
  std::vector<MatrixEntry> out;
  out.reserve(entries_.size());
  std::size_t i = 0;
  while (i < entries_.size()) {
    std::size_t j = i;
    if (field_.kind == Field::Kind::Prime) {
      std::int64_t acc = 0;
      for (; j < entries_.size() && !entry_less(entries_[i], entries_[j]); ++j) {
        const std::int64_t num = mod_p(entries_[j].num, field_.p);
        const std::int64_t den = mod_p(entries_[j].den, field_.p);
        if (den == 0) throw PreconditionError("denominator vanishes modulo p");
        const auto v = static_cast<std::int64_t>(static_cast<std::uint64_t>(num) *
                                                 inv_mod(static_cast<std::uint64_t>(den), field_.p) % field_.p);
        acc = (acc + v) % static_cast<std::int64_t>(field_.p);
      }
      if (acc != 0) out.push_back({entries_[i].row, entries_[i].col, acc, 1});
    } else {
      mpq_class acc = 0;
      for (; j < entries_.size() && !entry_less(entries_[i], entries_[j]); ++j)
        acc += mpq_class(mpz_class(static_cast<long>(entries_[j].num)), mpz_class(static_cast<long>(entries_[j].den)));
      acc.canonicalize();
      if (acc != 0) out.push_back({entries_[i].row, entries_[i].col, to_i64(acc.get_num()), to_i64(acc.get_den())});
    }
    i = j;
  }
  entries_ = std::move(out);
}

bool SparseIntMatrix::is_integral() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const MatrixEntry& e) { return e.den == 1; });
}

SparseIntMatrix SparseIntMatrix::transpose() const {
  SparseIntMatrix t(cols_, rows_, field_);
  t.entries_.reserve(entries_.size());
  for (const auto& e : entries_) t.entries_.push_back({e.col, e.row, e.num, e.den});
  std::sort(t.entries_.begin(), t.entries_.end(), entry_less);
  return t;
}

SparseIntMatrix SparseIntMatrix::negated() const {
  SparseIntMatrix t = *this;
  for (auto& e : t.entries_) {
    if (field_.kind == Field::Kind::Prime) e.num = e.num == 0 ? 0 : static_cast<std::int64_t>(field_.p) - e.num;
    else e.num = -e.num;
  }
  return t;
}

SparseIntMatrix SparseIntMatrix::reduce(std::uint32_t p) const {
  if (field_.kind == Field::Kind::Prime) {
    if (field_.p != p) throw PreconditionError("cannot change prime field");
    return *this;
  }
  return from_entries(rows_, cols_, entries_, Field::prime(p));
}

std::vector<std::vector<std::int64_t>> SparseIntMatrix::dense_integral() const {
  if (!is_integral()) throw PreconditionError("dense_integral on a non-integral matrix");
  std::vector<std::vector<std::int64_t>> d(static_cast<std::size_t>(rows_),
                                           std::vector<std::int64_t>(static_cast<std::size_t>(cols_), 0));
  for (const auto& e : entries_) d[static_cast<std::size_t>(e.row)][static_cast<std::size_t>(e.col)] = e.num;
  return d;
}

SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("multiply: inner dimensions differ");
  if (!(a.field() == b.field())) throw PreconditionError("multiply: field tags differ");
  std::vector<std::vector<const MatrixEntry*>> brow(static_cast<std::size_t>(b.rows()));
  for (const auto& e : b.entries()) brow[static_cast<std::size_t>(e.row)].push_back(&e);
  std::vector<MatrixEntry> out;
  const bool prime = a.field().kind == Field::Kind::Prime;
  const std::uint64_t p = a.field().p;
  std::size_t i = 0;
  const auto& ae = a.entries();
  while (i < ae.size()) {
    const int row = ae[i].row;
    std::map<int, mpq_class> acc_q;
    std::map<int, std::uint64_t> acc_p;
    for (; i < ae.size() && ae[i].row == row; ++i) {
      for (const MatrixEntry* be : brow[static_cast<std::size_t>(ae[i].col)]) {
        if (prime) {
          auto& slot = acc_p[be->col];
          slot = (slot + static_cast<std::uint64_t>(ae[i].num) * static_cast<std::uint64_t>(be->num)) % p;
        } else {
          mpq_class x(mpz_class(static_cast<long>(ae[i].num)), mpz_class(static_cast<long>(ae[i].den)));
          mpq_class y(mpz_class(static_cast<long>(be->num)), mpz_class(static_cast<long>(be->den)));
          acc_q[be->col] += x * y;
        }
      }
    }
    if (prime) {
      for (const auto& [c, v] : acc_p)
        if (v) out.push_back({row, c, static_cast<std::int64_t>(v), 1});
    } else {
      for (auto& [c, v] : acc_q) {
        v.canonicalize();
        if (v != 0) out.push_back({row, c, to_i64(v.get_num()), to_i64(v.get_den())});
      }
    }
  }
  return SparseIntMatrix::from_entries(a.rows(), b.cols(), std::move(out), a.field());
}

SparseIntMatrix add(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("add: shapes differ");
  if (!(a.field() == b.field())) throw PreconditionError("add: field tags differ");
  std::vector<MatrixEntry> es = a.entries();
  es.insert(es.end(), b.entries().begin(), b.entries().end());
  return SparseIntMatrix::from_entries(a.rows(), a.cols(), std::move(es), a.field());
}

void write_matrix_market(std::ostream& out, const SparseIntMatrix& m) {
  out << "%%MatrixMarket matrix coordinate " << (m.is_integral() ? "integer" : "rational") << " general\n";
  out << "% field " << m.field().name() << '\n';
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (const auto& e : m.entries()) {
    out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.num;
    if (e.den != 1) out << '/' << e.den;
    out << '\n';
  }
}

std::string to_matrix_market(const SparseIntMatrix& m) {
  std::ostringstream os;
  write_matrix_market(os, m);
  return os.str();
}

SparseIntMatrix read_matrix_market(std::istream& in, const std::string& source) {
  auto fail = [&](const std::string& why) { return ValidationError(source + ": " + why); };
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket matrix coordinate", 0) != 0)
    throw fail("missing MatrixMarket coordinate header");
  if (line.find("general") == std::string::npos) throw fail("only general matrices are supported");
  Field field = Field::rational();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] != '%') break;
    std::istringstream ls(line);
    std::string pct, key, value;
    ls >> pct >> key >> value;
    if (key == "field" && value.rfind("F_", 0) == 0) {
      try {
        field = Field::prime(static_cast<std::uint32_t>(std::stoul(value.substr(2))));
      } catch (const std::exception&) {
        throw fail("bad field tag '" + value + "'");
      }
    }
  }
  std::istringstream dims(line);
  long rows = -1, cols = -1, nnz = -1;
  if (!(dims >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) throw fail("bad size line");
  std::vector<MatrixEntry> es;
  es.reserve(static_cast<std::size_t>(nnz));
  for (long k = 0; k < nnz; ++k) {
    long r = 0, c = 0;
    std::string tok;
    if (!(in >> r >> c >> tok)) throw fail("truncated entry list");
    if (r < 1 || r > rows || c < 1 || c > cols) throw fail("entry index out of range");
    std::int64_t num = 0, den = 1;
    try {
      const auto slash = tok.find('/');
      std::size_t used = 0;
      num = std::stoll(tok.substr(0, slash), &used);
      if (used != tok.substr(0, slash).size()) throw std::invalid_argument(tok);
      if (slash != std::string::npos) den = std::stoll(tok.substr(slash + 1));
    } catch (const std::exception&) {
      throw fail("bad entry value '" + tok + "'");
    }
    if (den == 0) throw fail("zero denominator");
    es.push_back({static_cast<int>(r - 1), static_cast<int>(c - 1), num, den});
  }
  try {
    return SparseIntMatrix::from_entries(static_cast<int>(rows), static_cast<int>(cols), std::move(es), field);
  } catch (const Error& ex) {
    throw fail(ex.what());
  }
}

SparseIntMatrix from_matrix_market(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  return read_matrix_market(in, source);
}

}  // namespace ogclab
