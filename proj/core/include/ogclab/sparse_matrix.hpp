#pragma once

// Exact sparse matrices over Q (int64 numerator/denominator pairs) or over a
// prime field F_p.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ogclab {

struct Field {
  enum class Kind { Rational, Prime };
  Kind kind = Kind::Rational;
  std::uint32_t p = 0;

  static Field rational() { return {}; }
  static Field prime(std::uint32_t p) { return {Kind::Prime, p}; }
  [[nodiscard]] std::string name() const;

  friend bool operator==(const Field&, const Field&) = default;
};

struct MatrixEntry {
  int row = 0;
  int col = 0;
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

struct Triplet {
  int row = 0;
  int col = 0;
  std::int64_t value = 0;
};

class SparseIntMatrix {
 public:
  SparseIntMatrix() = default;
  SparseIntMatrix(int rows, int cols, Field field = Field::rational());

  /// Duplicates are summed, zeros dropped, entries sorted by (row, col).
  static SparseIntMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets,
                                       Field field = Field::rational());
  /// Rational entries; reduced to lowest terms, positive denominators.
  static SparseIntMatrix from_entries(int rows, int cols, std::vector<MatrixEntry> entries,
                                      Field field = Field::rational());
  static SparseIntMatrix identity(int n, Field field = Field::rational());

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  [[nodiscard]] const Field& field() const { return field_; }
  [[nodiscard]] const std::vector<MatrixEntry>& entries() const { return entries_; }
  [[nodiscard]] std::size_t nnz() const { return entries_.size(); }
  [[nodiscard]] bool is_zero() const { return entries_.empty(); }
  [[nodiscard]] bool is_integral() const;

  [[nodiscard]] SparseIntMatrix transpose() const;
  [[nodiscard]] SparseIntMatrix negated() const;
  /// Image in F_p. Throws if a denominator is divisible by p.
  [[nodiscard]] SparseIntMatrix reduce(std::uint32_t p) const;

  /// Dense row-major copy, for small integral matrices.
  [[nodiscard]] std::vector<std::vector<std::int64_t>> dense_integral() const;

  friend bool operator==(const SparseIntMatrix&, const SparseIntMatrix&) = default;

 private:
  void validate_and_normalize();

  int rows_ = 0;
  int cols_ = 0;
  Field field_;
  std::vector<MatrixEntry> entries_;
};

/// Exact product a*b. Throws PreconditionError on shape or field mismatch.
[[nodiscard]] SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b);
[[nodiscard]] SparseIntMatrix add(const SparseIntMatrix& a, const SparseIntMatrix& b);

/// MatrixMarket "coordinate integer general", 1-based. A "% field F_p" comment
/// records a prime field; non-integral rationals are written as num/den tokens
/// under a "coordinate rational" header.
void write_matrix_market(std::ostream& out, const SparseIntMatrix& m);
[[nodiscard]] std::string to_matrix_market(const SparseIntMatrix& m);
/// `source` names the origin in ValidationError messages.
[[nodiscard]] SparseIntMatrix read_matrix_market(std::istream& in, const std::string& source);
[[nodiscard]] SparseIntMatrix from_matrix_market(const std::string& text, const std::string& source);

}  // namespace ogclab
