#pragma once

// Exact rational scalars and dense matrices.
//
// Every rank, kernel and solve in the library goes through this header.
// Elimination is fraction-free: rows are scaled to primitive integer vectors
// and reduced by integer cross-multiplication, then converted back to
// reduced rational form only where a caller asks for it.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cblab {

using Rational = mpq_class;
using Integer = mpz_class;
using QVector = std::vector<Rational>;
using ZVector = std::vector<Integer>;

/// Parses "a/b" or "a" into a canonical rational. Throws std::invalid_argument.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);
  QMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);
  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const Rational> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  QVector row_vector(std::size_t r) const;

  QMatrix transpose() const;
  QMatrix operator*(const QMatrix& other) const;
  QVector operator*(std::span<const Rational> v) const;
  bool operator==(const QMatrix& other) const = default;

  /// Stack `other` below this matrix. Column counts must agree.
  QMatrix vstack(const QMatrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RrefResult {
  QMatrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

RrefResult rref(const QMatrix& m);
std::size_t rank(const QMatrix& m);

/// Basis of {v : m v = 0}. Vector j has a 1 at its j-th free column.
std::vector<QVector> kernel(const QMatrix& m);

/// Particular solution of a x = b with free variables set to zero.
/// Throws std::invalid_argument when b.size() != a.rows().
std::optional<QVector> solve(const QMatrix& a, std::span<const Rational> b);

/// Inverse of a square matrix, absent when singular.
std::optional<QMatrix> inverse(const QMatrix& m);

/// Scales a rational vector to the primitive integer vector with the same
/// direction and a positive leading entry. The zero vector maps to zeros.
ZVector primitive_integer(std::span<const Rational> v);

/// Incrementally built row-echelon basis over the integers.
///
/// Each stored row is primitive and has a distinct pivot column; inserted
/// vectors are reduced against the stored rows by integer cross-multiplication
/// followed by content removal.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t cols) : cols_(cols) {}

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }
  bool full() const { return rows_.size() == cols_; }

  /// Adds v if it is independent of the stored rows. Returns true on growth.
  bool insert(std::span<const Rational> v);
  bool insert(ZVector v);

  /// True iff v lies in the row space.
  bool contains(std::span<const Rational> v) const;

  /// Stored rows, scaled back to rationals, in insertion order.
  QMatrix to_matrix() const;

 private:
  // Reduces v in place; returns the pivot column of the remainder or cols_.
  std::size_t reduce(ZVector& v) const;

  std::size_t cols_;
  std::vector<ZVector> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace cblab
