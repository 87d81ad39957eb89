#include "cblab/qlinalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace cblab {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  auto check_int = [&](const std::string& part) {
    std::size_t start = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (part.size() == start) throw std::invalid_argument("bad rational literal: " + text);
    for (std::size_t i = start; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') {
        throw std::invalid_argument("bad rational literal: " + text);
      }
    }
  };
  std::string num = slash == std::string::npos ? text : text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  check_int(num);
  check_int(den);
  if (den[0] == '-' || den[0] == '+') throw std::invalid_argument("bad rational literal: " + text);
  if (num[0] == '+') num.erase(0, 1);
  Integer d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + text);
  Rational q(Integer(num), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

QMatrix::QMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("QMatrix: entry count does not match shape");
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows, std::size_t cols) {
  QMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("QMatrix::from_rows: ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * cols);
  }
  return m;
}

QVector QMatrix::row_vector(std::size_t r) const {
  auto s = row(r);
  return {s.begin(), s.end()};
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::operator*(const QMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("QMatrix product: shape mismatch");
  QMatrix p(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) p(i, j) += a * other(k, j);
    }
  return p;
}

QVector QMatrix::operator*(std::span<const Rational> v) const {
  if (v.size() != cols_) throw std::invalid_argument("QMatrix-vector product: shape mismatch");
  QVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

QMatrix QMatrix::vstack(const QMatrix& other) const {
  if (rows_ == 0) return other;
  if (other.rows_ == 0) return *this;
  if (cols_ != other.cols_) throw std::invalid_argument("QMatrix::vstack: column mismatch");
  QMatrix s(rows_ + other.rows_, cols_);
  std::copy(data_.begin(), data_.end(), s.data_.begin());
  std::copy(other.data_.begin(), other.data_.end(), s.data_.begin() + data_.size());
  return s;
}

namespace {

void remove_content(ZVector& v) {
  Integer g = 0;
  for (const auto& x : v) {
    if (x != 0) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
      if (g == 1) return;
    }
  }
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

// target <- pivot_val * target - target[col] * pivot_row, then primitive.
void eliminate(ZVector& target, const ZVector& pivot_row, std::size_t col) {
  const Integer factor = target[col];
  const Integer& lead = pivot_row[col];
  for (std::size_t j = 0; j < target.size(); ++j) {
    target[j] *= lead;
    target[j] -= factor * pivot_row[j];
  }
  remove_content(target);
}

}  // namespace

ZVector primitive_integer(std::span<const Rational> v) {
  Integer lcm = 1;
  for (const auto& x : v) {
    if (sgn(x) != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  }
  ZVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i].get_num() * (lcm / v[i].get_den());
  }
  remove_content(out);
  auto lead = std::find_if(out.begin(), out.end(), [](const Integer& x) { return x != 0; });
  if (lead != out.end() && *lead < 0)
    for (auto& x : out) x = -x;
  return out;
}

RrefResult rref(const QMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<ZVector> a;
  a.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) a.push_back(primitive_integer(m.row(i)));

  RrefResult out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pick = r;
    while (pick < rows && a[pick][c] == 0) ++pick;
    if (pick == rows) continue;
    std::swap(a[r], a[pick]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i != r && a[i][c] != 0) eliminate(a[i], a[r], c);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  out.reduced = QMatrix(rows, cols);
  for (std::size_t i = 0; i < r; ++i) {
    const Integer& lead = a[i][out.pivot_cols[i]];
    for (std::size_t j = 0; j < cols; ++j) {
      if (a[i][j] == 0) continue;
      Rational q(a[i][j], lead);
      q.canonicalize();
      out.reduced(i, j) = q;
    }
  }
  return out;
}

std::size_t rank(const QMatrix& m) {
  EchelonBasis basis(m.cols());
  for (std::size_t i = 0; i < m.rows() && !basis.full(); ++i) basis.insert(m.row(i));
  return basis.rank();
}

std::vector<QVector> kernel(const QMatrix& m) {
  const auto red = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : red.pivot_cols) is_pivot[c] = true;
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < red.rank; ++i) v[red.pivot_cols[i]] = -red.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVector> solve(const QMatrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve: right-hand side length mismatch");
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto red = rref(aug);
  if (!red.pivot_cols.empty() && red.pivot_cols.back() == a.cols()) return std::nullopt;
  QVector x(a.cols());
  for (std::size_t i = 0; i < red.rank; ++i) x[red.pivot_cols[i]] = red.reduced(i, a.cols());
  return x;
}

std::optional<QMatrix> inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix is not square");
  const std::size_t n = m.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  const auto red = rref(aug);
  if (red.rank < n || (n > 0 && red.pivot_cols[n - 1] != n - 1)) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = red.reduced(i, n + j);
  return inv;
}

std::size_t EchelonBasis::reduce(ZVector& v) const {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    if (v[pivots_[k]] != 0) eliminate(v, rows_[k], pivots_[k]);
  }
  std::size_t p = 0;
  while (p < cols_ && v[p] == 0) ++p;
  return p;
}

bool EchelonBasis::insert(std::span<const Rational> v) {
  if (v.size() != cols_) throw std::invalid_argument("EchelonBasis: length mismatch");
  return insert(primitive_integer(v));
}

bool EchelonBasis::insert(ZVector v) {
  if (v.size() != cols_) throw std::invalid_argument("EchelonBasis: length mismatch");
  if (full()) return false;
  const std::size_t p = reduce(v);
  if (p == cols_) return false;
  if (v[p] < 0)
    for (auto& x : v) x = -x;
  rows_.push_back(std::move(v));
  pivots_.push_back(p);
  return true;
}

bool EchelonBasis::contains(std::span<const Rational> v) const {
  if (v.size() != cols_) throw std::invalid_argument("EchelonBasis: length mismatch");
  ZVector z = primitive_integer(v);
  return reduce(z) == cols_;
}

QMatrix EchelonBasis::to_matrix() const {
  QMatrix m(rows_.size(), cols_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = Rational(rows_[i][j]);
  return m;
}

}  // namespace cblab
