#pragma once

// Monomials, evaluation matrices and Hilbert functions of point sets.

#include <cstddef>
#include <utility>
#include <vector>

#include "cblab/projective.hpp"
#include "cblab/qlinalg.hpp"

namespace cblab {

/// Exponent vector of a monomial in X_0..X_n.
using Exponent = std::vector<unsigned>;

/// All monomials of the given degree in n+1 variables, largest first in
/// degree-reverse-lexicographic order. There are C(n+degree, degree).
std::vector<Exponent> monomials(std::size_t n, std::size_t degree);

/// Degrevlex comparison for monomials of equal degree: true iff a > b.
bool degrevlex_greater(const Exponent& a, const Exponent& b);

Rational evaluate(const Exponent& m, const ProjPoint& p);

/// A homogeneous form, kept sparse.
struct Form {
  std::size_t degree = 0;
  std::vector<std::pair<Exponent, Rational>> terms;

  Rational evaluate(const ProjPoint& p) const;
  /// Coefficients over monomials(n, degree), in that order.
  QVector dense(std::size_t n) const;
};

/// Rows are the points in order, columns are monomials(n, degree); entries are
/// monomial values at the normalized coordinates.
QMatrix eval_matrix(const PointSet& x, std::size_t degree);

/// Walks degrees 0, 1, 2, ... keeping a set of monomials whose evaluation
/// vectors form a basis of the degree-i evaluation space V_i.
///
/// V_{i+1} is spanned by x_j * V_i, so each step only tries coordinate
/// multiples of the current basis monomials. The basis size is hf(x, i).
class DegreeLadder {
 public:
  explicit DegreeLadder(const PointSet& x);

  std::size_t degree() const { return degree_; }
  std::size_t dim() const { return basis_.size(); }
  bool saturated() const { return basis_.size() == points_.size(); }

  void advance();
  void advance_to(std::size_t degree);

  const std::vector<Exponent>& basis() const { return basis_; }
  /// Evaluation vector (one entry per point) of each basis monomial.
  const std::vector<QVector>& evaluations() const { return evals_; }
  /// Matrix whose rows are evaluations().
  QMatrix basis_matrix() const;

 private:
  PointSet points_;
  std::size_t degree_ = 0;
  std::vector<Exponent> basis_;
  std::vector<QVector> evals_;
};

struct HilbertFunction {
  std::vector<std::size_t> values;  // HF(0) .. HF(reg_index + 1)
  std::size_t reg_index = 0;
  std::size_t cardinality = 0;
};

/// dim_K (P/I_X)_degree; zero for negative degrees and for the empty set.
std::size_t hf(const PointSet& x, long degree);

/// Requires a non-empty set.
HilbertFunction hf_full(const PointSet& x);

/// First differences HF(i) - HF(i-1) for i = 0 .. reg_index + 1.
std::vector<std::size_t> delta_hf(const HilbertFunction& h);

}  // namespace cblab
