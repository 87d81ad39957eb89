#include "cblab/hilbert.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cblab {

bool degrevlex_greater(const Exponent& a, const Exponent& b) {
  for (std::size_t k = a.size(); k-- > 0;) {
    if (a[k] != b[k]) return a[k] < b[k];
  }
  return false;
}

namespace {

void compositions(std::size_t vars, unsigned remaining, Exponent& current, std::size_t pos,
                  std::vector<Exponent>& out) {
  if (pos + 1 == vars) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (unsigned e = 0; e <= remaining; ++e) {
    current[pos] = e;
    compositions(vars, remaining - e, current, pos + 1, out);
  }
}

}  // namespace

std::vector<Exponent> monomials(std::size_t n, std::size_t degree) {
  std::vector<Exponent> out;
  Exponent current(n + 1, 0);
  compositions(n + 1, static_cast<unsigned>(degree), current, 0, out);
  std::sort(out.begin(), out.end(), degrevlex_greater);
  return out;
}

Rational evaluate(const Exponent& m, const ProjPoint& p) {
  if (m.size() != p.coords().size()) throw std::invalid_argument("evaluate: variable count mismatch");
  Rational v = 1;
  for (std::size_t k = 0; k < m.size(); ++k) {
    for (unsigned e = 0; e < m[k]; ++e) v *= p[k];
  }
  return v;
}

Rational Form::evaluate(const ProjPoint& p) const {
  Rational v = 0;
  for (const auto& [m, c] : terms) v += c * cblab::evaluate(m, p);
  return v;
}

QVector Form::dense(std::size_t n) const {
  const auto basis = monomials(n, degree);
  std::map<Exponent, Rational> lookup(terms.begin(), terms.end());
  QVector out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto it = lookup.find(basis[i]);
    if (it != lookup.end()) out[i] = it->second;
  }
  return out;
}

QMatrix eval_matrix(const PointSet& x, std::size_t degree) {
  const auto mons = monomials(x.ambient(), degree);
  QMatrix m(x.size(), mons.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < mons.size(); ++j) m(i, j) = evaluate(mons[j], x[i]);
  return m;
}

DegreeLadder::DegreeLadder(const PointSet& x) : points_(x) {
  if (x.empty()) return;
  basis_.push_back(Exponent(x.ambient() + 1, 0));
  evals_.push_back(QVector(x.size(), Rational(1)));
}

void DegreeLadder::advance() {
  ++degree_;
  if (basis_.empty()) return;
  const PointSet& x = points_;
  const std::size_t vars = x.ambient() + 1;

  // Candidate x_j * m for every basis monomial m, remembering one parent.
  std::map<Exponent, std::pair<std::size_t, std::size_t>, bool (*)(const Exponent&, const Exponent&)>
      candidates(degrevlex_greater);
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    for (std::size_t j = 0; j < vars; ++j) {
      Exponent m = basis_[b];
      ++m[j];
      candidates.emplace(std::move(m), std::make_pair(b, j));
    }
  }

  EchelonBasis echelon(x.size());
  std::vector<Exponent> next_basis;
  std::vector<QVector> next_evals;
  for (const auto& [m, parent] : candidates) {
    if (echelon.full()) break;
    const auto& [b, j] = parent;
    QVector v(x.size());
    for (std::size_t p = 0; p < x.size(); ++p) v[p] = evals_[b][p] * x[p][j];
    if (echelon.insert(v)) {
      next_basis.push_back(m);
      next_evals.push_back(std::move(v));
    }
  }
  basis_ = std::move(next_basis);
  evals_ = std::move(next_evals);
}

void DegreeLadder::advance_to(std::size_t degree) {
  if (degree < degree_) throw std::invalid_argument("DegreeLadder: cannot go back");
  while (degree_ < degree) advance();
}

QMatrix DegreeLadder::basis_matrix() const {
  return QMatrix::from_rows(evals_, points_.size());
}

std::size_t hf(const PointSet& x, long degree) {
  if (degree < 0 || x.empty()) return 0;
  DegreeLadder ladder(x);
  for (long i = 0; i < degree && !ladder.saturated(); ++i) ladder.advance();
  return ladder.dim();
}

HilbertFunction hf_full(const PointSet& x) {
  if (x.empty()) throw std::invalid_argument("hf_full: empty point set");
  HilbertFunction h;
  h.cardinality = x.size();
  DegreeLadder ladder(x);
  h.values.push_back(ladder.dim());
  while (!ladder.saturated()) {
    ladder.advance();
    h.values.push_back(ladder.dim());
  }
  h.reg_index = ladder.degree();
  h.values.push_back(x.size());
  return h;
}

std::vector<std::size_t> delta_hf(const HilbertFunction& h) {
  std::vector<std::size_t> d;
  std::size_t prev = 0;
  for (auto v : h.values) {
    d.push_back(v - prev);
    prev = v;
  }
  return d;
}

}  // namespace cblab
