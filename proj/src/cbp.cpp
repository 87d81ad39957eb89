#include "cblab/cbp.hpp"

#include <algorithm>

namespace cblab {

namespace {

std::optional<std::size_t> first_hf_failure(const PointSet& x, int r) {
  const std::size_t whole = hf(x, r);
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (hf(x.without(p), r) != whole) return p;
  }
  return std::nullopt;
}

Form times_x0_power(const Form& f, std::size_t k) {
  Form out = f;
  out.degree += k;
  for (auto& [m, c] : out.terms) m[0] += static_cast<unsigned>(k);
  return out;
}

void require_points(const PointSet& x, int r) {
  if (x.empty()) throw std::invalid_argument("cbp: empty point set");
  if (r < 0) throw std::invalid_argument("cbp: negative degree");
}

}  // namespace

std::size_t alpha(const PointSet& x, std::size_t index) {
  if (index >= x.size()) throw std::out_of_range("alpha: point index out of range");
  DegreeLadder whole(x);
  DegreeLadder rest(x.without(index));
  while (rest.dim() == whole.dim()) {
    whole.advance();
    rest.advance();
  }
  return whole.degree();
}

Separator separator(const PointSet& x, std::size_t index) {
  const std::size_t a = alpha(x, index);
  DegreeLadder ladder(x);
  ladder.advance_to(a);

  const std::size_t defect = ladder.dim() - hf(x.without(index), static_cast<long>(a));
  if (defect != 1) {
    throw std::logic_error("separator: degree-alpha defect is " + std::to_string(defect) +
                           ", expected 1");
  }

  // Columns are evaluation vectors of the basis monomials; the target is the
  // indicator of the removed point.
  const QMatrix cols = ladder.basis_matrix().transpose();
  QVector target(x.size());
  target[index] = 1;
  auto coeffs = solve(cols, target);
  if (!coeffs) throw std::logic_error("separator: indicator vector not in the degree-alpha span");

  Separator sep;
  sep.point_index = index;
  sep.alpha = a;
  sep.form.degree = a;
  for (std::size_t k = 0; k < coeffs->size(); ++k) {
    if (sgn((*coeffs)[k]) != 0) sep.form.terms.emplace_back(ladder.basis()[k], (*coeffs)[k]);
  }
  return sep;
}

bool cbp_hf(const PointSet& x, int r) {
  require_points(x, r);
  return !first_hf_failure(x, r).has_value();
}

bool cbp_alpha(const PointSet& x, int r) {
  require_points(x, r);
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (alpha(x, p) < static_cast<std::size_t>(r) + 1) return false;
  }
  return true;
}

bool cbp_separator_div(const PointSet& x, int r) {
  require_points(x, r);
  for (const auto& p : x.points()) {
    if (sgn(p[0]) == 0) {
      throw std::domain_error(
          "cbp_separator_div: a point lies on x0 = 0; apply ensure_x0_nonvanishing first");
    }
  }
  const std::size_t reg = hf_full(x).reg_index;
  const std::size_t top = std::max(reg, static_cast<std::size_t>(r));
  const std::size_t shift = top - static_cast<std::size_t>(r);

  // x0^shift * g for g ranging over degree-r forms, evaluated on X.
  DegreeLadder ladder(x);
  ladder.advance_to(static_cast<std::size_t>(r));
  QMatrix multiples(x.size(), ladder.dim());
  for (std::size_t k = 0; k < ladder.dim(); ++k) {
    Exponent m = ladder.basis()[k];
    m[0] += static_cast<unsigned>(shift);
    for (std::size_t q = 0; q < x.size(); ++q) multiples(q, k) = evaluate(m, x[q]);
  }

  for (std::size_t p = 0; p < x.size(); ++p) {
    const Separator sep = separator(x, p);
    const Form lifted = times_x0_power(sep.form, top - sep.alpha);
    QVector values(x.size());
    for (std::size_t q = 0; q < x.size(); ++q) values[q] = lifted.evaluate(x[q]);
    if (solve(multiples, values)) return false;
  }
  return true;
}

std::optional<DualVector> cbp_dual(const PointSet& x, int r) {
  require_points(x, r);
  DegreeLadder ladder(x);
  ladder.advance_to(static_cast<std::size_t>(r));
  const auto basis = kernel(ladder.basis_matrix());

  for (std::size_t p = 0; p < x.size(); ++p) {
    const bool reachable = std::any_of(basis.begin(), basis.end(),
                                       [p](const QVector& v) { return sgn(v[p]) != 0; });
    if (!reachable) return std::nullopt;
  }

  // sum_j t^j v_j has each coordinate a nonzero polynomial in t of degree
  // below basis.size(), so some t <= |X| * basis.size() + 1 avoids all roots.
  for (long t = 1;; ++t) {
    QVector c(x.size());
    Rational power = 1;
    for (const auto& v : basis) {
      for (std::size_t p = 0; p < x.size(); ++p) c[p] += power * v[p];
      power *= t;
    }
    if (std::all_of(c.begin(), c.end(), [](const Rational& q) { return sgn(q) != 0; })) {
      return DualVector{std::move(c), static_cast<std::size_t>(r)};
    }
  }
}

CBPReport cbp(const PointSet& x, int r, bool fast) {
  require_points(x, r);
  CBPReport report;
  report.r = r;
  const auto failure = first_hf_failure(x, r);
  report.by_hf = !failure.has_value();
  report.verdict = *report.by_hf;
  if (failure) report.failing_label = x.labels()[*failure];
  if (fast) return report;

  report.by_alpha = cbp_alpha(x, r);
  const auto charted = ensure_x0_nonvanishing(x, 0);
  report.by_divisibility = cbp_separator_div(charted.points, r);
  auto dual = cbp_dual(x, r);
  report.by_dual = dual.has_value();
  if (dual && report.verdict) report.witness = std::move(dual);

  if (*report.by_alpha != report.verdict || *report.by_divisibility != report.verdict ||
      *report.by_dual != report.verdict) {
    throw CbpDisagreement("cbp: characterizations disagree at r = " + std::to_string(r), report);
  }
  return report;
}

MaxCbp max_cbp_degree(const PointSet& x, bool fast) {
  if (x.empty()) throw std::invalid_argument("max_cbp_degree: empty point set");
  const int top = static_cast<int>(hf_full(x).reg_index) - 1;
  for (int r = top; r >= 0; --r) {
    if (cbp(x, r, fast).verdict) return {r, r == top};
  }
  return {-1, top == -1};
}

}  // namespace cblab
