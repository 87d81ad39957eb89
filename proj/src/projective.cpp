#include "cblab/projective.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cblab/rng.hpp"

namespace cblab {

ProjPoint::ProjPoint(QVector coords) : coords_(std::move(coords)) {
  auto lead = std::find_if(coords_.begin(), coords_.end(),
                           [](const Rational& q) { return sgn(q) != 0; });
  if (lead == coords_.end()) throw std::invalid_argument("ProjPoint: all coordinates are zero");
  const Rational scale = *lead;
  for (auto& c : coords_) c /= scale;
}

Flat Flat::from_rows(const QMatrix& rows) {
  auto red = rref(rows);
  if (red.rank == 0) throw std::invalid_argument("Flat: rows span the zero space");
  QMatrix basis(red.rank, rows.cols());
  for (std::size_t i = 0; i < red.rank; ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) basis(i, j) = red.reduced(i, j);
  return Flat(std::move(basis), std::move(red.pivot_cols));
}

Flat Flat::of_point(const ProjPoint& p) {
  return from_rows(QMatrix::from_rows({p.coords()}, p.coords().size()));
}

PointSet::PointSet(std::size_t ambient, std::vector<ProjPoint> points)
    : PointSet(ambient, std::move(points), {}) {}

PointSet::PointSet(std::size_t ambient, std::vector<ProjPoint> points,
                   std::vector<std::size_t> labels)
    : ambient_(ambient), points_(std::move(points)), labels_(std::move(labels)) {
  if (labels_.empty()) {
    labels_.resize(points_.size());
    std::iota(labels_.begin(), labels_.end(), std::size_t{0});
  }
  if (labels_.size() != points_.size()) throw std::invalid_argument("PointSet: label count mismatch");
  for (const auto& p : points_) {
    if (p.ambient() != ambient_) throw std::invalid_argument("PointSet: point has wrong ambient");
  }
  std::vector<const ProjPoint*> sorted;
  for (const auto& p : points_) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return *a < *b; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (*sorted[i] == *sorted[i - 1]) throw std::invalid_argument("PointSet: repeated point");
  }
  std::vector<std::size_t> ls = labels_;
  std::sort(ls.begin(), ls.end());
  if (std::adjacent_find(ls.begin(), ls.end()) != ls.end())
    throw std::invalid_argument("PointSet: repeated label");
}

std::size_t PointSet::index_of_label(std::size_t label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t PointSet::index_of_point(const ProjPoint& p) const {
  auto it = std::find(points_.begin(), points_.end(), p);
  return static_cast<std::size_t>(it - points_.begin());
}

PointSet PointSet::without(std::size_t index) const {
  PointSet out(ambient_);
  for (std::size_t i = 0; i < size(); ++i) {
    if (i == index) continue;
    out.points_.push_back(points_[i]);
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  PointSet out(ambient_);
  for (auto i : indices) {
    out.points_.push_back(points_.at(i));
    out.labels_.push_back(labels_.at(i));
  }
  return out;
}

std::size_t PointSet::add(const ProjPoint& p) {
  if (p.ambient() != ambient_) throw std::invalid_argument("PointSet::add: wrong ambient");
  if (const std::size_t i = index_of_point(p); i < size()) return i;
  std::size_t label = labels_.empty() ? 0 : *std::max_element(labels_.begin(), labels_.end()) + 1;
  points_.push_back(p);
  labels_.push_back(label);
  return points_.size() - 1;
}

Flat span(std::span<const SpanItem> items) {
  if (items.empty()) throw std::invalid_argument("span: no inputs");
  std::vector<QVector> rows;
  std::size_t width = 0;
  for (const auto& item : items) {
    if (const auto* p = std::get_if<ProjPoint>(&item)) {
      rows.push_back(p->coords());
      width = p->coords().size();
    } else {
      const auto& f = std::get<Flat>(item);
      for (std::size_t i = 0; i < f.basis().rows(); ++i) rows.push_back(f.basis().row_vector(i));
      width = f.basis().cols();
    }
    if (rows.back().size() != width) throw std::invalid_argument("span: ambient mismatch");
  }
  for (const auto& r : rows)
    if (r.size() != width) throw std::invalid_argument("span: ambient mismatch");
  return Flat::from_rows(QMatrix::from_rows(rows, width));
}

Flat span(std::span<const ProjPoint> points) {
  std::vector<SpanItem> items(points.begin(), points.end());
  return span(std::span<const SpanItem>(items));
}

Flat span(std::span<const Flat> flats) {
  std::vector<SpanItem> items(flats.begin(), flats.end());
  return span(std::span<const SpanItem>(items));
}

std::optional<Flat> intersect(const Flat& a, const Flat& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("intersect: ambient mismatch");
  const std::size_t width = a.ambient() + 1;
  const std::size_t ra = a.basis().rows();
  const std::size_t rb = b.basis().rows();
  // Columns are the basis vectors of a and the negated basis vectors of b;
  // a kernel vector (u, v) gives the common vector u^T A = v^T B.
  QMatrix m(width, ra + rb);
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t i = 0; i < ra; ++i) m(j, i) = a.basis()(i, j);
    for (std::size_t i = 0; i < rb; ++i) m(j, ra + i) = -b.basis()(i, j);
  }
  const auto ker = kernel(m);
  std::vector<QVector> common;
  for (const auto& v : ker) {
    QVector w(width);
    for (std::size_t i = 0; i < ra; ++i) {
      if (sgn(v[i]) == 0) continue;
      for (std::size_t j = 0; j < width; ++j) w[j] += v[i] * a.basis()(i, j);
    }
    common.push_back(std::move(w));
  }
  if (common.empty()) return std::nullopt;
  const QMatrix rows = QMatrix::from_rows(common, width);
  if (rank(rows) == 0) return std::nullopt;
  return Flat::from_rows(rows);
}

bool contains(const Flat& f, const ProjPoint& p) {
  if (f.ambient() != p.ambient()) throw std::invalid_argument("contains: ambient mismatch");
  QVector rest = p.coords();
  const auto& b = f.basis();
  for (std::size_t i = 0; i < b.rows(); ++i) {
    const Rational coef = rest[f.pivots()[i]];
    if (sgn(coef) == 0) continue;
    for (std::size_t j = 0; j < b.cols(); ++j) rest[j] -= coef * b(i, j);
  }
  return std::all_of(rest.begin(), rest.end(), [](const Rational& q) { return sgn(q) == 0; });
}

bool contains(const Flat& outer, const Flat& inner) {
  for (std::size_t i = 0; i < inner.basis().rows(); ++i) {
    if (!contains(outer, ProjPoint(inner.basis().row_vector(i)))) return false;
  }
  return true;
}

bool are_skew(std::span<const Flat> flats) {
  if (flats.size() < 2) throw std::invalid_argument("are_skew: need at least two flats");
  for (std::size_t i = 0; i < flats.size(); ++i)
    for (std::size_t j = i + 1; j < flats.size(); ++j)
      if (intersect(flats[i], flats[j])) return false;
  return true;
}

bool is_split(std::span<const Flat> flats) {
  if (flats.empty()) throw std::invalid_argument("is_split: need at least one flat");
  if (flats.size() == 1) return true;
  for (std::size_t i = 0; i < flats.size(); ++i) {
    std::vector<Flat> others;
    for (std::size_t j = 0; j < flats.size(); ++j)
      if (j != i) others.push_back(flats[j]);
    if (intersect(flats[i], span(std::span<const Flat>(others)))) return false;
  }
  return true;
}

PointSet apply(const QMatrix& m, const PointSet& x) {
  if (m.cols() != x.ambient() + 1 || m.rows() != m.cols())
    throw std::invalid_argument("apply: matrix shape does not match ambient");
  std::vector<ProjPoint> pts;
  pts.reserve(x.size());
  for (const auto& p : x.points()) pts.emplace_back(m * std::span<const Rational>(p.coords()));
  return PointSet(x.ambient(), std::move(pts), x.labels());
}

CoordinateChange ensure_x0_nonvanishing(const PointSet& x, std::uint64_t seed) {
  const std::size_t width = x.ambient() + 1;
  auto avoids = [](const PointSet& s) {
    return std::all_of(s.points().begin(), s.points().end(),
                       [](const ProjPoint& p) { return sgn(p[0]) != 0; });
  };
  if (avoids(x)) return {x, QMatrix::identity(width)};

  // New x0 is x0 + sum c_j x_j; only finitely many coefficient vectors put a
  // point on the new hyperplane, so widening ranges terminate.
  Rng rng(seed);
  for (std::int64_t attempt = 0;; ++attempt) {
    const std::int64_t bound = 2 + attempt / 4;
    QMatrix change = QMatrix::identity(width);
    for (std::size_t j = 1; j < width; ++j) change(0, j) = Rational(rng.uniform(-bound, bound));
    bool ok = true;
    for (const auto& p : x.points()) {
      Rational value = 0;
      for (std::size_t j = 0; j < width; ++j) value += change(0, j) * p[j];
      if (sgn(value) == 0) {
        ok = false;
        break;
      }
    }
    if (ok) return {apply(change, x), change};
  }
}

}  // namespace cblab
