#pragma once

// Points, flats and finite point sets in rational projective space.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cblab/qlinalg.hpp"

namespace cblab {

/// A point of P^n, normalized so its first nonzero coordinate is 1.
class ProjPoint {
 public:
  /// Throws std::invalid_argument for the zero vector.
  explicit ProjPoint(QVector coords);

  std::size_t ambient() const { return coords_.size() - 1; }
  const QVector& coords() const { return coords_; }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }

  bool operator==(const ProjPoint& other) const = default;
  bool operator<(const ProjPoint& other) const { return coords_ < other.coords_; }

 private:
  QVector coords_;
};

/// A linear subspace of P^n, stored as the reduced echelon basis of its cone.
class Flat {
 public:
  /// Span of the given rows. Throws std::invalid_argument if they are all zero.
  static Flat from_rows(const QMatrix& rows);
  static Flat of_point(const ProjPoint& p);

  std::size_t ambient() const { return basis_.cols() - 1; }
  std::size_t proj_dim() const { return basis_.rows() - 1; }
  const QMatrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool operator==(const Flat& other) const { return basis_ == other.basis_; }

 private:
  Flat(QMatrix basis, std::vector<std::size_t> pivots)
      : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  QMatrix basis_;
  std::vector<std::size_t> pivots_;
};

/// An ordered set of distinct points sharing an ambient space.
///
/// Each point carries a label that survives taking subsets, so a point of
/// X \ {p} can still be traced back to X.
class PointSet {
 public:
  explicit PointSet(std::size_t ambient) : ambient_(ambient) {}
  /// Throws std::invalid_argument on mixed ambients or repeated points.
  PointSet(std::size_t ambient, std::vector<ProjPoint> points);
  PointSet(std::size_t ambient, std::vector<ProjPoint> points, std::vector<std::size_t> labels);

  std::size_t ambient() const { return ambient_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const ProjPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<ProjPoint>& points() const { return points_; }
  const std::vector<std::size_t>& labels() const { return labels_; }

  /// Position of the point with this label, or size() if absent.
  std::size_t index_of_label(std::size_t label) const;
  /// Position of p, or size() if absent.
  std::size_t index_of_point(const ProjPoint& p) const;

  PointSet without(std::size_t index) const;
  PointSet subset(std::span<const std::size_t> indices) const;
  /// Adds p unless it is already present; returns its index.
  std::size_t add(const ProjPoint& p);

  bool operator==(const PointSet& other) const = default;

 private:
  std::size_t ambient_;
  std::vector<ProjPoint> points_;
  std::vector<std::size_t> labels_;
};

using SpanItem = std::variant<ProjPoint, Flat>;

/// Smallest flat containing all items. Throws std::invalid_argument if empty.
Flat span(std::span<const SpanItem> items);
Flat span(std::span<const ProjPoint> points);
Flat span(std::span<const Flat> flats);

std::optional<Flat> intersect(const Flat& a, const Flat& b);
bool contains(const Flat& f, const ProjPoint& p);
bool contains(const Flat& outer, const Flat& inner);

/// Pairwise disjoint. Requires at least two flats.
bool are_skew(std::span<const Flat> flats);
/// Each flat misses the span of the others. A single flat is split.
bool is_split(std::span<const Flat> flats);

/// Image of every point under p -> m p.
PointSet apply(const QMatrix& m, const PointSet& x);

struct CoordinateChange {
  PointSet points;
  QMatrix change;  // new = change * old
};

/// Linear change of coordinates after which no point lies on {x0 = 0}.
/// Returns the identity when the set already avoids that hyperplane.
CoordinateChange ensure_x0_nonvanishing(const PointSet& x, std::uint64_t seed);

}  // namespace cblab
