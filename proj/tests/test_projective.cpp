#include "cblab/projective.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace cblab;
using cblab::testing::pt;

namespace {

Flat line(const ProjPoint& a, const ProjPoint& b) {
  const std::vector<ProjPoint> pair{a, b};
  return span(std::span<const ProjPoint>(pair));
}

// Coordinate flat spanned by e_i for i in [first, last].
Flat block(std::size_t n, std::size_t first, std::size_t last) {
  std::vector<ProjPoint> pts;
  for (std::size_t i = first; i <= last; ++i) {
    QVector e(n + 1);
    e[i] = 1;
    pts.emplace_back(e);
  }
  return span(std::span<const ProjPoint>(pts));
}

Flat random_flat(Rng& rng, std::size_t n, std::size_t dim) {
  for (;;) {
    QMatrix rows(dim + 1, n + 1);
    for (std::size_t i = 0; i <= dim; ++i)
      for (std::size_t j = 0; j <= n; ++j) rows(i, j) = rng.uniform(-2, 2);
    if (rank(rows) == dim + 1) return Flat::from_rows(rows);
  }
}

}  // namespace

TEST_CASE("points are normalized so the first nonzero coordinate is 1") {
  auto p = pt({0, 2, 4});
  CHECK(p.coords() == QVector{Rational(0), Rational(1), Rational(2)});
  CHECK(pt({3, 6}) == pt({-1, -2}));
  CHECK_THROWS_AS(pt({0, 0, 0}), std::invalid_argument);
}

TEST_CASE("point sets reject repeated projective points") {
  CHECK_THROWS_AS(PointSet(1, {pt({1, 2}), pt({2, 4})}), std::invalid_argument);
  CHECK_THROWS_AS(PointSet(2, {pt({1, 2})}), std::invalid_argument);
  PointSet x(1, {pt({1, 0}), pt({1, 1}), pt({0, 1})});
  auto y = x.without(1);
  CHECK(y.size() == 2);
  CHECK(y.labels() == std::vector<std::size_t>{0, 2});
  CHECK(y.index_of_label(2) == 1);
}

TEST_CASE("span examples") {
  CHECK(line(pt({1, 0, 0}), pt({0, 1, 0})).proj_dim() == 1);
  const std::vector<ProjPoint> three{pt({1, 0, 0, 0}), pt({0, 1, 0, 0}), pt({0, 0, 1, 0})};
  CHECK(span(std::span<const ProjPoint>(three)).proj_dim() == 2);
  const std::vector<Flat> skew{block(3, 0, 1), block(3, 2, 3)};
  CHECK(span(std::span<const Flat>(skew)).proj_dim() == 3);
  CHECK_THROWS_AS(span(std::span<const SpanItem>()), std::invalid_argument);
}

TEST_CASE("intersect examples") {
  const Flat l = block(3, 0, 1);
  auto same = intersect(l, l);
  REQUIRE(same.has_value());
  CHECK(*same == l);

  auto meet = intersect(line(pt({1, 0, 0}), pt({0, 1, 0})), line(pt({1, 1, 1}), pt({0, 0, 1})));
  REQUIRE(meet.has_value());
  CHECK(meet->proj_dim() == 0);
  CHECK(contains(*meet, pt({1, 1, 0})));

  CHECK_FALSE(intersect(block(3, 0, 1), block(3, 2, 3)).has_value());
}

TEST_CASE("contains examples") {
  const auto p = pt({2, 3, 5});
  CHECK(contains(Flat::of_point(p), p));
  CHECK_FALSE(contains(line(pt({1, 0, 0}), pt({0, 1, 0})), pt({0, 0, 1})));
  CHECK(contains(line(pt({1, 0, 1}), pt({0, 1, 0})), pt({1, 1, 1})));
}

TEST_CASE("skew and split examples") {
  const std::vector<Flat> two_skew{block(3, 0, 1), block(3, 2, 3)};
  CHECK(are_skew(two_skew));
  CHECK(is_split(two_skew));

  const std::vector<Flat> plane_lines{line(pt({1, 0, 0}), pt({0, 1, 0})),
                                      line(pt({0, 0, 1}), pt({1, 1, 1}))};
  CHECK_FALSE(are_skew(plane_lines));

  const std::vector<Flat> three_blocks{block(5, 0, 1), block(5, 2, 3), block(5, 4, 5)};
  CHECK(are_skew(three_blocks));
  CHECK(is_split(three_blocks));

  // Three pairwise skew lines of P^3: e0e1, e2e3, and (1:0:1:0)(0:1:0:1).
  const std::vector<Flat> in_p3{block(3, 0, 1), block(3, 2, 3),
                                line(pt({1, 0, 1, 0}), pt({0, 1, 0, 1}))};
  CHECK(are_skew(in_p3));
  CHECK_FALSE(is_split(in_p3));

  CHECK(is_split(std::vector<Flat>{block(2, 0, 1)}));
  CHECK_THROWS_AS(are_skew(std::vector<Flat>{block(2, 0, 1)}), std::invalid_argument);
}

TEST_CASE("split identity and split/skew implications on random configurations") {
  Rng rng(7);
  int splits = 0, non_splits = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform(2, 6));
    const auto k = static_cast<std::size_t>(rng.uniform(2, 3));
    std::vector<Flat> flats;
    std::size_t dim_sum = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto d = static_cast<std::size_t>(rng.uniform(1, std::min<long>(2, static_cast<long>(n) - 1)));
      flats.push_back(random_flat(rng, n, d));
      dim_sum += d;
    }
    bool distinct = true;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) distinct = distinct && !(flats[i] == flats[j]);
    if (!distinct) continue;

    const bool split = is_split(flats);
    const bool skew = are_skew(flats);
    const auto span_dim = span(std::span<const Flat>(flats)).proj_dim();
    CHECK(split == (span_dim == dim_sum + k - 1));
    if (split) CHECK(skew);
    if (k == 2) CHECK(skew == split);
    (split ? splits : non_splits)++;
  }
  CHECK(splits > 10);
  CHECK(non_splits > 10);
}

TEST_CASE("span monotone and idempotent, intersections inside both flats") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4;
    const Flat a = random_flat(rng, n, static_cast<std::size_t>(rng.uniform(1, 3)));
    const Flat b = random_flat(rng, n, static_cast<std::size_t>(rng.uniform(1, 3)));
    const std::vector<SpanItem> items{a, b};
    const Flat s = span(std::span<const SpanItem>(items));
    CHECK(contains(s, a));
    CHECK(contains(s, b));
    const std::vector<SpanItem> again{s, a, b};
    CHECK(span(std::span<const SpanItem>(again)) == s);
    if (auto m = intersect(a, b)) {
      CHECK(contains(a, *m));
      CHECK(contains(b, *m));
    }
    // Rescaled representatives describe the same point.
    QVector v = a.basis().row_vector(0);
    for (auto& c : v) c *= Rational(-7, 3);
    CHECK(contains(a, ProjPoint(v)));
  }
}

TEST_CASE("ensure_x0_nonvanishing") {
  const PointSet clean(2, {pt({1, 0, 0}), pt({1, 2, 3})});
  auto same = ensure_x0_nonvanishing(clean, 5);
  CHECK(same.change == QMatrix::identity(3));
  CHECK(same.points == clean);

  const PointSet dirty(2, {pt({0, 1, 0}), pt({1, 1, 1}), pt({0, 0, 1}), pt({0, 1, -1})});
  auto fixed = ensure_x0_nonvanishing(dirty, 5);
  for (const auto& p : fixed.points.points()) CHECK(sgn(p[0]) != 0);
  CHECK(fixed.points.labels() == dirty.labels());

  auto back = inverse(fixed.change);
  REQUIRE(back.has_value());
  CHECK(apply(*back, fixed.points) == dirty);

  CHECK(ensure_x0_nonvanishing(dirty, 5).change == fixed.change);
}
