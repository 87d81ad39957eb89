#include <doctest.h>

#include <algorithm>
#include <set>

#include "cblab/cover.hpp"
#include "oracles.hpp"

using namespace cblab;
using namespace cblab::testing;

namespace {

Flat line(std::initializer_list<long> a, std::initializer_list<long> b) {
  const std::vector<ProjPoint> pair{pt(a), pt(b)};
  return span(std::span<const ProjPoint>(pair));
}

PointSet two_skew_lines() {
  return points(3, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
}

// Every point covered, blocks partition the labels, flats distinct and
// positive-dimensional, and each block sits on its flat.
void check_sound(const PointSet& x, const CoverResult& c, std::size_t budget) {
  CHECK(c.total_dim == c.config.dimension());
  CHECK(c.total_dim <= budget);
  REQUIRE(c.blocks.size() == c.config.flats.size());
  std::multiset<std::size_t> seen;
  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    CHECK(c.config.flats[k].proj_dim() >= 1);
    for (std::size_t j = k + 1; j < c.config.flats.size(); ++j)
      CHECK_FALSE(c.config.flats[k] == c.config.flats[j]);
    CHECK_FALSE(c.blocks[k].empty());
    for (auto label : c.blocks[k]) {
      seen.insert(label);
      const std::size_t i = x.index_of_label(label);
      REQUIRE(i < x.size());
      CHECK(contains(c.config.flats[k], x[i]));
    }
  }
  CHECK(seen == std::multiset<std::size_t>(x.labels().begin(), x.labels().end()));
  for (const auto& p : x.points()) CHECK(c.config.covers(p));
}

std::size_t span_dim(const PointSet& x) {
  return span(std::span<const ProjPoint>(x.points())).proj_dim();
}

}  // namespace

TEST_CASE("configuration dimension and length") {
  const Flat l1 = line({1, 0, 0, 0}, {0, 1, 0, 0});
  const Flat l2 = line({0, 0, 1, 0}, {0, 0, 0, 1});
  const Flat plane = Flat::from_rows(QMatrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}, 4));
  const Flat l3 = line({0, 0, 0, 1}, {1, 1, 1, 1});

  PlaneConfiguration one{{l1}};
  CHECK(config_dim(one) == 1);
  CHECK(config_len(one) == 1);
  PlaneConfiguration two{{l1, l2}};
  CHECK(config_dim(two) == 2);
  CHECK(config_len(two) == 2);
  PlaneConfiguration mixed{{plane, l3}};
  CHECK(config_dim(mixed) == 3);
  CHECK(config_len(mixed) == 2);
  CHECK(mixed.covers(pt({1, 2, 3, 0})));
  CHECK_FALSE(mixed.covers(pt({1, 2, 3, 4})));
}

TEST_CASE("classify") {
  const Flat a = line({1, 0, 0, 0}, {0, 1, 0, 0});
  const Flat b = line({0, 0, 1, 0}, {0, 0, 0, 1});
  auto c = classify({{a, b}});
  CHECK(c.skew);
  CHECK(c.split);

  // Two lines in a plane meet.
  const Flat p = line({1, 0, 0}, {0, 1, 0});
  const Flat q = line({1, 0, 0}, {0, 0, 1});
  c = classify({{p, q}});
  CHECK_FALSE(c.skew);
  CHECK_FALSE(c.split);

  // Three pairwise skew lines in P^3 are not split.
  const Flat r = line({1, 0, 1, 0}, {0, 1, 0, 1});
  c = classify({{a, b, r}});
  CHECK(c.skew);
  CHECK_FALSE(c.split);

  c = classify({{a}});
  CHECK(c.skew);
  CHECK(c.split);
}

TEST_CASE("matroid flats examples") {
  const auto general = points(2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}});
  std::size_t lines = 0;
  for (const auto& s : matroid_flats(general, 1)) {
    if (s.proj_dim == 1) {
      ++lines;
      CHECK(s.indices().size() == 2);
    }
  }
  CHECK(lines == 6);

  // 3x3 grid on {0,1,3} x {0,2,7}: rows and columns only, no diagonals.
  std::vector<ProjPoint> g;
  for (long a : {0, 1, 3})
    for (long b : {0, 2, 7}) g.push_back(pt({1, a, b}));
  const PointSet grid33(2, g);
  std::size_t triples = 0;
  for (const auto& s : matroid_flats(grid33, 1))
    if (s.proj_dim == 1 && s.indices().size() == 3) ++triples;
  CHECK(triples == 6);

  // The evenly spaced grid adds both diagonals.
  triples = 0;
  for (const auto& s : matroid_flats(grid(3, 3), 1))
    if (s.proj_dim == 1 && s.indices().size() == 3) ++triples;
  CHECK(triples == 8);

  const auto row = collinear(5, 3);
  std::vector<ClosedSet> dim1;
  for (const auto& s : matroid_flats(row, 3))
    if (s.proj_dim == 1) dim1.push_back(s);
  REQUIRE(dim1.size() == 1);
  CHECK(dim1[0].members == 0b11111);
  // Nothing above the span's dimension.
  for (const auto& s : matroid_flats(row, 3)) CHECK(s.proj_dim <= 1);

  // Ordered by dimension.
  const auto all = matroid_flats(grid(3, 3), 2);
  CHECK(std::is_sorted(all.begin(), all.end(),
                       [](const ClosedSet& a, const ClosedSet& b) { return a.proj_dim < b.proj_dim; }));
  CHECK(all.back().proj_dim == 2);
  CHECK(all.back().members == 0x1ff);
}

TEST_CASE("matroid flats agree with the closure definition") {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(2, 4));
    const auto x = random_points(rng, n, static_cast<std::size_t>(rng.uniform(1, 9)), 1 + trial % 3);
    const long max_dim = rng.uniform(0, 3);
    std::set<std::uint64_t> got;
    for (const auto& s : matroid_flats(x, static_cast<std::size_t>(max_dim))) {
      CHECK(got.insert(s.members).second);
      CHECK(static_cast<long>(s.proj_dim) == span_dim_oracle(x, s.indices()));
    }
    std::set<std::uint64_t> want;
    for (auto m : closed_sets_oracle(x, max_dim)) want.insert(m);
    CHECK(got == want);
  }
}

TEST_CASE("min_cover examples") {
  auto c = min_cover(collinear(5, 2), 1);
  REQUIRE(c);
  CHECK(c->total_dim == 1);
  CHECK(c->optimal);
  check_sound(collinear(5, 2), *c, 1);

  const auto skew = two_skew_lines();
  c = min_cover(skew, 4);
  REQUIRE(c);
  CHECK(c->total_dim == 2);
  CHECK(c->config.length() == 2);
  check_sound(skew, *c, 4);
  CHECK_FALSE(min_cover(skew, 1));

  const auto spanning = points(3, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 1, 1, 1},
                                   {1, 2, 3, 4}, {1, -1, 2, 5}});
  for (std::size_t budget = 3; budget <= 5; ++budget) {
    c = min_cover(spanning, budget);
    REQUIRE(c);
    CHECK(c->total_dim <= 3);
    check_sound(spanning, *c, budget);
  }

  // A single point needs a line.
  const auto single = points(2, {{1, 2, 3}});
  c = min_cover(single, 1);
  REQUIRE(c);
  CHECK(c->total_dim == 1);
  check_sound(single, *c, 1);
  CHECK_FALSE(min_cover(single, 0));

  c = min_cover(PointSet(2), 0);
  REQUIRE(c);
  CHECK(c->total_dim == 0);
  CHECK(c->config.length() == 0);
}

TEST_CASE("min_cover_dim examples") {
  CHECK(min_cover_dim(PointSet(3)) == 0);
  CHECK(min_cover_dim(grid(3, 3)) == 2);

  std::vector<ProjPoint> padded;
  const auto g = grid(3, 3);
  for (const auto& p : g.points()) {
    QVector v = p.coords();
    v.resize(5);
    padded.emplace_back(v);
  }
  CHECK(min_cover_dim(PointSet(4, padded)) == 2);

  CHECK(lies_on_config_dim(collinear(4, 3), 1));
  CHECK_FALSE(lies_on_config_dim(two_skew_lines(), 1));
  CHECK(lies_on_config_dim(grid(3, 3), span_dim(grid(3, 3))));
  // Two lines of a 2x2 grid, versus the plane.
  CHECK(min_cover_dim(grid(2, 2)) == 2);
  CHECK(min_cover_dim(grid(2, 5)) == 2);
}

TEST_CASE("inexhaustive search carries a greedy bound") {
  const auto x = grid(3, 3);
  CoverOptions small;
  small.exhaustive_limit = 5;
  try {
    (void)min_cover(x, 2, small);
    FAIL("expected InexhaustiveError");
  } catch (const InexhaustiveError& e) {
    CHECK_FALSE(e.greedy().optimal);
    check_sound(x, e.greedy(), e.greedy().total_dim);
    CHECK(e.greedy().total_dim >= 2);
  }
  CHECK_THROWS_AS((void)min_cover_dim(x, small), InexhaustiveError);

  std::vector<ProjPoint> many;
  for (long t = 0; t < 70; ++t) many.push_back(pt({1, t, t * t}));
  CHECK_THROWS_AS((void)matroid_flats(PointSet(2, many), 1), std::invalid_argument);
  const auto g = greedy_cover(PointSet(2, many));
  check_sound(PointSet(2, many), g, g.total_dim);
}

TEST_CASE("min_cover matches the partition oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
    PointSet x(n);
    if (rng.coin() && n >= 2) {
      // Points on a few random lines and planes make cheap covers likely.
      const auto pieces = rng.uniform(1, 3);
      for (long k = 0; k < pieces; ++k) {
        const Flat f = random_flat(rng, n, static_cast<std::size_t>(rng.uniform(1, std::min<long>(2, n))), 2);
        const auto count = rng.uniform(1, 3);
        for (long j = 0; j < count; ++j) x.add(point_on(rng, f, 3));
      }
    } else {
      x = random_points(rng, n, static_cast<std::size_t>(rng.uniform(1, 8)), n > 1 ? 1 + trial % 2 : 3);
    }
    if (x.size() > 9) continue;
    const std::size_t want = partition_cover_oracle(x);
    const std::size_t got = min_cover_dim(x);
    CHECK_MESSAGE(got == want, "trial " << trial);
    const auto c = min_cover(x, got);
    REQUIRE(c);
    check_sound(x, *c, got);
    if (got > 1) CHECK_FALSE(min_cover(x, got - 1));
  }
}

TEST_CASE("cover monotonicity and span bound") {
  Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(2, 4));
    const auto x = random_points(rng, n, static_cast<std::size_t>(rng.uniform(2, 10)), 1 + trial % 3);
    const std::size_t whole = min_cover_dim(x);
    CHECK(whole <= std::max<std::size_t>(1, span_dim(x)));
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(min_cover_dim(x.without(i)) <= whole);
  }
}

TEST_CASE("shrinking flats to spans never increases dimension") {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(2, 4));
    PlaneConfiguration config;
    PointSet x(n);
    std::vector<std::vector<ProjPoint>> on;
    const auto pieces = rng.uniform(1, 3);
    for (long k = 0; k < pieces; ++k) {
      const Flat f = random_flat(rng, n, static_cast<std::size_t>(rng.uniform(1, n)), 3);
      if (std::find(config.flats.begin(), config.flats.end(), f) != config.flats.end()) continue;
      config.flats.push_back(f);
      on.emplace_back();
      const auto count = rng.uniform(1, 4);
      for (long j = 0; j < count; ++j) {
        const ProjPoint p = point_on(rng, f, 4);
        x.add(p);
        on.back().push_back(p);
      }
    }
    for (const auto& p : x.points()) REQUIRE(config.covers(p));

    std::size_t reduced = 0;
    for (const auto& pts : on) {
      const Flat s = span(std::span<const ProjPoint>(pts));
      reduced += std::max<std::size_t>(1, s.proj_dim());
    }
    CHECK(reduced <= config.dimension());
    CHECK(min_cover_dim(x) <= reduced);
  }
}

TEST_CASE("exhaustive limit from the environment") {
  CHECK(default_exhaustive_limit() >= 1);
  CHECK(CoverOptions{}.exhaustive_limit == default_exhaustive_limit());
}
