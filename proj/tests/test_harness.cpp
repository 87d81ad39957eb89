#include <doctest.h>

#include "cblab/harness.hpp"
#include "oracles.hpp"

using namespace cblab;
using namespace cblab::testing;

namespace {

std::vector<Flat> split_lines(std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  for (;;) {
    std::vector<Flat> flats;
    for (std::size_t i = 0; i < k; ++i) flats.push_back(random_flat(rng, 2 * k - 1, 1));
    if (is_split(flats)) return flats;
  }
}

bool all_pass(const std::vector<Instance>& instances, const std::function<VerdictReport(const Instance&)>& f,
              std::size_t* decided = nullptr) {
  bool ok = true;
  for (const auto& inst : instances) {
    const auto v = f(inst);
    if (v.status == Status::fail || v.status == Status::inconclusive) {
      ok = false;
      MESSAGE(to_json(v).dump());
    }
    if (decided && v.status == Status::pass && !v.diagnostics.contains("vacuous")) ++*decided;
  }
  return ok;
}

}  // namespace

TEST_CASE("gen_collinear") {
  const auto five = gen_collinear(5, 3, 11);
  CHECK(five.point_set.size() == 5);
  CHECK(span_dim_oracle(five.point_set, {0, 1, 2, 3, 4}) == 1);
  CHECK(max_cbp_degree(five.point_set).degree == 3);
  CHECK(cbp(gen_collinear(2, 2, 1).point_set, 0).verdict);
  for (int r = 0; r <= 5; ++r) {
    const auto x = gen_collinear(static_cast<std::size_t>(r) + 2, 4, 100 + r).point_set;
    CHECK(cbp(x, r).verdict);
    CHECK_FALSE(cbp(x, r + 1, true).verdict);
  }
}

TEST_CASE("gen_grid") {
  const auto g33 = gen_grid(3, 3).point_set;
  CHECK(g33.size() == 9);
  CHECK(cbp(g33, 3).verdict);
  CHECK(cbp(gen_grid(2, 2).point_set, 1).verdict);
  const auto one = gen_grid(1, 1).point_set;
  CHECK(one.size() == 1);
  CHECK(max_cbp_degree(one).degree == -1);
  const auto g = gen_grid(3, 4);
  REQUIRE(g.known_config);
  CHECK(g.known_config->length() == 3);
  for (const auto& p : g.point_set.points()) CHECK(g.known_config->covers(p));
}

TEST_CASE("gen_on_flats") {
  for (std::size_t r = 1; r <= 3; ++r) {
    const auto inst = gen_on_flats(split_lines(2, r), {r + 2, r + 2}, 5);
    CHECK(inst.point_set.size() == 2 * r + 4);
    CHECK(cbp(inst.point_set, static_cast<int>(r)).verdict);
    REQUIRE(inst.known_config);
    for (const auto& p : inst.point_set.points()) CHECK(inst.known_config->covers(p));
  }
  const auto line = split_lines(1, 4);
  const auto on_line = gen_on_flats(line, {6}, 2);
  CHECK(max_cbp_degree(on_line.point_set).degree == max_cbp_degree(gen_collinear(6, 1, 3).point_set).degree);

  // A plane with four points and a split line with three, r = 1. Small
  // heights can put three plane points on a line, so take the first seed
  // whose plane part has CBP(1).
  Rng rng(8);
  std::vector<Flat> mixed;
  do {
    mixed = {random_flat(rng, 4, 2), random_flat(rng, 4, 1)};
  } while (!is_split(mixed));
  bool found = false;
  for (std::uint64_t seed = 0; seed < 20 && !found; ++seed) {
    const auto pl = gen_on_flats(mixed, {4, 3}, seed);
    std::vector<std::size_t> plane;
    for (std::size_t i = 0; i < pl.point_set.size(); ++i)
      if (contains(mixed[0], pl.point_set[i])) plane.push_back(i);
    if (!cbp(pl.point_set.subset(plane), 1, true).verdict) continue;
    found = true;
    CHECK(cbp(pl.point_set, 1).verdict);
  }
  CHECK(found);

  // Extra points stay off the configuration, fixed points are kept.
  const auto lines = split_lines(2, 9);
  const ProjPoint fixed = pt({1, 1, 1, 1});
  const auto extra = gen_on_flats(lines, {3, 3}, 4, 2, {fixed}, 1);
  CHECK(extra.point_set.size() == 9);
  CHECK(extra.point_set[0] == fixed);
  REQUIRE(extra.known_config);
  CHECK(extra.known_config->length() == 1);
  std::size_t off = 0;
  for (const auto& p : extra.point_set.points())
    if (!contains(lines[0], p) && !contains(lines[1], p)) ++off;
  CHECK(off == 3);
}

TEST_CASE("generators are reproducible") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto a = gen_random(3, 8, 20, seed), b = gen_random(3, 8, 20, seed);
    CHECK(a.point_set == b.point_set);
    CHECK(to_json(a.point_set).dump() == to_json(b.point_set).dump());
    for (const auto& p : a.point_set.points()) CHECK(height(p) <= 20);
  }
  CHECK_FALSE(gen_random(3, 8, 20, 1).point_set == gen_random(3, 8, 20, 2).point_set);
  CHECK_THROWS_AS(gen_random(1, 10, 1, 0), std::invalid_argument);
  for (const char* kind : {"mixed", "structured"}) {
    const auto a = corpus(kind, 10, 77), b = corpus(kind, 10, 77);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].point_set == b[i].point_set);
      CHECK(a[i].provenance == b[i].provenance);
    }
  }
  for (const auto& inst : corpus("mixed", 40, 5)) {
    CHECK(inst.point_set.ambient() <= 4);
    CHECK(inst.point_set.size() <= 15);
  }
}

TEST_CASE("rational normal curve points") {
  // s points on the curve of P^n have CBP(r) exactly when s >= n r + 2.
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t r = 1; r <= 2; ++r) {
      CHECK(cbp(gen_rnc(n * r + 2, n, n + r).point_set, static_cast<int>(r)).verdict);
      CHECK_FALSE(cbp(gen_rnc(n * r + 1, n, n + r).point_set, static_cast<int>(r)).verdict);
    }
  }
}

TEST_CASE("height") {
  CHECK(height(pt({2, 4, -6})) == 3);
  CHECK(height(ProjPoint(QVector{Rational(1, 2), Rational(1, 3)})) == 3);
}

TEST_CASE("verify_bcd examples") {
  auto v = verify_bcd(gen_collinear(5, 2, 1));
  CHECK(v.status == Status::pass);
  CHECK_FALSE(v.diagnostics.contains("vacuous"));
  CHECK(v.diagnostics["min_cover_dim"] == 1);
  v = verify_bcd(gen_grid(3, 3));
  CHECK(v.status == Status::pass);
  CHECK(v.diagnostics["vacuous"] == true);
  // Two skew lines with r+2 points each: |X| = 2r+4 > 2r+1.
  v = verify_bcd(gen_on_flats(split_lines(2, 3), {4, 4}, 1));
  CHECK(v.status == Status::pass);
  CHECK(v.diagnostics["vacuous"] == true);
}

TEST_CASE("verify_conjecture examples") {
  // Four split lines with r+2 points each for r = 7: 36 <= 36.
  CoverOptions wide;
  wide.exhaustive_limit = 64;
  const auto four = gen_on_flats(split_lines(4, 2), {9, 9, 9, 9}, 3);
  auto v = verify_conjecture(four, 4, wide);
  CHECK(v.status == Status::pass);
  CHECK(v.diagnostics["min_cover_dim"] == 4);
  // Default limit is 24, so the same check is inconclusive, never a pass.
  CoverOptions narrow;
  narrow.exhaustive_limit = 24;
  CHECK(verify_conjecture(four, 4, narrow).status == Status::inconclusive);

  v = verify_conjecture(gen_collinear(6, 3, 2), 1);
  CHECK(v.status == Status::pass);
  CHECK(v.diagnostics["min_cover_dim"] == 1);
  CHECK(verify_conjecture(gen_grid(3, 3), 4).status == Status::pass);
}

TEST_CASE("verify_complement examples") {
  // Two split lines, the first known: dropping it leaves r+2 collinear points.
  const auto inst = gen_on_flats(split_lines(2, 4), {4, 4}, 2, 0, {}, 1);
  auto v = verify_complement(inst);
  CHECK(v.status == Status::pass);
  CHECK(v.diagnostics["checks"] == 1);
  // Grid minus one of its lines keeps CBP(2).
  v = verify_complement(gen_grid(3, 3));
  CHECK(v.status == Status::pass);
  const auto g = gen_grid(3, 3);
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < g.point_set.size(); ++i)
    if (!contains(g.known_config->flats[0], g.point_set[i])) rest.push_back(i);
  CHECK(cbp(g.point_set.subset(rest), 2).verdict);
  CHECK(verify_complement(gen_random(2, 5, 3, 1)).status == Status::skipped);
}

TEST_CASE("verify_split_equiv examples") {
  for (std::size_t r = 1; r <= 3; ++r) {
    auto v = verify_split_equiv(gen_on_flats(split_lines(2, r), {r + 2, r + 2}, r));
    CHECK(v.status == Status::pass);
    v = verify_split_equiv(gen_on_flats(split_lines(2, r), {r + 2, r + 1}, r));
    CHECK(v.status == Status::pass);
  }
  CHECK(verify_split_equiv(gen_collinear(5, 2, 1)).status == Status::pass);
  // Coplanar grid lines are not split.
  CHECK(verify_split_equiv(gen_grid(3, 3)).status == Status::skipped);
}

TEST_CASE("verify_skew_counts examples") {
  for (std::size_t r = 1; r <= 3; ++r) {
    const auto v = verify_skew_counts(gen_on_flats(split_lines(2, r + 10), {r + 2, r + 2}, r));
    CHECK(v.status == Status::pass);
    CHECK_FALSE(v.diagnostics.contains("vacuous"));
  }
  const auto three = gen_on_flats(split_lines(3, 1), {3, 3, 3}, 1);
  const auto v = verify_skew_counts(three);
  CHECK(v.status == Status::pass);
  CHECK(v.diagnostics["max_cbp"] == 1);
}

TEST_CASE("verify_meeting examples") {
  // Two lines of P^2 through p = (1:0:0); 3 points on each away from p.
  const Flat a = Flat::from_rows(QMatrix::from_rows({{1, 0, 0}, {0, 1, 0}}, 3));
  const Flat b = Flat::from_rows(QMatrix::from_rows({{1, 0, 0}, {0, 0, 1}}, 3));
  auto v = verify_meeting(gen_on_flats({a, b}, {3, 3}, 1));
  CHECK(v.status == Status::pass);
  CHECK(v.diagnostics["p"] == Json::array({"1", "0", "0"}));
  // Six points on two lines form a complete intersection with CBP(2).
  CHECK(v.diagnostics["max_cbp"] == 2);
  v = verify_meeting(gen_on_flats({a, b}, {3, 3}, 1, 0, {pt({1, 0, 0})}));
  CHECK(v.status == Status::pass);
  const auto skew = gen_on_flats(split_lines(2, 5), {3, 3}, 1);
  CHECK(verify_meeting(skew).status == Status::skipped);

  // Planes of P^4 meeting at p = e2, with p in X. On the second plane X is p
  // plus three points of a line missing p: without p it has CBP(1), with p it
  // does not, so only the unsplit reading fails.
  const Flat p1 = Flat::from_rows(QMatrix::from_rows({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}}, 5));
  const Flat p2 = Flat::from_rows(QMatrix::from_rows({{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}}, 5));
  const auto x = points(4, {{0, 0, 1, 0, 0},
                            {1, 0, 0, 0, 0},
                            {0, 1, 0, 0, 0},
                            {1, 1, 1, 0, 0},
                            {1, 2, 4, 0, 0},
                            {1, 3, 9, 0, 0},
                            {1, -1, 5, 0, 0},
                            {0, 0, 0, 1, 0},
                            {0, 0, 0, 0, 1},
                            {0, 0, 0, 1, 1}});
  REQUIRE(cbp(x, 1).verdict);
  v = verify_meeting(Instance{x, {{"generator", "explicit"}}, PlaneConfiguration{{p1, p2}}});
  CHECK(v.status == Status::pass);
  CHECK(v.diagnostics["p_in_X"] == true);
  CHECK(v.diagnostics["collapsed_failures"] == Json::array({{{"piece", 1}, {"r", 1}}}));
}

TEST_CASE("verify_inductive_bound examples") {
  for (const auto& inst : corpus("structured", 30, 4)) {
    const auto v2 = verify_inductive_bound(inst, 2);
    CHECK(v2.status == Status::pass);
  }
  const auto v = verify_inductive_bound(gen_collinear(6, 2, 1), 2);
  CHECK(v.status == Status::pass);
  CHECK(v.diagnostics["vacuous"] == true);
  CHECK_THROWS_AS(verify_inductive_bound(gen_collinear(3, 2, 1), 1), std::invalid_argument);
}

TEST_CASE("corpus verifiers") {
  std::size_t decided = 0;
  CHECK(all_pass(corpus("split", 25, 1), verify_split_equiv, &decided));
  CHECK(decided > 10);
  decided = 0;
  CHECK(all_pass(corpus("skew", 25, 1), verify_skew_counts, &decided));
  CHECK(decided > 5);
  decided = 0;
  CHECK(all_pass(corpus("meeting", 25, 1), verify_meeting, &decided));
  CHECK(decided > 5);
  decided = 0;
  CHECK(all_pass(corpus("complement", 25, 1), verify_complement, &decided));
  CHECK(decided > 10);
  const auto mixed = corpus("mixed", 25, 1);
  CHECK(all_pass(mixed, verify_corollary));
  CHECK(all_pass(mixed, verify_characterizations));
  CHECK(all_pass(mixed, verify_dual_dimension));
  CHECK(all_pass(mixed, [](const Instance& i) { return verify_bcd(i); }));
}

TEST_CASE("counterexample search") {
  for (std::size_t d : {1, 4, 5}) {
    const auto res = counterexample_search(d, 3, 25, 7);
    CHECK(res.trials == 25);
    CHECK(res.hits.empty());
    CHECK(res.inconclusive.empty());
    const Json j = to_json(res, d, 3, 7);
    CHECK(j["search"]["d"] == d);
    CHECK(j["hits"].empty());
  }
  const auto a = counterexample_search(4, 2, 30, 1), b = counterexample_search(4, 2, 30, 1);
  CHECK(to_json(a, 4, 2, 1).dump() == to_json(b, 4, 2, 1).dump());
  CHECK(a.candidates > 0);
}

TEST_CASE("run_suite is deterministic across thread counts") {
  Json config = Json::parse(R"({
    "seed": 3,
    "runs": [
      {"property": "bcd", "corpus": "collinear", "count": 6},
      {"property": "split_equiv", "corpus": "split", "count": 6},
      {"property": "conjecture", "corpus": "structured", "count": 6, "d": 4}
    ],
    "searches": [{"d": 4, "r": 2, "trials": 10}]
  })");
  const auto one = run_suite(config);
  config["threads"] = 3;
  const auto three = run_suite(config);
  CHECK(report_lines(one) == report_lines(three));
  CHECK(one.ok());
  CHECK(one.verdicts.size() == 18);
  CHECK(summary_table(one).find("OK") != std::string::npos);

  CHECK_THROWS_AS(run_suite(Json::parse(R"({"runs": [{"property": "nope", "corpus": "grid"}]})")), ParseError);
  CHECK_THROWS_AS(run_suite(Json::parse(R"({"runs": [{"property": "bcd", "corpus": "nope"}]})")), ParseError);
}
