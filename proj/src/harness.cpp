#include "cblab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "cblab/hilbert.hpp"

namespace cblab {

namespace {

std::uint64_t string_salt(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::uint64_t instance_seed(std::uint64_t seed, const std::string& kind, std::size_t i) {
  return Rng(seed ^ string_salt(kind)).fork(i).next();
}

Json flats_json(const std::vector<Flat>& flats) {
  Json out = Json::array();
  for (const auto& f : flats) out.push_back(to_json(f));
  return out;
}

std::size_t size_of(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_unsigned())
    throw ParseError(std::string("provenance: \"") + key + "\" must be a nonnegative integer");
  return j.at(key).get<std::size_t>();
}

std::uint64_t seed_of(const Json& j) {
  if (!j.contains("seed") || !j.at("seed").is_number_unsigned())
    throw ParseError("provenance: \"seed\" must be a nonnegative integer");
  return j.at("seed").get<std::uint64_t>();
}

// Primitive integer pair (a, b) with b >= 0 and a > 0 when b == 0.
std::pair<long, long> random_ratio(Rng& rng, long bound) {
  for (;;) {
    long a = rng.uniform(-bound, bound), b = rng.uniform(0, bound);
    if (a == 0 && b == 0) continue;
    if (b == 0) a = 1;
    if (std::gcd(a, b) != 1) continue;
    return {a, b};
  }
}

ProjPoint combination(Rng& rng, const Flat& f, long bound) {
  for (;;) {
    QVector v(f.ambient() + 1);
    for (std::size_t i = 0; i < f.basis().rows(); ++i) {
      const Rational c(rng.uniform(-bound, bound));
      if (sgn(c) == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += c * f.basis()(i, j);
    }
    if (std::any_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) != 0; }))
      return ProjPoint(std::move(v));
  }
}

ProjPoint random_point(Rng& rng, std::size_t n, long bound) {
  for (;;) {
    QVector v(n + 1);
    bool nonzero = false;
    for (auto& c : v) {
      c = rng.uniform(-bound, bound);
      nonzero = nonzero || sgn(c) != 0;
    }
    if (nonzero) return ProjPoint(std::move(v));
  }
}

// Adds p if new; reports whether it was.
bool add_fresh(PointSet& x, const ProjPoint& p) {
  const std::size_t before = x.size();
  x.add(p);
  return x.size() > before;
}

std::vector<std::size_t> members_on(const PointSet& x, const Flat& f) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (contains(f, x[i])) out.push_back(i);
  return out;
}

PointSet restrict(const PointSet& x, const std::vector<std::size_t>& idx) { return x.subset(idx); }

// Shared per-instance data: max CBP degree in fast mode and the HF table.
struct Profile {
  HilbertFunction hf;
  int max_cbp = -1;
};

Profile profile(const PointSet& x) {
  Profile p;
  p.hf = hf_full(x);
  if (!x.empty()) p.max_cbp = max_cbp_degree(x, true).degree;
  return p;
}

bool has_cbp(const PointSet& x, int r) { return !x.empty() && cbp(x, r, true).verdict; }

VerdictReport start(const std::string& property, const Instance& inst) {
  VerdictReport v;
  v.property = property;
  v.provenance = inst.provenance;
  v.diagnostics = Json::object();
  v.diagnostics["size"] = inst.point_set.size();
  return v;
}

void put_profile(VerdictReport& v, const Profile& p) {
  v.diagnostics["HF"] = p.hf.values;
  v.diagnostics["rX"] = p.hf.reg_index;
  v.diagnostics["max_cbp"] = p.max_cbp;
}

VerdictReport vacuous(VerdictReport v) {
  v.status = Status::pass;
  v.diagnostics["vacuous"] = true;
  return v;
}

VerdictReport skipped(VerdictReport v, const std::string& why) {
  v.status = Status::skipped;
  v.diagnostics["reason"] = why;
  return v;
}

// Minimum cover dimension if it is at most `budget`; nullopt when larger.
// Throws InexhaustiveError.
std::optional<std::size_t> cover_within(const PointSet& x, std::size_t budget,
                                        const CoverOptions& options) {
  auto c = min_cover(x, budget, options);
  if (!c) return std::nullopt;
  return c->total_dim;
}

Json cover_json(const std::optional<std::size_t>& dim, std::size_t budget) {
  if (dim) return *dim;
  return ">" + std::to_string(budget);
}

}  // namespace

Integer height(const ProjPoint& p) {
  Integer lcm = 1;
  for (const auto& q : p.coords()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
  Integer g = 0, best = 0;
  std::vector<Integer> ints;
  for (const auto& q : p.coords()) {
    ints.push_back(q.get_num() * (lcm / q.get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints.back().get_mpz_t());
  }
  for (auto& z : ints) {
    const Integer a = abs(z) / g;
    if (a > best) best = a;
  }
  return best;
}

Flat random_flat(Rng& rng, std::size_t n, std::size_t dim) {
  if (dim > n) throw std::invalid_argument("random_flat: dimension exceeds ambient");
  for (;;) {
    std::vector<ProjPoint> pts;
    for (std::size_t k = 0; k <= dim; ++k) pts.push_back(random_point(rng, n, 2));
    Flat f = span(std::span<const ProjPoint>(pts));
    if (f.proj_dim() == dim) return f;
  }
}

Instance gen_collinear(std::size_t s, std::size_t n, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("gen_collinear: s must be positive");
  if (n < 1) throw std::invalid_argument("gen_collinear: ambient must be at least 1");
  Rng rng(seed);
  const Flat line = random_flat(rng, n, 1);
  PointSet x(n);
  long bound = 2;
  for (std::size_t tries = 0; x.size() < s; ++tries) {
    if (tries > 40 * s) bound += 1, tries = 0;
    const auto [a, b] = random_ratio(rng, bound);
    QVector v(n + 1);
    for (std::size_t j = 0; j <= n; ++j) v[j] = a * line.basis()(0, j) + b * line.basis()(1, j);
    add_fresh(x, ProjPoint(std::move(v)));
  }
  return {x, {{"generator", "collinear"}, {"s", s}, {"n", n}, {"seed", seed}},
          PlaneConfiguration{{line}}};
}

Instance gen_grid(std::size_t d, std::size_t e) {
  if (d < 1 || e < 1) throw std::invalid_argument("gen_grid: d and e must be positive");
  std::vector<ProjPoint> pts;
  PlaneConfiguration rows;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < e; ++b) pts.emplace_back(QVector{1, Rational(a), Rational(b)});
    rows.flats.push_back(
        Flat::from_rows(QMatrix::from_rows({{1, Rational(a), 0}, {0, 0, 1}}, 3)));
  }
  return {PointSet(2, std::move(pts)), {{"generator", "grid"}, {"d", d}, {"e", e}}, rows};
}

Instance gen_on_flats(const std::vector<Flat>& flats, const std::vector<std::size_t>& counts,
                      std::uint64_t seed, std::size_t off_config,
                      const std::vector<ProjPoint>& fixed, std::size_t known) {
  if (flats.empty() || flats.size() != counts.size())
    throw std::invalid_argument("gen_on_flats: need one count per flat");
  const std::size_t n = flats.front().ambient();
  for (const auto& f : flats)
    if (f.ambient() != n) throw std::invalid_argument("gen_on_flats: flats in different ambients");
  for (auto c : counts)
    if (c < 1) throw std::invalid_argument("gen_on_flats: counts must be positive");

  Rng rng(seed);
  PointSet x(n);
  for (const auto& p : fixed) x.add(p);
  auto on_other = [&](const ProjPoint& p, std::size_t self) {
    for (std::size_t k = 0; k < flats.size(); ++k)
      if (k != self && contains(flats[k], p)) return true;
    return false;
  };
  for (std::size_t k = 0; k < flats.size(); ++k) {
    long bound = 2;
    std::size_t placed = 0, tries = 0;
    while (placed < counts[k]) {
      if (++tries > 20000) throw std::runtime_error("gen_on_flats: cannot place fresh points");
      if (tries % 200 == 0) ++bound;
      const ProjPoint p = combination(rng, flats[k], bound);
      if (on_other(p, k) || !add_fresh(x, p)) continue;
      ++placed;
    }
  }
  long bound = 2;
  for (std::size_t placed = 0, tries = 0; placed < off_config;) {
    if (++tries > 20000) throw std::runtime_error("gen_on_flats: cannot place off-configuration points");
    if (tries % 200 == 0) ++bound;
    const ProjPoint p = random_point(rng, n, bound);
    if (on_other(p, flats.size()) || !add_fresh(x, p)) continue;
    ++placed;
  }

  Json fixed_json = Json::array();
  for (const auto& p : fixed) fixed_json.push_back(to_json(p));
  Json prov = {{"generator", "on_flats"}, {"flats", flats_json(flats)}, {"counts", counts},
               {"seed", seed}, {"off_config", off_config}, {"fixed", fixed_json}};
  PlaneConfiguration config;
  const std::size_t keep = std::min(known, flats.size());
  config.flats.assign(flats.begin(), flats.begin() + static_cast<long>(keep));
  if (keep < flats.size()) prov["known"] = keep;
  return {x, prov, config};
}

Instance gen_random(std::size_t n, std::size_t size, long height, std::uint64_t seed) {
  if (size < 1 || height < 1) throw std::invalid_argument("gen_random: size and height must be positive");
  Rng rng(seed);
  PointSet x(n);
  for (std::size_t tries = 0; x.size() < size; ++tries) {
    if (tries > 1000 * size) throw std::invalid_argument("gen_random: too few points of this height");
    add_fresh(x, random_point(rng, n, height));
  }
  return {x, {{"generator", "random"}, {"n", n}, {"size", size}, {"height", height}, {"seed", seed}},
          std::nullopt};
}

Instance gen_rnc(std::size_t s, std::size_t n, std::uint64_t seed) {
  if (s < 1 || n < 1) throw std::invalid_argument("gen_rnc: s and n must be positive");
  Rng rng(seed);
  PointSet x(n);
  long bound = 2;
  for (std::size_t tries = 0; x.size() < s; ++tries) {
    if (tries > 40 * s) bound += 1, tries = 0;
    const auto [a, b] = random_ratio(rng, bound);
    QVector v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      Integer t;
      mpz_pow_ui(t.get_mpz_t(), Integer(b).get_mpz_t(), n - i);
      Integer u;
      mpz_pow_ui(u.get_mpz_t(), Integer(a).get_mpz_t(), i);
      v[i] = Rational(t * u);
    }
    add_fresh(x, ProjPoint(std::move(v)));
  }
  return {x, {{"generator", "rnc"}, {"s", s}, {"n", n}, {"seed", seed}}, std::nullopt};
}

Instance replay(const Json& prov) {
  if (!prov.is_object() || !prov.contains("generator") || !prov.at("generator").is_string())
    throw ParseError("provenance: missing generator");
  const auto g = prov.at("generator").get<std::string>();
  try {
    if (g == "collinear") return gen_collinear(size_of(prov, "s"), size_of(prov, "n"), seed_of(prov));
    if (g == "grid") return gen_grid(size_of(prov, "d"), size_of(prov, "e"));
    if (g == "random") {
      if (!prov.contains("height") || !prov.at("height").is_number_integer())
        throw ParseError("provenance: \"height\" must be an integer");
      return gen_random(size_of(prov, "n"), size_of(prov, "size"), prov.at("height").get<long>(),
                        seed_of(prov));
    }
    if (g == "rnc") return gen_rnc(size_of(prov, "s"), size_of(prov, "n"), seed_of(prov));
    if (g == "on_flats") {
      const auto config = config_from_json(prov.at("flats"));
      std::vector<std::size_t> counts;
      for (const auto& c : prov.at("counts")) counts.push_back(c.get<std::size_t>());
      std::vector<ProjPoint> fixed;
      if (prov.contains("fixed"))
        for (const auto& p : prov.at("fixed")) fixed.push_back(point_from_json(p));
      const std::size_t off = prov.contains("off_config") ? size_of(prov, "off_config") : 0;
      const std::size_t known = prov.contains("known") ? size_of(prov, "known") : SIZE_MAX;
      return gen_on_flats(config.flats, counts, seed_of(prov), off, fixed, known);
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("provenance: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("provenance: ") + e.what());
  }
  throw ParseError("provenance: unknown generator \"" + g + "\"");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
    case Status::skipped: return "skipped";
  }
  return "?";
}

Json to_json(const VerdictReport& r) {
  return {{"property", r.property}, {"provenance", r.provenance}, {"status", to_string(r.status)},
          {"diagnostics", r.diagnostics}};
}

VerdictReport verify_bcd(const Instance& inst, const CoverOptions& options) {
  auto v = start("bcd", inst);
  const auto& x = inst.point_set;
  if (x.empty()) return vacuous(std::move(v));
  const Profile p = profile(x);
  put_profile(v, p);
  if (p.max_cbp < 1 || x.size() > 2 * static_cast<std::size_t>(p.max_cbp) + 1) return vacuous(std::move(v));
  try {
    const auto dim = cover_within(x, 1, options);
    v.diagnostics["min_cover_dim"] = cover_json(dim, 1);
    v.status = dim ? Status::pass : Status::fail;
  } catch (const InexhaustiveError& e) {
    v.status = Status::inconclusive;
    v.diagnostics["greedy_dim"] = e.greedy().total_dim;
  }
  return v;
}

VerdictReport verify_conjecture(const Instance& inst, std::size_t d, const CoverOptions& options) {
  auto v = start("conjecture", inst);
  v.diagnostics["d"] = d;
  const auto& x = inst.point_set;
  if (x.empty() || d < 1) return vacuous(std::move(v));
  const Profile p = profile(x);
  put_profile(v, p);
  // The size bound is weakest at the largest r, so r = max_cbp decides.
  if (p.max_cbp < 1 || x.size() > (d + 1) * static_cast<std::size_t>(p.max_cbp) + 1)
    return vacuous(std::move(v));
  Json applies = Json::array();
  bool proven = false;
  for (int r = 1; r <= p.max_cbp; ++r) {
    if (x.size() > (d + 1) * static_cast<std::size_t>(r) + 1) continue;
    applies.push_back(r);
    proven = proven || r <= 2 || d <= 4;
  }
  v.diagnostics["r_applies"] = applies;
  v.diagnostics["proven_case"] = proven;
  try {
    const auto dim = cover_within(x, d, options);
    v.diagnostics["min_cover_dim"] = cover_json(dim, d);
    v.status = dim ? Status::pass : Status::fail;
  } catch (const InexhaustiveError& e) {
    v.status = Status::inconclusive;
    v.diagnostics["greedy_dim"] = e.greedy().total_dim;
  }
  return v;
}

VerdictReport verify_complement(const Instance& inst) {
  auto v = start("complement", inst);
  if (!inst.known_config || inst.known_config->flats.empty()) return skipped(std::move(v), "no known configuration");
  const auto& x = inst.point_set;
  if (x.empty()) return vacuous(std::move(v));
  const Profile p = profile(x);
  put_profile(v, p);
  const auto& flats = inst.known_config->flats;
  const std::size_t m = flats.size();
  if (m > 16) return skipped(std::move(v), "configuration too long");

  std::size_t checks = 0;
  Json failures = Json::array();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (static_cast<int>(k) > p.max_cbp) continue;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < x.size(); ++i) {
      bool covered = false;
      for (std::size_t j = 0; j < m && !covered; ++j)
        covered = (mask >> j & 1u) && contains(flats[j], x[i]);
      if (!covered) rest.push_back(i);
    }
    if (rest.empty()) continue;
    const PointSet y = restrict(x, rest);
    // CBP(r) for r <= max_cbp, so every r - k in [0, max_cbp - k] must hold;
    // CBP is monotone in r, so the top value suffices.
    const int need = p.max_cbp - static_cast<int>(k);
    ++checks;
    if (!has_cbp(y, need)) failures.push_back({{"pieces", mask}, {"r", p.max_cbp}, {"k", k}});
  }
  v.diagnostics["checks"] = checks;
  if (checks == 0) return vacuous(std::move(v));
  v.diagnostics["failures"] = failures;
  v.status = failures.empty() ? Status::pass : Status::fail;
  return v;
}

VerdictReport verify_split_equiv(const Instance& inst) {
  auto v = start("split_equiv", inst);
  if (!inst.known_config || inst.known_config->flats.empty()) return skipped(std::move(v), "no known configuration");
  const auto& flats = inst.known_config->flats;
  const auto& x = inst.point_set;
  if (!is_split(flats)) return skipped(std::move(v), "configuration is not split");
  for (const auto& q : x.points())
    if (!inst.known_config->covers(q)) return skipped(std::move(v), "X is not inside the configuration");
  std::vector<PointSet> pieces;
  for (const auto& f : flats) {
    pieces.push_back(restrict(x, members_on(x, f)));
    if (pieces.back().empty()) return skipped(std::move(v), "a piece misses X");
  }
  const HilbertFunction h = hf_full(x);
  v.diagnostics["rX"] = h.reg_index;
  Json rows = Json::array();
  bool ok = true;
  for (int r = 1; r + 1 <= static_cast<int>(h.reg_index); ++r) {
    const bool whole = has_cbp(x, r);
    bool each = true;
    Json per = Json::array();
    for (const auto& piece : pieces) {
      const bool b = has_cbp(piece, r);
      per.push_back(b);
      each = each && b;
    }
    rows.push_back({{"r", r}, {"X", whole}, {"pieces", per}});
    ok = ok && whole == each;
  }
  if (rows.empty()) return vacuous(std::move(v));
  v.diagnostics["table"] = rows;
  v.status = ok ? Status::pass : Status::fail;
  return v;
}

VerdictReport verify_skew_counts(const Instance& inst) {
  auto v = start("skew_counts", inst);
  if (!inst.known_config || inst.known_config->flats.empty()) return skipped(std::move(v), "no known configuration");
  const auto& flats = inst.known_config->flats;
  const auto& x = inst.point_set;
  if (flats.size() >= 2 && !are_skew(flats)) return skipped(std::move(v), "configuration is not skew");
  std::vector<std::size_t> counts;
  for (const auto& f : flats) {
    counts.push_back(members_on(x, f).size());
    if (counts.back() == 0) return skipped(std::move(v), "a piece misses X");
  }
  const Profile p = profile(x);
  put_profile(v, p);
  v.diagnostics["counts"] = counts;
  if (p.max_cbp < 1) return vacuous(std::move(v));
  const std::size_t k = flats.size();
  const std::size_t lo = *std::min_element(counts.begin(), counts.end());
  Json failures = Json::array();
  for (int r = 1; r <= p.max_cbp; ++r) {
    const auto r2 = static_cast<std::size_t>(r) + 2;
    const bool first = lo >= std::max(k, r2);
    const bool second = lo < k && k >= r2;
    if (!first && !second) failures.push_back(r);
  }
  v.diagnostics["failures"] = failures;
  v.status = failures.empty() ? Status::pass : Status::fail;
  return v;
}

VerdictReport verify_meeting(const Instance& inst) {
  auto v = start("meeting", inst);
  if (!inst.known_config || inst.known_config->flats.size() != 2)
    return skipped(std::move(v), "needs a configuration of two flats");
  const auto& flats = inst.known_config->flats;
  const auto& x = inst.point_set;
  const auto meet = intersect(flats[0], flats[1]);
  if (!meet || meet->proj_dim() != 0) return skipped(std::move(v), "flats do not meet in one point");
  for (const auto& q : x.points())
    if (!inst.known_config->covers(q)) return skipped(std::move(v), "X is not inside the configuration");
  const ProjPoint p(meet->basis().row_vector(0));
  v.diagnostics["p"] = to_json(p);

  // Each piece is tested without p and with p. When p is not in X this is the
  // plain "X cap P_i or (X cap P_i) + p" disjunction.
  std::vector<PointSet> on, without_p, with_p;
  for (const auto& f : flats) {
    on.push_back(restrict(x, members_on(x, f)));
    if (on.back().empty()) return skipped(std::move(v), "a piece misses X");
    const std::size_t at = on.back().index_of_point(p);
    without_p.push_back(at < on.back().size() ? on.back().without(at) : on.back());
    with_p.push_back(on.back());
    with_p.back().add(p);
  }
  const Profile prof = profile(x);
  put_profile(v, prof);
  v.diagnostics["p_in_X"] = x.index_of_point(p) < x.size();
  if (prof.max_cbp < 1) return vacuous(std::move(v));
  Json failures = Json::array(), collapsed = Json::array();
  for (int r = 1; r <= prof.max_cbp; ++r)
    for (std::size_t i = 0; i < 2; ++i) {
      const bool plus = has_cbp(with_p[i], r);
      if (!plus && !has_cbp(without_p[i], r)) failures.push_back({{"r", r}, {"piece", i}});
      // With p in X the unsplit reading reduces to CBP(r) of X cap P_i.
      if (!plus && !has_cbp(on[i], r)) collapsed.push_back({{"r", r}, {"piece", i}});
    }
  v.diagnostics["failures"] = failures;
  v.diagnostics["collapsed_failures"] = collapsed;
  v.status = failures.empty() ? Status::pass : Status::fail;
  return v;
}

VerdictReport verify_inductive_bound(const Instance& inst, std::size_t d, const CoverOptions& options) {
  if (d < 2 || d > 5) throw std::invalid_argument("verify_inductive_bound: d must be in 2..5");
  auto v = start("inductive_bound", inst);
  v.diagnostics["d"] = d;
  const auto& x = inst.point_set;
  if (x.empty()) return vacuous(std::move(v));
  const Profile p = profile(x);
  put_profile(v, p);
  if (p.max_cbp < 1) return vacuous(std::move(v));
  std::vector<int> applies;
  for (int r = 1; r <= p.max_cbp; ++r)
    if (x.size() <= (d + 1) * static_cast<std::size_t>(r) + 1) applies.push_back(r);
  if (applies.empty()) return vacuous(std::move(v));
  try {
    const auto dim = cover_within(x, d - 1, options);
    v.diagnostics["min_cover_dim"] = cover_json(dim, d - 1);
    if (dim) return vacuous(std::move(v));
  } catch (const InexhaustiveError& e) {
    v.status = Status::inconclusive;
    v.diagnostics["greedy_dim"] = e.greedy().total_dim;
    return v;
  }
  Json failures = Json::array();
  for (int r : applies)
    if (x.size() < d * static_cast<std::size_t>(r) + 2) failures.push_back(r);
  v.diagnostics["failures"] = failures;
  v.status = failures.empty() ? Status::pass : Status::fail;
  return v;
}

VerdictReport verify_corollary(const Instance& inst) {
  auto v = start("corollary", inst);
  const auto& x = inst.point_set;
  if (x.empty()) return vacuous(std::move(v));
  const HilbertFunction h = hf_full(x);
  v.diagnostics["HF"] = h.values;
  auto hf_at = [&](std::size_t i) { return i < h.values.size() ? h.values[i] : x.size(); };
  Json failures = Json::array();
  Json holds = Json::array();
  for (int r = 0; r <= static_cast<int>(h.reg_index); ++r) {
    if (!has_cbp(x, r)) continue;
    holds.push_back(r);
    if (x.size() < static_cast<std::size_t>(r) + 2) failures.push_back({{"r", r}, {"bound", "size"}});
    for (int i = 0; i <= r; ++i) {
      if (hf_at(static_cast<std::size_t>(i)) + hf_at(static_cast<std::size_t>(r - i)) > x.size())
        failures.push_back({{"r", r}, {"i", i}});
    }
  }
  v.diagnostics["cbp_degrees"] = holds;
  v.diagnostics["failures"] = failures;
  v.status = failures.empty() ? Status::pass : Status::fail;
  return v;
}

VerdictReport verify_characterizations(const Instance& inst) {
  auto v = start("characterizations", inst);
  const auto& x = inst.point_set;
  if (x.empty()) return vacuous(std::move(v));
  const HilbertFunction h = hf_full(x);
  Json verdicts = Json::array();
  v.status = Status::pass;
  for (int r = 0; r <= static_cast<int>(h.reg_index); ++r) {
    try {
      verdicts.push_back(cbp(x, r).verdict);
    } catch (const CbpDisagreement& e) {
      const auto& rep = e.report();
      v.status = Status::fail;
      v.diagnostics["disagreement"] = {{"r", r},
                                       {"hf", rep.by_hf.value_or(false)},
                                       {"alpha", rep.by_alpha.value_or(false)},
                                       {"divisibility", rep.by_divisibility.value_or(false)},
                                       {"dual", rep.by_dual.value_or(false)}};
      break;
    }
  }
  v.diagnostics["verdicts"] = verdicts;
  return v;
}

VerdictReport verify_dual_dimension(const Instance& inst) {
  auto v = start("dual_dimension", inst);
  const auto& x = inst.point_set;
  if (x.empty()) return vacuous(std::move(v));
  const HilbertFunction h = hf_full(x);
  Json failures = Json::array();
  Json dims = Json::array();
  for (std::size_t r = 0; r <= h.reg_index; ++r) {
    // Full evaluation matrix while it is small, else the ladder's basis rows,
    // which span the same row space.
    const std::size_t cols = monomials(x.ambient(), r).size();
    std::size_t kernel_dim;
    if (cols <= 20000) {
      kernel_dim = kernel(eval_matrix(x, r).transpose()).size();
    } else {
      DegreeLadder ladder(x);
      ladder.advance_to(r);
      kernel_dim = kernel(ladder.basis_matrix()).size();
    }
    dims.push_back(kernel_dim);
    if (kernel_dim + h.values[r] != x.size()) failures.push_back(r);
  }
  v.diagnostics["kernel_dims"] = dims;
  v.diagnostics["failures"] = failures;
  v.status = failures.empty() ? Status::pass : Status::fail;
  return v;
}

namespace {

using Maker = std::function<Instance(Rng&, std::uint64_t)>;

Instance make_collinear(Rng& rng, std::uint64_t seed) {
  return gen_collinear(static_cast<std::size_t>(rng.uniform(2, 12)),
                       static_cast<std::size_t>(rng.uniform(1, 4)), seed);
}

Instance make_grid(Rng& rng, std::uint64_t) {
  const auto d = static_cast<std::size_t>(rng.uniform(1, 4));
  return gen_grid(d, static_cast<std::size_t>(rng.uniform(static_cast<long>(d), 5)));
}

// Smallest height >= h leaving plenty of room for `size` points of P^n.
long roomy(std::size_t n, std::size_t size, long h) {
  for (;; ++h) {
    double c = 1;
    for (std::size_t i = 0; i <= n; ++i) c *= static_cast<double>(2 * h + 1);
    if ((c - 1) / 2 >= 4.0 * static_cast<double>(size)) return h;
  }
}

Instance make_random(Rng& rng, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(rng.uniform(1, 4));
  const auto size = static_cast<std::size_t>(rng.uniform(1, 15));
  long h = rng.coin() ? rng.uniform(1, 3) : rng.uniform(1, kDefaultHeight);
  return gen_random(n, size, roomy(n, size, h), seed);
}

Instance make_rnc(Rng& rng, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(rng.uniform(2, 4));
  const auto r = static_cast<std::size_t>(rng.uniform(1, 3));
  const std::size_t s = n * r + 2 - static_cast<std::size_t>(rng.uniform(0, 1));
  return gen_rnc(std::min<std::size_t>(s, 15), n, seed);
}

std::vector<Flat> split_flats(Rng& rng, std::size_t n, const std::vector<std::size_t>& dims) {
  for (;;) {
    std::vector<Flat> flats;
    for (auto d : dims) flats.push_back(random_flat(rng, n, d));
    if (flats.size() < 2 || is_split(flats)) return flats;
  }
}

// Lines with about r+2 points each and sometimes a plane with a few more.
Instance make_split(Rng& rng, std::uint64_t seed) {
  const auto r = static_cast<std::size_t>(rng.uniform(1, 3));
  const auto k = static_cast<std::size_t>(rng.uniform(2, 3));
  std::vector<std::size_t> dims(k, 1);
  if (rng.uniform(0, 2) == 0) dims[0] = 2;
  std::size_t need = k - 1;
  for (auto d : dims) need += d;
  const std::size_t n = need + static_cast<std::size_t>(rng.uniform(0, 1));
  const auto flats = split_flats(rng, n, dims);
  std::vector<std::size_t> counts;
  for (auto d : dims) {
    const long base = d == 1 ? static_cast<long>(r) + 2 : 2 * static_cast<long>(r) + 2;
    counts.push_back(static_cast<std::size_t>(std::max(1L, base + rng.uniform(-1, 1))));
  }
  return gen_on_flats(flats, counts, seed);
}

Instance make_skew(Rng& rng, std::uint64_t seed) {
  const auto r = static_cast<std::size_t>(rng.uniform(1, 3));
  std::vector<std::size_t> dims;
  std::size_t n;
  switch (rng.uniform(0, 2)) {
    case 0:  // lines in P^3, three of them are skew but not split
      n = 3;
      dims.assign(static_cast<std::size_t>(rng.uniform(2, 3)), 1);
      break;
    case 1:
      n = static_cast<std::size_t>(rng.uniform(3, 5));
      dims.assign(static_cast<std::size_t>(rng.uniform(2, 4)), 1);
      break;
    default:  // line and plane in P^4
      n = 4;
      dims = {2, 1};
  }
  std::vector<Flat> flats;
  for (;;) {
    flats.clear();
    for (auto d : dims) flats.push_back(random_flat(rng, n, d));
    if (are_skew(flats)) break;
  }
  std::vector<std::size_t> counts;
  for (auto d : dims) {
    const long base = d == 1 ? static_cast<long>(r) + 2 : 2 * static_cast<long>(r) + 2;
    counts.push_back(static_cast<std::size_t>(rng.uniform(0, 4) == 0 ? rng.uniform(1, 3)
                                                                      : base + rng.uniform(-1, 1)));
  }
  return gen_on_flats(flats, counts, seed);
}

Instance make_meeting(Rng& rng, std::uint64_t seed) {
  std::size_t n, d1, d2;
  switch (rng.uniform(0, 3)) {
    case 0: n = 2, d1 = 1, d2 = 1; break;
    case 1: n = static_cast<std::size_t>(rng.uniform(3, 4)), d1 = 1, d2 = 1; break;
    case 2: n = 3, d1 = 2, d2 = 1; break;
    default: n = 4, d1 = 2, d2 = 2;
  }
  for (;;) {
    const ProjPoint p = random_point(rng, n, 2);
    auto through = [&](std::size_t dim) {
      std::vector<ProjPoint> pts{p};
      for (std::size_t k = 0; k < dim; ++k) pts.push_back(random_point(rng, n, 2));
      return span(std::span<const ProjPoint>(pts));
    };
    const Flat a = through(d1), b = through(d2);
    if (a.proj_dim() != d1 || b.proj_dim() != d2) continue;
    const auto meet = intersect(a, b);
    if (!meet || meet->proj_dim() != 0) continue;
    auto count = [&](std::size_t dim) {
      return static_cast<std::size_t>(dim == 1 ? rng.uniform(1, 6) : rng.uniform(2, 7));
    };
    const std::size_t ca = count(d1), cb = count(d2);
    std::vector<ProjPoint> fixed;
    if (rng.coin()) fixed.push_back(p);
    return gen_on_flats({a, b}, {ca, cb}, seed, 0, fixed);
  }
}

// Split flats; the known configuration is a proper prefix, so the points on
// the remaining flats lie off it.
Instance make_complement(Rng& rng, std::uint64_t seed) {
  const auto r = static_cast<std::size_t>(rng.uniform(1, 3));
  const auto m = static_cast<std::size_t>(rng.uniform(2, 3));
  std::vector<std::size_t> dims(m, 1);
  const std::size_t n = 2 * m - 1 + static_cast<std::size_t>(rng.uniform(0, 1));
  const auto flats = split_flats(rng, n, dims);
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < m; ++i) counts.push_back(r + 2 + static_cast<std::size_t>(rng.uniform(0, 1)));
  const auto known = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(m) - 1));
  const std::size_t off = rng.uniform(0, 3) == 0 ? static_cast<std::size_t>(rng.uniform(1, 2)) : 0;
  return gen_on_flats(flats, counts, seed, off, {}, known);
}

// CBP-rich sets of at most 21 points for the conjecture with d = 4.
Instance make_structured(Rng& rng, std::uint64_t seed) {
  switch (rng.uniform(0, 5)) {
    case 0:
      return gen_collinear(static_cast<std::size_t>(rng.uniform(3, 12)),
                           static_cast<std::size_t>(rng.uniform(2, 5)), seed);
    case 1: {
      const auto d = static_cast<std::size_t>(rng.uniform(2, 4));
      return gen_grid(d, static_cast<std::size_t>(rng.uniform(static_cast<long>(d), 21 / static_cast<long>(d))));
    }
    case 2: {
      const auto n = static_cast<std::size_t>(rng.uniform(2, 5));
      const auto r = static_cast<std::size_t>(rng.uniform(1, 4));
      return gen_rnc(std::min<std::size_t>(21, n * r + 2 + static_cast<std::size_t>(rng.uniform(0, 1))), n, seed);
    }
    case 3: {
      const auto r = static_cast<std::size_t>(rng.uniform(1, 4));
      const auto k = static_cast<std::size_t>(rng.uniform(2, 4));
      if (k * (r + 2) > 21) return gen_collinear(r + 2, 3, seed);
      const auto flats = split_flats(rng, 2 * k - 1, std::vector<std::size_t>(k, 1));
      return gen_on_flats(flats, std::vector<std::size_t>(k, r + 2), seed);
    }
    case 4:
      return make_meeting(rng, seed);
    default:
      return make_skew(rng, seed);
  }
}

const std::map<std::string, Maker>& makers() {
  static const std::map<std::string, Maker> m = {
      {"collinear", make_collinear}, {"grid", make_grid},       {"random", make_random},
      {"rnc", make_rnc},             {"split", make_split},     {"skew", make_skew},
      {"meeting", make_meeting},     {"complement", make_complement},
      {"structured", make_structured}};
  return m;
}

bool small_enough(const Instance& inst) {
  const auto& x = inst.point_set;
  if (x.empty() || x.size() > 15 || x.ambient() > 4) return false;
  return std::all_of(x.points().begin(), x.points().end(),
                     [](const ProjPoint& p) { return height(p) <= kDefaultHeight; });
}

// n <= 4, |X| <= 15, heights <= 20, drawn from every other kind.
Instance make_mixed(Rng& rng, std::uint64_t seed) {
  static const std::vector<std::string> kinds = {"collinear", "grid", "random", "random",
                                                 "rnc",       "split", "skew", "meeting"};
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const auto& kind = kinds[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(kinds.size()) - 1))];
    Instance inst = makers().at(kind)(rng, Rng(seed).fork(static_cast<std::uint64_t>(attempt)).next());
    if (small_enough(inst)) return inst;
  }
  throw std::runtime_error("corpus: no small instance found");
}

}  // namespace

std::vector<Instance> corpus(const std::string& kind, std::size_t count, std::uint64_t seed) {
  Maker make;
  if (kind == "mixed") {
    make = make_mixed;
  } else {
    auto it = makers().find(kind);
    if (it == makers().end()) throw std::invalid_argument("corpus: unknown kind \"" + kind + "\"");
    make = it->second;
  }
  std::vector<Instance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = instance_seed(seed, kind, i);
    Rng rng(s);
    out.push_back(make(rng, Rng(s).fork(1).next()));
  }
  return out;
}

namespace {

// Candidate for the search: sizes stay at most (d+1)r+1.
Instance search_candidate(std::size_t d, std::size_t r, Rng& rng, std::uint64_t seed) {
  const std::size_t cap = (d + 1) * r + 1;
  switch (rng.uniform(0, 4)) {
    case 0: {  // rational normal curve at the CBP threshold
      const auto n = static_cast<std::size_t>(rng.uniform(2, static_cast<long>(d) + 1));
      const std::size_t s = std::min(cap, n * r + 2 + static_cast<std::size_t>(rng.uniform(0, 1)));
      return gen_rnc(s, n, seed);
    }
    case 1: {  // lines and conics in split position, r+2 and 2r+2 points
      std::vector<std::size_t> dims, counts;
      std::size_t used = 0;
      while (true) {
        const std::size_t dim = rng.uniform(0, 2) == 0 ? 2 : 1;
        const std::size_t c = dim == 1 ? r + 2 : 2 * r + 2;
        if (used + c > cap) break;
        dims.push_back(dim);
        counts.push_back(c);
        used += c;
        if (rng.uniform(0, 3) == 0) break;
      }
      if (dims.empty()) return gen_collinear(std::min(cap, r + 2), 3, seed);
      std::size_t n = dims.size() - 1;
      for (auto x : dims) n += x;
      n = std::max<std::size_t>(n, 2);
      const auto flats = split_flats(rng, n, dims);
      return gen_on_flats(flats, counts, seed);
    }
    case 2: {  // lines through a common point
      const auto k = static_cast<std::size_t>(rng.uniform(2, 4));
      const auto n = static_cast<std::size_t>(rng.uniform(2, 4));
      const ProjPoint p = random_point(rng, n, 2);
      std::vector<Flat> flats;
      while (flats.size() < k) {
        const std::vector<ProjPoint> pair{p, random_point(rng, n, 2)};
        Flat f = span(std::span<const ProjPoint>(pair));
        if (f.proj_dim() == 1 && std::find(flats.begin(), flats.end(), f) == flats.end())
          flats.push_back(std::move(f));
      }
      std::vector<std::size_t> counts;
      std::size_t used = 0;
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t c = std::min<std::size_t>(r + 1 + static_cast<std::size_t>(rng.uniform(0, 1)),
                                                    cap > used + 1 ? cap - used - 1 : 1);
        counts.push_back(std::max<std::size_t>(1, c));
        used += counts.back();
      }
      std::vector<ProjPoint> fixed;
      if (rng.coin()) fixed.push_back(p);
      return gen_on_flats(flats, counts, seed, 0, fixed);
    }
    case 3: {  // random points of small height
      const auto n = static_cast<std::size_t>(rng.uniform(2, std::max<long>(2, static_cast<long>(d))));
      const std::size_t size = static_cast<std::size_t>(rng.uniform(static_cast<long>(r) + 2, static_cast<long>(cap)));
      return gen_random(n, size, roomy(n, size, rng.uniform(1, 2)), seed);
    }
    default: {  // grids, which have CBP(d'+e'-3)
      const auto a = static_cast<std::size_t>(rng.uniform(2, 4));
      const auto b = static_cast<std::size_t>(rng.uniform(static_cast<long>(a), 5));
      return gen_grid(a, b);
    }
  }
}

}  // namespace

SearchResult counterexample_search(std::size_t d, std::size_t r, std::size_t trials, std::uint64_t seed,
                                   const CoverOptions& options) {
  if (d < 1 || r < 1) throw std::invalid_argument("counterexample_search: d and r must be positive");
  SearchResult out;
  out.trials = trials;
  const std::size_t cap = (d + 1) * r + 1;
  Rng root(seed ^ (d * 0x100000001b3ULL) ^ (r << 32));
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = root.fork(t);
    std::optional<Instance> made;
    try {
      made = search_candidate(d, r, rng, rng.next());
    } catch (const std::runtime_error&) {
      continue;  // generator could not place points
    }
    Instance& inst = *made;
    const auto& x = inst.point_set;
    if (x.size() > cap || x.size() < r + 2) continue;
    if (!cbp(x, static_cast<int>(r), true).verdict) continue;
    ++out.candidates;
    try {
      if (min_cover(x, d, options)) continue;
    } catch (const InexhaustiveError&) {
      out.inconclusive.push_back(std::move(inst));
      continue;
    }
    // A hit is a claimed counterexample; it must survive all four methods.
    if (cbp(x, static_cast<int>(r)).verdict) out.hits.push_back(std::move(inst));
  }
  return out;
}

Json to_json(const SearchResult& s, std::size_t d, std::size_t r, std::uint64_t seed) {
  Json hits = Json::array(), open = Json::array();
  for (const auto& h : s.hits) hits.push_back({{"provenance", h.provenance}, {"points", to_json(h.point_set)}});
  for (const auto& h : s.inconclusive) open.push_back({{"provenance", h.provenance}});
  return {{"search", {{"d", d}, {"r", r}, {"seed", seed}}},
          {"trials", s.trials},
          {"candidates", s.candidates},
          {"hits", hits},
          {"inconclusive", open}};
}

namespace {

std::size_t get_size(const Json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 0)
    throw ParseError(std::string("suite: \"") + key + "\" must be a nonnegative integer");
  return j.at(key).get<std::size_t>();
}

std::function<VerdictReport(const Instance&)> verifier(const std::string& property, std::size_t d,
                                                       const CoverOptions& options) {
  if (property == "bcd") return [options](const Instance& i) { return verify_bcd(i, options); };
  if (property == "conjecture")
    return [d, options](const Instance& i) { return verify_conjecture(i, d, options); };
  if (property == "complement") return verify_complement;
  if (property == "split_equiv") return verify_split_equiv;
  if (property == "skew_counts") return verify_skew_counts;
  if (property == "meeting") return verify_meeting;
  if (property == "inductive_bound") {
    if (d < 2 || d > 5) throw ParseError("suite: inductive_bound needs 2 <= d <= 5");
    return [d, options](const Instance& i) { return verify_inductive_bound(i, d, options); };
  }
  if (property == "corollary") return verify_corollary;
  if (property == "characterizations") return verify_characterizations;
  if (property == "dual_dimension") return verify_dual_dimension;
  throw ParseError("suite: unknown property \"" + property + "\"");
}

// Work pool over independent jobs; results land at their own index.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SuiteReport run_suite(const Json& config) {
  if (!config.is_object()) throw ParseError("suite: configuration must be an object");
  const std::uint64_t seed = get_size(config, "seed", 0);
  const std::size_t threads = get_size(config, "threads", 1);
  CoverOptions options;
  options.exhaustive_limit = get_size(config, "limit", options.exhaustive_limit);

  struct Job {
    std::function<VerdictReport(const Instance&)> check;
    Instance inst;
    std::string property;
  };
  std::vector<Job> jobs;
  const Json runs = config.value("runs", Json::array());
  if (!runs.is_array()) throw ParseError("suite: \"runs\" must be an array");
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Json& run = runs[k];
    if (!run.is_object() || !run.contains("property") || !run.at("property").is_string() ||
        !run.contains("corpus") || !run.at("corpus").is_string())
      throw ParseError("suite: each run needs \"property\" and \"corpus\" strings");
    const auto property = run.at("property").get<std::string>();
    const auto check = verifier(property, get_size(run, "d", 4), options);
    const std::uint64_t run_seed = Rng(seed).fork(k).next();
    std::vector<Instance> instances;
    try {
      instances = corpus(run.at("corpus").get<std::string>(), get_size(run, "count", 10), run_seed);
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("suite: ") + e.what());
    }
    for (auto& inst : instances) jobs.push_back({check, std::move(inst), property});
  }

  SuiteReport report;
  report.verdicts.resize(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    try {
      report.verdicts[i] = jobs[i].check(jobs[i].inst);
    } catch (const std::exception& e) {
      VerdictReport v;
      v.property = jobs[i].property;
      v.provenance = jobs[i].inst.provenance;
      v.status = Status::fail;
      v.diagnostics = {{"error", e.what()}};
      report.verdicts[i] = std::move(v);
    }
  });
  for (const auto& v : report.verdicts) {
    switch (v.status) {
      case Status::pass: ++report.passed; break;
      case Status::fail: ++report.failed; break;
      case Status::inconclusive: ++report.inconclusive; break;
      case Status::skipped: ++report.skipped; break;
    }
  }

  const Json searches = config.value("searches", Json::array());
  if (!searches.is_array()) throw ParseError("suite: \"searches\" must be an array");
  report.searches.resize(searches.size());
  parallel_for(searches.size(), threads, [&](std::size_t k) {
    const Json& s = searches[k];
    const std::size_t d = get_size(s, "d", 4), r = get_size(s, "r", 1);
    const std::size_t trials = get_size(s, "trials", 100);
    const std::uint64_t sseed = get_size(s, "seed", seed);
    const auto res = counterexample_search(d, r, trials, sseed, options);
    report.searches[k] = to_json(res, d, r, sseed);
  });
  for (const auto& s : report.searches) {
    if (!s.at("hits").empty()) ++report.failed;
    if (!s.at("inconclusive").empty()) ++report.inconclusive;
  }
  return report;
}

std::string report_lines(const SuiteReport& r) {
  std::ostringstream out;
  for (const auto& v : r.verdicts) out << to_json(v).dump() << '\n';
  for (const auto& s : r.searches) out << s.dump() << '\n';
  out << Json{{"summary",
               {{"passed", r.passed}, {"failed", r.failed}, {"inconclusive", r.inconclusive},
                {"skipped", r.skipped}, {"ok", r.ok()}}}}
             .dump()
      << '\n';
  return out.str();
}

std::string summary_table(const SuiteReport& r) {
  std::map<std::string, std::array<std::size_t, 4>> rows;
  for (const auto& v : r.verdicts) ++rows[v.property][static_cast<std::size_t>(v.status)];
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %8s %8s %13s %8s\n", "property", "pass", "fail", "inconclusive",
                "skipped");
  out << line;
  for (const auto& [name, c] : rows) {
    std::snprintf(line, sizeof line, "%-20s %8zu %8zu %13zu %8zu\n", name.c_str(), c[0], c[1], c[2], c[3]);
    out << line;
  }
  for (const auto& s : r.searches) {
    std::snprintf(line, sizeof line, "search d=%zu r=%zu: %zu trials, %zu candidates, %zu hits, %zu inconclusive\n",
                  s["search"]["d"].get<std::size_t>(), s["search"]["r"].get<std::size_t>(),
                  s["trials"].get<std::size_t>(), s["candidates"].get<std::size_t>(), s["hits"].size(),
                  s["inconclusive"].size());
    out << line;
  }
  out << (r.ok() ? "OK" : "FAILED") << '\n';
  return out.str();
}

}  // namespace cblab
