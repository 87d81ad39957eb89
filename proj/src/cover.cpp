#include "cblab/cover.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <string>
#include <unordered_map>

namespace cblab {

std::size_t PlaneConfiguration::dimension() const {
  std::size_t d = 0;
  for (const auto& f : flats) d += f.proj_dim();
  return d;
}

bool PlaneConfiguration::covers(const ProjPoint& p) const {
  return std::any_of(flats.begin(), flats.end(), [&](const Flat& f) { return contains(f, p); });
}

ConfigClass classify(const PlaneConfiguration& p) {
  if (p.flats.size() < 2) return {true, true};
  return {are_skew(p.flats), is_split(p.flats)};
}

std::vector<std::size_t> ClosedSet::indices() const {
  std::vector<std::size_t> out;
  for (std::uint64_t m = members; m != 0; m &= m - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  }
  return out;
}

std::size_t default_exhaustive_limit() {
  if (const char* env = std::getenv("CB_LAB_LIMIT")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 24;
}

namespace {

constexpr std::size_t kMaskBits = 64;

std::uint64_t closure_mask(const PointSet& x, const Flat& f) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (contains(f, x[i])) mask |= std::uint64_t{1} << i;
  return mask;
}

Flat extend(const Flat& f, const ProjPoint& p) {
  QMatrix rows = f.basis().vstack(QMatrix::from_rows({p.coords()}, p.coords().size()));
  return Flat::from_rows(rows);
}

// A line through p and the first coordinate point different from p.
Flat line_through(const ProjPoint& p) {
  const std::size_t width = p.coords().size();
  for (std::size_t j = 0; j < width; ++j) {
    QVector e(width);
    e[j] = 1;
    ProjPoint aux(e);
    if (aux != p) {
      const std::vector<ProjPoint> pair{p, aux};
      return span(std::span<const ProjPoint>(pair));
    }
  }
  throw std::invalid_argument("line_through: ambient space is a point");
}

std::size_t cost_of(std::size_t proj_dim) { return std::max<std::size_t>(1, proj_dim); }

struct FlatEntry {
  ClosedSet set;
  Flat flat;
};

std::vector<FlatEntry> enumerate_flats(const PointSet& x, std::size_t max_dim) {
  std::vector<FlatEntry> out;
  std::map<std::uint64_t, Flat> level;
  for (std::size_t i = 0; i < x.size(); ++i) level.emplace(std::uint64_t{1} << i, Flat::of_point(x[i]));
  const std::uint64_t all = x.size() == kMaskBits ? ~std::uint64_t{0}
                                                  : (std::uint64_t{1} << x.size()) - 1;
  for (std::size_t dim = 0;; ++dim) {
    for (const auto& [mask, flat] : level) out.push_back({{mask, dim}, flat});
    if (dim == max_dim || dim == x.ambient()) break;
    std::map<std::uint64_t, Flat> next;
    for (const auto& [mask, flat] : level) {
      std::uint64_t done = mask;
      while (done != all) {
        const auto q = static_cast<std::size_t>(std::countr_zero(~done & all));
        Flat bigger = extend(flat, x[q]);
        const std::uint64_t grown = closure_mask(x, bigger);
        done |= grown;
        next.emplace(grown, std::move(bigger));
      }
    }
    if (next.empty()) break;
    level = std::move(next);
  }
  return out;
}

// Closed sets of the matroid of X reduced modulo the prime 2^61 - 1. Ranks can
// only drop under reduction, so a cover found here is at most as expensive as
// the true optimum; min_cover confirms the chosen blocks exactly.
class ModularPoints {
 public:
  static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

  explicit ModularPoints(const PointSet& x) : width_(x.ambient() + 1) {
    for (const auto& p : x.points()) {
      std::vector<std::uint64_t> v;
      for (const auto& z : primitive_integer(p.coords())) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), Integer(std::to_string(kPrime)).get_mpz_t());
        v.push_back(std::stoull(r.get_str()));
      }
      points_.push_back(std::move(v));
    }
  }

  std::size_t size() const { return points_.size(); }

  // Echelon rows of a subspace; each row has a unit pivot at pivots[i].
  struct Basis {
    std::vector<std::vector<std::uint64_t>> rows;
    std::vector<std::size_t> pivots;
  };

  // Reduces point i against b; returns the residue.
  std::vector<std::uint64_t> reduce(const Basis& b, std::size_t i) const {
    std::vector<std::uint64_t> v = points_[i];
    for (std::size_t k = 0; k < b.rows.size(); ++k) {
      const std::uint64_t c = v[b.pivots[k]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) v[j] = sub(v[j], mul(c, b.rows[k][j]));
    }
    return v;
  }

  bool in_span(const Basis& b, std::size_t i) const {
    const auto v = reduce(b, i);
    return std::all_of(v.begin(), v.end(), [](std::uint64_t c) { return c == 0; });
  }

  // b plus point i, which must lie outside span(b).
  Basis extend(const Basis& b, std::size_t i) const {
    Basis out = b;
    auto v = reduce(b, i);
    std::size_t piv = 0;
    while (v[piv] == 0) ++piv;
    const std::uint64_t inv = power(v[piv], kPrime - 2);
    for (auto& c : v) c = mul(c, inv);
    for (auto& row : out.rows) {
      const std::uint64_t c = row[piv];
      if (c == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) row[j] = sub(row[j], mul(c, v[j]));
    }
    out.rows.push_back(std::move(v));
    out.pivots.push_back(piv);
    return out;
  }

 private:
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(t & kPrime) + static_cast<std::uint64_t>(t >> 61);
    if (r >= kPrime) r -= kPrime;
    return r;
  }
  static std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
  static std::uint64_t power(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mul(a, a))
      if (e & 1) r = mul(r, a);
    return r;
  }

  std::size_t width_;
  std::vector<std::vector<std::uint64_t>> points_;
};

std::vector<ClosedSet> enumerate_closed_mod(const PointSet& x, std::size_t max_dim) {
  const ModularPoints mp(x);
  std::vector<ClosedSet> out;
  const std::uint64_t all = x.size() == kMaskBits ? ~std::uint64_t{0}
                                                  : (std::uint64_t{1} << x.size()) - 1;
  auto closure = [&](const ModularPoints::Basis& b) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < mp.size(); ++i)
      if (mp.in_span(b, i)) mask |= std::uint64_t{1} << i;
    return mask;
  };
  std::map<std::uint64_t, ModularPoints::Basis> level;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto b = mp.extend({}, i);
    level.emplace(closure(b), std::move(b));
  }
  for (std::size_t dim = 0;; ++dim) {
    for (const auto& [mask, basis] : level) out.push_back({mask, dim});
    if (dim == max_dim || dim == x.ambient()) break;
    std::map<std::uint64_t, ModularPoints::Basis> next;
    for (const auto& [mask, basis] : level) {
      std::uint64_t done = mask;
      while (done != all) {
        const auto q = static_cast<std::size_t>(std::countr_zero(~done & all));
        auto bigger = mp.extend(basis, q);
        const std::uint64_t grown = closure(bigger);
        done |= grown;
        next.emplace(grown, std::move(bigger));
      }
    }
    if (next.empty()) break;
    level = std::move(next);
  }
  return out;
}

class CoverSearch {
 public:
  CoverSearch(const std::vector<ClosedSet>& flats, std::size_t points, std::size_t budget)
      : flats_(flats), budget_(budget), by_point_(points) {
    std::vector<std::size_t> biggest(budget + 1, 0);
    for (std::size_t k = 0; k < flats.size(); ++k) {
      const std::size_t c = cost_of(flats[k].proj_dim);
      if (c > budget) continue;
      const auto size = static_cast<std::size_t>(std::popcount(flats[k].members));
      // m <= 2k points on a k-flat are covered as cheaply by ceil(m/2) lines.
      if (flats[k].proj_dim >= 2 && size <= 2 * flats[k].proj_dim) continue;
      biggest[c] = std::max(biggest[c], size);
      for (auto i : flats[k].indices()) by_point_[i].push_back(k);
    }
    for (auto& list : by_point_) {
      std::stable_sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
        const auto ca = cost_of(flats[a].proj_dim), cb = cost_of(flats[b].proj_dim);
        if (ca != cb) return ca < cb;
        return std::popcount(flats[a].members) > std::popcount(flats[b].members);
      });
    }
    // reach_[k]: most points any choice of flats with total cost k can hold.
    reach_.assign(budget + 1, 0);
    for (std::size_t k = 1; k <= budget; ++k)
      for (std::size_t c = 1; c <= k; ++c)
        reach_[k] = std::max(reach_[k], biggest[c] + reach_[k - c]);
  }

  bool run(std::uint64_t uncovered) { return dfs(uncovered, 0); }
  const std::vector<std::size_t>& chosen() const { return chosen_; }

 private:
  bool dfs(std::uint64_t uncovered, std::size_t spent) {
    if (uncovered == 0) return true;
    const std::size_t left = budget_ - spent;
    if (reach_[left] < static_cast<std::size_t>(std::popcount(uncovered))) return false;
    auto seen = failed_.find(uncovered);
    if (seen != failed_.end() && seen->second <= spent) return false;

    const auto p = static_cast<std::size_t>(std::countr_zero(uncovered));
    for (std::size_t k : by_point_[p]) {
      const std::size_t c = cost_of(flats_[k].proj_dim);
      if (c > left) break;
      chosen_.push_back(k);
      if (dfs(uncovered & ~flats_[k].members, spent + c)) return true;
      chosen_.pop_back();
    }
    // Recursion may have rehashed the table, so look the key up again.
    auto [slot, fresh] = failed_.emplace(uncovered, spent);
    if (!fresh) slot->second = std::min(slot->second, spent);
    return false;
  }

  const std::vector<ClosedSet>& flats_;
  std::size_t budget_;
  std::vector<std::vector<std::size_t>> by_point_;
  std::vector<std::size_t> reach_;
  std::unordered_map<std::uint64_t, std::size_t> failed_;
  std::vector<std::size_t> chosen_;
};

// Assembles a configuration from (flat, responsible indices) pairs, merging
// equal flats.
CoverResult assemble(const PointSet& x, std::vector<std::pair<Flat, std::vector<std::size_t>>> parts,
                     bool optimal) {
  CoverResult result;
  for (auto& [flat, idx] : parts) {
    auto same = std::find(result.config.flats.begin(), result.config.flats.end(), flat);
    std::vector<std::size_t>* block;
    if (same == result.config.flats.end()) {
      result.config.flats.push_back(flat);
      result.blocks.emplace_back();
      block = &result.blocks.back();
    } else {
      block = &result.blocks[static_cast<std::size_t>(same - result.config.flats.begin())];
    }
    for (auto i : idx) block->push_back(x.labels()[i]);
  }
  for (auto& b : result.blocks) std::sort(b.begin(), b.end());
  result.total_dim = result.config.dimension();
  result.optimal = optimal;
  return result;
}

CoverResult whole_span_cover(const PointSet& x) {
  std::vector<std::size_t> all(x.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Flat f = span(std::span<const ProjPoint>(x.points()));
  if (f.proj_dim() == 0) f = line_through(x[0]);
  return assemble(x, {{f, all}}, true);
}

// Chosen sets of the cheapest cover of total cost at most `deepest`.
std::optional<std::vector<std::size_t>> cheapest(const std::vector<ClosedSet>& sets, std::size_t points,
                                                 std::size_t deepest) {
  const std::uint64_t all = points == kMaskBits ? ~std::uint64_t{0} : (std::uint64_t{1} << points) - 1;
  for (std::size_t b = 1; b <= deepest; ++b) {
    CoverSearch search(sets, points, b);
    if (search.run(all)) return search.chosen();
  }
  return std::nullopt;
}

// Exact flats for the chosen sets, or nullopt when some exact span is larger
// than the dimension the search assumed.
std::optional<CoverResult> realize(const PointSet& x, const std::vector<ClosedSet>& sets,
                                   const std::vector<std::size_t>& chosen) {
  std::vector<std::pair<Flat, std::vector<std::size_t>>> parts;
  std::uint64_t covered = 0;
  for (std::size_t k : chosen) {
    const ClosedSet& set = sets[k];
    const auto fresh = ClosedSet{set.members & ~covered, set.proj_dim}.indices();
    covered |= set.members;
    if (set.proj_dim == 0) {
      parts.emplace_back(line_through(x[fresh.front()]), fresh);
      continue;
    }
    std::vector<ProjPoint> pts;
    for (auto i : set.indices()) pts.push_back(x[i]);
    Flat f = span(std::span<const ProjPoint>(pts));
    if (f.proj_dim() != set.proj_dim) return std::nullopt;
    parts.emplace_back(std::move(f), fresh);
  }
  return assemble(x, std::move(parts), true);
}

}  // namespace

std::vector<ClosedSet> matroid_flats(const PointSet& x, std::size_t max_dim) {
  if (x.size() > kMaskBits) throw std::invalid_argument("matroid_flats: more than 64 points");
  std::vector<ClosedSet> out;
  for (auto& e : enumerate_flats(x, max_dim)) out.push_back(e.set);
  return out;
}

std::optional<CoverResult> min_cover(const PointSet& x, std::size_t budget,
                                     const CoverOptions& options) {
  if (x.empty()) {
    CoverResult empty;
    empty.optimal = true;
    return empty;
  }
  const std::size_t limit = std::min(options.exhaustive_limit, kMaskBits);
  if (x.size() > limit) {
    throw InexhaustiveError("min_cover: " + std::to_string(x.size()) +
                                " points exceed the exhaustive limit " + std::to_string(limit),
                            greedy_cover(x));
  }
  const std::size_t whole = cost_of(span(std::span<const ProjPoint>(x.points())).proj_dim());
  const std::size_t deepest = std::min(budget, whole - 1);
  if (deepest >= 1) {
    const auto reduced = enumerate_closed_mod(x, deepest);
    const auto chosen = cheapest(reduced, x.size(), deepest);
    if (!chosen) {
      // The reduced optimum bounds the true one from below.
      if (budget >= whole) return whole_span_cover(x);
      return std::nullopt;
    }
    if (auto found = realize(x, reduced, *chosen)) return found;
    // Reduction collapsed a rank somewhere; redo the search exactly.
    std::vector<ClosedSet> exact;
    for (auto& e : enumerate_flats(x, deepest)) exact.push_back(e.set);
    if (const auto again = cheapest(exact, x.size(), deepest)) return realize(x, exact, *again);
  }
  if (budget >= whole) return whole_span_cover(x);
  return std::nullopt;
}

std::size_t min_cover_dim(const PointSet& x, const CoverOptions& options) {
  if (x.empty()) return 0;
  const std::size_t whole = cost_of(span(std::span<const ProjPoint>(x.points())).proj_dim());
  return min_cover(x, whole, options)->total_dim;
}

bool lies_on_config_dim(const PointSet& x, std::size_t d, const CoverOptions& options) {
  return min_cover(x, d, options).has_value();
}

CoverResult greedy_cover(const PointSet& x) {
  if (x.empty()) return {};
  struct Candidate {
    Flat flat;
    std::vector<bool> members;
  };
  std::vector<Candidate> candidates;
  auto members_of = [&](const Flat& f) {
    std::vector<bool> m(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) m[i] = contains(f, x[i]);
    return m;
  };
  const Flat whole = span(std::span<const ProjPoint>(x.points()));
  candidates.push_back({whole.proj_dim() == 0 ? line_through(x[0]) : whole, {}});
  candidates.back().members = members_of(candidates.back().flat);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const std::vector<ProjPoint> pair{x[i], x[j]};
      Flat line = span(std::span<const ProjPoint>(pair));
      if (std::any_of(candidates.begin(), candidates.end(),
                      [&](const Candidate& c) { return c.flat == line; }))
        continue;
      auto m = members_of(line);
      candidates.push_back({std::move(line), std::move(m)});
    }
  }

  std::vector<bool> covered(x.size(), false);
  std::size_t remaining = x.size();
  std::vector<std::pair<Flat, std::vector<std::size_t>>> parts;
  while (remaining > 0) {
    std::size_t best = candidates.size();
    std::size_t best_gain = 0, best_cost = 1;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      std::size_t gain = 0;
      for (std::size_t i = 0; i < x.size(); ++i) gain += (candidates[k].members[i] && !covered[i]);
      const std::size_t c = cost_of(candidates[k].flat.proj_dim());
      if (gain > 0 && (best == candidates.size() || gain * best_cost > best_gain * c)) {
        best = k;
        best_gain = gain;
        best_cost = c;
      }
    }
    std::vector<std::size_t> fresh;
    if (best == candidates.size()) {
      // Only isolated points remain; cover one with an arbitrary line.
      for (std::size_t i = 0; i < x.size(); ++i)
        if (!covered[i]) {
          fresh.push_back(i);
          break;
        }
      parts.emplace_back(line_through(x[fresh.front()]), fresh);
    } else {
      for (std::size_t i = 0; i < x.size(); ++i)
        if (candidates[best].members[i] && !covered[i]) fresh.push_back(i);
      parts.emplace_back(candidates[best].flat, fresh);
    }
    for (auto i : fresh) covered[i] = true;
    remaining -= fresh.size();
  }
  return assemble(x, std::move(parts), false);
}

}  // namespace cblab
