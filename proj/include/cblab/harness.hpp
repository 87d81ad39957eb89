#pragma once

// Seeded instance generators, property verifiers and the counterexample
// search for the plane-configuration conjecture.
//
// Every instance carries a JSON provenance from which `replay` rebuilds the
// identical point set. Verifiers never report a pass when a cover search was
// inexhaustive; they report "inconclusive" instead.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cblab/cbp.hpp"
#include "cblab/cover.hpp"
#include "cblab/io.hpp"
#include "cblab/projective.hpp"
#include "cblab/rng.hpp"

namespace cblab {

/// Default coordinate height of generated points.
inline constexpr long kDefaultHeight = 20;

struct Instance {
  PointSet point_set;
  Json provenance;
  std::optional<PlaneConfiguration> known_config;
};

// Generators. `seed` fully determines the output together with the other
// arguments, which are all recorded in the provenance.
Instance gen_collinear(std::size_t s, std::size_t n, std::uint64_t seed);
/// Points (1 : a_i : b_j) with a_i = i, b_j = j.
Instance gen_grid(std::size_t d, std::size_t e);
/// counts[i] points on flats[i], none on another flat of the list, plus
/// `off_config` points on no flat and the explicit `fixed` points. The known
/// configuration is the first `known` flats (all by default).
/// Throws std::runtime_error if a flat cannot hold enough fresh points.
Instance gen_on_flats(const std::vector<Flat>& flats, const std::vector<std::size_t>& counts,
                      std::uint64_t seed, std::size_t off_config = 0,
                      const std::vector<ProjPoint>& fixed = {}, std::size_t known = SIZE_MAX);
Instance gen_random(std::size_t n, std::size_t size, long height, std::uint64_t seed);
/// s points (b^n : b^(n-1) a : ... : a^n) on the rational normal curve of P^n.
Instance gen_rnc(std::size_t s, std::size_t n, std::uint64_t seed);

/// Rebuilds an instance from its provenance. Throws ParseError.
Instance replay(const Json& provenance);

/// Random flat of the given dimension spanned by integer points of small height.
Flat random_flat(Rng& rng, std::size_t n, std::size_t dim);
/// Max absolute value of the primitive integer representative.
Integer height(const ProjPoint& p);

enum class Status { pass, fail, inconclusive, skipped };
std::string to_string(Status s);

struct VerdictReport {
  std::string property;
  Json provenance;
  Status status = Status::skipped;
  Json diagnostics;
};

Json to_json(const VerdictReport& r);

// Verifiers. Each sweeps r = 1..max_cbp_degree(X) unless stated otherwise.

/// CBP(r) and |X| <= 2r+1 force a line.
VerdictReport verify_bcd(const Instance& inst, const CoverOptions& options = {});
/// CBP(r) and |X| <= (d+1)r+1 force a configuration of dimension <= d.
VerdictReport verify_conjecture(const Instance& inst, std::size_t d,
                                const CoverOptions& options = {});
/// X minus any k <= r pieces of the known configuration has CBP(r-k).
VerdictReport verify_complement(const Instance& inst);
/// For split known configurations containing X, r = 1..r_X-1:
/// CBP(r) of X iff CBP(r) of every X cap P_i.
VerdictReport verify_split_equiv(const Instance& inst);
/// Skew known configuration with CBP(r): piece counts satisfy the dichotomy.
VerdictReport verify_skew_counts(const Instance& inst);
/// Two flats meeting in one point p with X inside their union: (X cap P_i) - p
/// or (X cap P_i) + p has CBP(r), checked for both orderings. Failures of the
/// form "X cap P_i or (X cap P_i) + p", which differs only when p is in X, are
/// listed under "collapsed_failures" without failing the verdict.
VerdictReport verify_meeting(const Instance& inst);
/// Not on a configuration of dimension d-1 and |X| <= (d+1)r+1 imply
/// |X| >= dr+2. Requires 2 <= d <= 5, where the d-1 case is proven.
VerdictReport verify_inductive_bound(const Instance& inst, std::size_t d,
                                     const CoverOptions& options = {});
/// |X| >= r+2 and HF(i) + HF(r-i) <= |X| whenever CBP(r), r = 0..r_X.
VerdictReport verify_corollary(const Instance& inst);
/// All four CBP characterizations agree for r = 0..r_X.
VerdictReport verify_characterizations(const Instance& inst);
/// dim ker(evaluation matrix^T) = |X| - HF(r) for r = 0..r_X.
VerdictReport verify_dual_dimension(const Instance& inst);

/// Named corpora: collinear, grid, random, rnc, split, skew, meeting,
/// complement, structured (CBP-rich sets for the conjecture), mixed.
/// Instance i depends only on (kind, seed, i).
std::vector<Instance> corpus(const std::string& kind, std::size_t count, std::uint64_t seed);

struct SearchResult {
  std::size_t trials = 0;
  std::size_t candidates = 0;  // instances with CBP(r) and |X| <= (d+1)r+1
  std::vector<Instance> hits;
  std::vector<Instance> inconclusive;
};

/// Looks for X with CBP(r), |X| <= (d+1)r+1 and no configuration of
/// dimension <= d. Hits are re-checked with all four CBP methods.
SearchResult counterexample_search(std::size_t d, std::size_t r, std::size_t trials,
                                   std::uint64_t seed, const CoverOptions& options = {});
Json to_json(const SearchResult& s, std::size_t d, std::size_t r, std::uint64_t seed);

struct SuiteReport {
  std::vector<VerdictReport> verdicts;  // ordered by run, then instance
  std::vector<Json> searches;
  std::size_t passed = 0, failed = 0, inconclusive = 0, skipped = 0;
  bool ok() const { return failed == 0 && inconclusive == 0; }
};

/// Runs a suite configuration:
///   {"seed": s, "threads": t, "limit": l,
///    "runs": [{"property": "bcd", "corpus": "collinear", "count": 20, "d": 4}, ...],
///    "searches": [{"d": 4, "r": 3, "trials": 100}, ...]}
/// Output depends only on the configuration, never on thread timing.
SuiteReport run_suite(const Json& config);
/// JSON lines: one per verdict, one per search, then a summary line.
std::string report_lines(const SuiteReport& r);
/// Human-readable per-property table.
std::string summary_table(const SuiteReport& r);

}  // namespace cblab
