#pragma once

// Plane configurations and minimum-dimension covers of point sets.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cblab/projective.hpp"

namespace cblab {

/// Union of distinct positive-dimensional flats.
struct PlaneConfiguration {
  std::vector<Flat> flats;

  /// Sum of the projective dimensions of the flats.
  std::size_t dimension() const;
  std::size_t length() const { return flats.size(); }
  /// True iff p lies on one of the flats.
  bool covers(const ProjPoint& p) const;
};

inline std::size_t config_dim(const PlaneConfiguration& p) { return p.dimension(); }
inline std::size_t config_len(const PlaneConfiguration& p) { return p.length(); }

struct ConfigClass {
  bool skew = false;
  bool split = false;
};

/// Configurations of length <= 1 count as both skew and split.
ConfigClass classify(const PlaneConfiguration& p);

/// A matroid-closed subset S = X cap span(S) of a point set.
struct ClosedSet {
  std::uint64_t members = 0;  // bit i set iff point i is in S
  std::size_t proj_dim = 0;   // projective dimension of span(S)
  std::vector<std::size_t> indices() const;
};

/// Every closed set whose span has projective dimension <= max_dim, ordered by
/// dimension and then by member mask. Requires |X| <= 64.
std::vector<ClosedSet> matroid_flats(const PointSet& x, std::size_t max_dim);

struct CoverResult {
  PlaneConfiguration config;
  std::size_t total_dim = 0;
  /// Labels each flat is responsible for; a partition of X's labels.
  std::vector<std::vector<std::size_t>> blocks;
  bool optimal = false;
};

/// Exhaustive search size limit: CB_LAB_LIMIT when set, else 24.
std::size_t default_exhaustive_limit();

struct CoverOptions {
  std::size_t exhaustive_limit = default_exhaustive_limit();
};

/// Raised when X is too large for the exhaustive search. Carries a greedy
/// cover as an upper bound.
class InexhaustiveError : public std::runtime_error {
 public:
  InexhaustiveError(const std::string& what, CoverResult greedy)
      : std::runtime_error(what), greedy_(std::move(greedy)) {}
  const CoverResult& greedy() const { return greedy_; }

 private:
  CoverResult greedy_;
};

/// Minimum-dimension plane configuration containing X, provided its
/// dimension is at most `budget`.
std::optional<CoverResult> min_cover(const PointSet& x, std::size_t budget,
                                     const CoverOptions& options = {});

/// Dimension of an optimal cover; 0 for the empty set.
std::size_t min_cover_dim(const PointSet& x, const CoverOptions& options = {});

/// True iff X lies on a plane configuration of dimension at most d.
bool lies_on_config_dim(const PointSet& x, std::size_t d, const CoverOptions& options = {});

/// Greedy upper bound: repeatedly takes the flat with the most newly covered
/// points per unit of dimension. Works for any size; optimal is false.
CoverResult greedy_cover(const PointSet& x);

}  // namespace cblab
