#pragma once

// Separators and the Cayley-Bacharach property CBP(r).
//
// X has CBP(r) when every degree-r hypersurface through all but one point of
// X passes through the last one. Four equivalent tests are provided and
// `cbp` runs all of them, treating any disagreement as a bug:
//
//   hf            hf(X \ {p}, r) == hf(X, r) for every p
//   alpha         every separator degree alpha(p) is at least r + 1
//   divisibility  no degree-D separator is x0^(D-r) times a degree-r form,
//                 D = max(r_X, r); needs x0 nonvanishing on X
//   dual          some c in Q^X with full support kills every degree-r form

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "cblab/hilbert.hpp"
#include "cblab/projective.hpp"

namespace cblab {

/// A minimal separator of X \ {p} in X: a form of degree alpha vanishing on
/// every other point, scaled to take the value 1 at p.
struct Separator {
  std::size_t point_index = 0;
  std::size_t alpha = 0;
  Form form;
};

/// Coefficients c_p over the points of X with sum_p c_p m(p) = 0 for every
/// monomial m of the given degree, evaluated at normalized coordinates.
struct DualVector {
  QVector entries;
  std::size_t degree = 0;
};

struct CBPReport {
  int r = 0;
  bool verdict = false;
  // Unset when the method was skipped (fast mode).
  std::optional<bool> by_hf, by_alpha, by_divisibility, by_dual;
  std::optional<DualVector> witness;       // when verdict is true and dual ran
  std::optional<std::size_t> failing_label;  // when verdict is false
};

/// Thrown when the four characterizations disagree.
class CbpDisagreement : public std::runtime_error {
 public:
  CbpDisagreement(const std::string& what, CBPReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const CBPReport& report() const { return report_; }

 private:
  CBPReport report_;
};

/// Initial degree of I_{Y/X} for Y = X minus the point at `index`.
std::size_t alpha(const PointSet& x, std::size_t index);
Separator separator(const PointSet& x, std::size_t index);

bool cbp_hf(const PointSet& x, int r);
bool cbp_alpha(const PointSet& x, int r);
/// Throws std::domain_error if some point has x0 = 0.
bool cbp_separator_div(const PointSet& x, int r);
std::optional<DualVector> cbp_dual(const PointSet& x, int r);

/// Runs the four methods (only `hf` when fast) and returns the common verdict.
/// Throws std::invalid_argument for an empty set or r < 0, CbpDisagreement on
/// a mismatch.
CBPReport cbp(const PointSet& x, int r, bool fast = false);

struct MaxCbp {
  int degree = -1;  // -1 when no r >= 0 works (singletons)
  bool is_cb_scheme = false;
};

/// Largest r with CBP(r); flags whether it reaches r_X - 1.
MaxCbp max_cbp_degree(const PointSet& x, bool fast = false);

}  // namespace cblab
