#pragma once

#include <vector>

#include "randlab/measure.hpp"

namespace randlab {

class JointMeasure;

struct RatioViolation {
  Bits x, y;
  Rational ratio;
};

// Exhaustive sweeps may run serially or OpenMP-parallel; both modes must
// produce identical reports (exact rationals, canonical ordering), so the
// parallel path is a pure performance choice, never a semantic one.
enum class SweepMode { serial, parallel };

// Both one-sided additivity identities, non-negativity and root mass over
// all |x|, |y| <= depth; violations in canonical (|y|, y, |x|, x) order.
ConsistencyReport sweep_joint_consistency(const JointMeasure& j, int depth, SweepMode mode);

struct RatioSweep {
  Rational min_ratio, max_ratio;
  Bits min_x, min_y, max_x, max_y;  // first witnesses in canonical scan order
  std::size_t pairs_checked = 0;
  std::vector<RatioViolation> violations;  // ratios outside [lo, hi]
};

// Ratio of j against the uniform product over all |x|, |y| <= depth:
// ratio(x, y) = j(x, y) * 2^(|x|+|y|). Canonical scan order: y by
// (length, lex), then x by (length, lex).
RatioSweep sweep_ratio_extremes(const JointMeasure& j, int depth, const Rational& lo,
                                const Rational& hi, SweepMode mode);

}  // namespace randlab
