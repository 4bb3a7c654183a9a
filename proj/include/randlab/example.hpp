#pragma once

#include <vector>

#include "randlab/joint.hpp"
#include "randlab/kernels.hpp"

namespace randlab {

// Builds the joint measure driven by the machine table (see
// example_core.hpp for the construction). Marginals are exactly uniform;
// conditional cell masses deviate from 2^-n exactly on branches where the
// corresponding detection fired.
JointMeasure build_example(const ExampleParams& params);

// Exhaustive P/Q sweep against the uniform product Q over |x|,|y| <= depth.
struct RatioBoundsReport {
  bool pass = true;
  Rational epsilon;
  int depth = 0;
  Rational min_ratio, max_ratio;
  Bits min_x, min_y, max_x, max_y;  // first witnesses in scan order
  bool low_extreme_attained = false;   // min == 1 - eps
  bool high_extreme_attained = false;  // max == 1 + eps
  std::size_t pairs_checked = 0;
  std::vector<RatioViolation> violations;  // outside [1-eps, 1+eps]
};
RatioBoundsReport verify_ratio_bounds(const JointMeasure& P, const Rational& epsilon, int depth);

struct DeviationReport {
  bool deviates = false;
  int cell = 0;
  Bits y;
  Rational expected;               // 2^-n
  std::vector<Rational> trace;     // P(cell | prefix) along prefixes of y
};
DeviationReport conditional_deviation(const JointMeasure& P, int n, const Bits& y);

struct MarginalViolation {
  std::string axis;  // "x" | "y"
  Bits node;
  Rational value, expected;
};
struct ProportionalityViolation {
  int cell = 0;
  Bits x, y;
  Rational value, expected;
};
struct FlipViolation {
  Bits y;
  std::string what;
};

struct ExampleInvariantsReport {
  bool pass = true;
  int depth = 0;
  ConsistencyReport additivity;                               // check (i)
  std::vector<MarginalViolation> marginal_violations;         // check (ii)
  std::vector<ProportionalityViolation> proportionality_violations;  // check (iii)
  std::vector<FlipViolation> flip_violations;                 // check (iv)
};

// (i) full additivity to depth; (ii) both marginals exactly uniform;
// (iii) within-cell proportionality P(x|y) = 2^(n-|x|) P(cell n | y);
// (iv) along every oracle branch each machine's split factor flips at most
// once, at most one machine flips per node, and factors stay in
// {1, 1-eps, 1+eps}.
ExampleInvariantsReport verify_example_invariants(const JointMeasure& P, int depth);

}  // namespace randlab
