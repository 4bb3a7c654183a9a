#pragma once

#include <vector>

#include "randlab/machine_table.hpp"
#include "randlab/rational.hpp"

namespace randlab {

// The constructed joint measure splits the conditional measure P(. | y)
// along the all-ones spine: at spine node 1^(n-1) the remaining mass
// divides between cell n (prefix 1^(n-1)0, share beta_n(y)/2) and the rest
// of the spine (share 1 - beta_n(y)/2). Every beta starts at 1 (uniform
// split). When machine n first halts at a node y* (halted there, not at
// the parent), beta_n flips at the two children: 1-eps below y*0 and
// 1+eps below y*1, inherited forever after. If several machines newly halt
// at the same node, only the lowest-index one fires there; the others stay
// pending and fire one per node further down each branch. One flip per
// node keeps the conditional affine in a single beta, which is exactly
// what makes the two children average back to the parent (additivity) and
// keeps both marginals uniform. Cells and the residual tail 1^N refine
// uniformly inside.
enum class FlipStyle {
  balanced,  // the construction proper: (1-eps, 1+eps) across the children
  both_low,  // negative control: both children get 1-eps; mass balance
             // breaks at the detection node, which verifiers must report
};

struct ExampleParams {
  Rational epsilon;
  MachineTable table;
  FlipStyle flip = FlipStyle::balanced;
};

// Per-machine split factors along an oracle path.
struct SpineState {
  std::vector<Rational> beta;
  std::vector<bool> fired;
  std::vector<bool> pending;
};

// Throws epsilon-out-of-range / non-monotone-table for unusable parameters.
void validate_example_params(const ExampleParams& p);

SpineState initial_state(const ExampleParams& p);

// Registers fresh detections at node y (monotone halting, so a machine is
// "newly" halted the first time a node reports it along the path).
void absorb_detections(const ExampleParams& p, const Bits& y, SpineState* st);

// Advances to the child y+bit, applying at most one pending flip.
// Returns the 1-based machine index that fired, or 0.
int step_state(const ExampleParams& p, char bit, SpineState* st);

// State after walking from the root to y. Detections at y itself are
// absorbed but only affect steps past y.
SpineState state_at(const ExampleParams& p, const Bits& y);

// P(x | y) given the state at y.
Rational conditional_given_state(const ExampleParams& p, const SpineState& st, const Bits& x);

// Cell n <-> marker prefix 1^(n-1)0, n = 1..machine_count.
Bits cell_marker(int n);

}  // namespace randlab
