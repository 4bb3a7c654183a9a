#include "randlab/example.hpp"

#include <algorithm>

#include "randlab/kernels.hpp"

namespace randlab {

void validate_example_params(const ExampleParams& p) {
  if (p.epsilon <= 0 || p.epsilon >= 1) {
    throw precondition_error("epsilon-out-of-range",
                             "epsilon must satisfy 0 < eps < 1, got " + rational_str(p.epsilon));
  }
  // Trigger-backed tables are monotone by construction; entry-backed ones
  // were verified at load time. Nothing further to check here.
}

SpineState initial_state(const ExampleParams& p) {
  SpineState st;
  std::size_t n = static_cast<std::size_t>(p.table.machine_count());
  st.beta.assign(n, Rational(1));
  st.fired.assign(n, false);
  st.pending.assign(n, false);
  return st;
}

void absorb_detections(const ExampleParams& p, const Bits& y, SpineState* st) {
  for (int m = 1; m <= p.table.machine_count(); ++m) {
    std::size_t i = static_cast<std::size_t>(m - 1);
    if (!st->fired[i] && !st->pending[i] && p.table.halted(m, y)) {
      st->pending[i] = true;
    }
  }
}

int step_state(const ExampleParams& p, char bit, SpineState* st) {
  for (std::size_t i = 0; i < st->pending.size(); ++i) {
    if (!st->pending[i]) continue;
    Rational low = Rational(1) - p.epsilon;
    Rational high = Rational(1) + p.epsilon;
    if (p.flip == FlipStyle::both_low) {
      st->beta[i] = low;
    } else {
      st->beta[i] = (bit == '0') ? low : high;
    }
    st->pending[i] = false;
    st->fired[i] = true;
    return static_cast<int>(i) + 1;
  }
  return 0;
}

SpineState state_at(const ExampleParams& p, const Bits& y) {
  SpineState st = initial_state(p);
  Bits node;
  absorb_detections(p, node, &st);
  for (char bit : y) {
    step_state(p, bit, &st);
    node.push_back(bit);
    absorb_detections(p, node, &st);
  }
  return st;
}

Rational conditional_given_state(const ExampleParams& p, const SpineState& st, const Bits& x) {
  int machines = p.table.machine_count();
  Rational mass = 1;
  for (std::size_t j = 0; j < x.size(); ++j) {
    int k = static_cast<int>(j);  // leading spine position
    if (k >= machines) {
      // Inside the residual tail: uniform refinement.
      mass /= 2;
      continue;
    }
    Rational pi = st.beta[j] / 2;
    if (x[j] == '0') {
      // Enter cell k+1; the rest of x refines uniformly inside it.
      mass *= pi;
      for (std::size_t t = j + 1; t < x.size(); ++t) mass /= 2;
      return mass;
    }
    mass *= Rational(1) - pi;
  }
  return mass;
}

Bits cell_marker(int n) {
  Bits b(static_cast<std::size_t>(n - 1), '1');
  b.push_back('0');
  return b;
}

JointMeasure build_example(const ExampleParams& params) { return JointMeasure::example(params); }

RatioBoundsReport verify_ratio_bounds(const JointMeasure& P, const Rational& epsilon, int depth) {
  RatioBoundsReport rep;
  rep.epsilon = epsilon;
  rep.depth = depth;
  RatioSweep sweep = sweep_ratio_extremes(P, depth, Rational(1) - epsilon, Rational(1) + epsilon,
                                          SweepMode::serial);
  rep.min_ratio = sweep.min_ratio;
  rep.max_ratio = sweep.max_ratio;
  rep.min_x = sweep.min_x;
  rep.min_y = sweep.min_y;
  rep.max_x = sweep.max_x;
  rep.max_y = sweep.max_y;
  rep.pairs_checked = sweep.pairs_checked;
  rep.violations = sweep.violations;
  rep.low_extreme_attained = rep.min_ratio == Rational(1) - epsilon;
  rep.high_extreme_attained = rep.max_ratio == Rational(1) + epsilon;
  rep.pass = rep.violations.empty();
  return rep;
}

DeviationReport conditional_deviation(const JointMeasure& P, int n, const Bits& y) {
  const ExampleParams* params = P.example_params();
  if (params == nullptr) {
    throw precondition_error("kind-mismatch", "conditional_deviation needs the example kind");
  }
  if (n < 1 || n > params->table.machine_count()) {
    throw precondition_error("precondition-violated",
                             "cell index " + std::to_string(n) + " exceeds the machine count " +
                                 std::to_string(params->table.machine_count()));
  }
  DeviationReport rep;
  rep.cell = n;
  rep.y = y;
  rep.expected = pow2(-n);
  Bits marker = cell_marker(n);
  rep.trace = P.conditional_trace(marker, y);
  rep.deviates = rep.trace.back() != rep.expected;
  return rep;
}

ExampleInvariantsReport verify_example_invariants(const JointMeasure& P, int depth) {
  const ExampleParams* params = P.example_params();
  if (params == nullptr) {
    throw precondition_error("kind-mismatch", "verify_example_invariants needs the example kind");
  }
  ExampleInvariantsReport rep;
  rep.depth = depth;

  // (i) additivity in both coordinates.
  rep.additivity = check_consistency(P, depth);

  // (ii) both marginals exactly uniform.
  Measure mx = P.marginal_x();
  Measure my = P.marginal_y();
  for (int len = 0; len <= depth; ++len) {
    Rational expected = pow2(-len);
    for (const Bits& s : strings_of_length(len)) {
      Rational vx = mx(s);
      if (vx != expected) rep.marginal_violations.push_back({"x", s, vx, expected});
      Rational vy = my(s);
      if (vy != expected) rep.marginal_violations.push_back({"y", s, vy, expected});
    }
  }

  // (iii) within-cell proportionality, directly from rectangle values:
  // P(x, y) = 2^(n-|x|) P(marker_n, y) whenever marker_n is a prefix of x.
  int machines = params->table.machine_count();
  for (int ylen = 0; ylen <= depth; ++ylen) {
    for (const Bits& y : strings_of_length(ylen)) {
      for (int n = 1; n <= machines && n <= depth; ++n) {
        Bits marker = cell_marker(n);
        Rational cell_mass = P(marker, y);
        for (int xlen = n; xlen <= depth; ++xlen) {
          Rational expected = cell_mass * pow2(n - xlen);
          for (const Bits& tail : strings_of_length(xlen - n)) {
            Bits x = marker + tail;
            Rational v = P(x, y);
            if (v != expected) {
              rep.proportionality_violations.push_back({n, x, y, v, expected});
            }
          }
        }
      }
    }
  }

  // (iv) flip discipline along every oracle branch.
  Rational low = Rational(1) - params->epsilon;
  Rational high = Rational(1) + params->epsilon;
  struct Frame {
    Bits y;
    SpineState st;
    std::vector<int> flips;  // per machine, along this branch
  };
  std::vector<Frame> stack;
  {
    Frame root{Bits{}, initial_state(*params), std::vector<int>(static_cast<std::size_t>(machines), 0)};
    absorb_detections(*params, root.y, &root.st);
    stack.push_back(std::move(root));
  }
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    for (const Rational& b : f.st.beta) {
      if (b != 1 && b != low && b != high) {
        rep.flip_violations.push_back({f.y, "split factor " + rational_str(b) +
                                                " outside {1, 1-eps, 1+eps}"});
        break;
      }
    }
    if (static_cast<int>(f.y.size()) >= depth) continue;
    for (char bit : {'0', '1'}) {
      Frame child = f;
      child.y.push_back(bit);
      int changed = 0;
      SpineState before = child.st;
      int fired = step_state(*params, bit, &child.st);
      for (std::size_t i = 0; i < child.st.beta.size(); ++i) {
        if (child.st.beta[i] != before.beta[i]) {
          ++changed;
          child.flips[i] += 1;
          if (child.flips[i] > 1) {
            rep.flip_violations.push_back(
                {child.y, "machine " + std::to_string(i + 1) + " flipped twice on one branch"});
          }
        }
      }
      if (changed > 1) {
        rep.flip_violations.push_back({child.y, "more than one machine flipped at one node"});
      }
      if (fired != 0 && changed == 0 && params->flip == FlipStyle::balanced) {
        rep.flip_violations.push_back(
            {child.y, "machine " + std::to_string(fired) + " fired without changing its factor"});
      }
      absorb_detections(*params, child.y, &child.st);
      stack.push_back(std::move(child));
    }
  }

  rep.pass = rep.additivity.pass && rep.marginal_violations.empty() &&
             rep.proportionality_violations.empty() && rep.flip_violations.empty();
  return rep;
}

}  // namespace randlab
