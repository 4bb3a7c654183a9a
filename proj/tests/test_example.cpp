#include <doctest.h>

#include "randlab/example.hpp"

using namespace randlab;

namespace {

ExampleParams params_with(const Rational& eps, MachineTable table,
                          FlipStyle flip = FlipStyle::balanced) {
  ExampleParams p;
  p.epsilon = eps;
  p.table = std::move(table);
  p.flip = flip;
  return p;
}

JointMeasure trig1(const Rational& eps = Rational(1, 2)) {
  return JointMeasure::example(params_with(eps, MachineTable::from_triggers(1, {{1, "1"}})));
}

}  // namespace

TEST_CASE("detection flips the conditional at the trigger's children") {
  JointMeasure p = trig1();
  CHECK(p.conditional("0", "11") == Rational(3, 4));
  CHECK(p.conditional("0", "10") == Rational(1, 4));
  // Before and beside the detection: still the uniform share.
  CHECK(p.conditional("0", "") == Rational(1, 2));
  CHECK(p.conditional("0", "1") == Rational(1, 2));
  CHECK(p.conditional("0", "0") == Rational(1, 2));
  // Fired factors are inherited by all descendants.
  CHECK(p.conditional("0", "110") == Rational(3, 4));
  CHECK(p.conditional("0", "111") == Rational(3, 4));
  CHECK(p.conditional("0", "100") == Rational(1, 4));
}

TEST_CASE("an empty machine table gives exactly the uniform product") {
  JointMeasure p =
      JointMeasure::example(params_with(Rational(1, 2), MachineTable::from_triggers(2, {})));
  JointMeasure u = JointMeasure::product(Measure::uniform(), Measure::uniform());
  for (int xl = 0; xl <= 4; ++xl) {
    for (const Bits& x : strings_of_length(xl)) {
      for (int yl = 0; yl <= 4; ++yl) {
        for (const Bits& y : strings_of_length(yl)) CHECK(p(x, y) == u(x, y));
      }
    }
  }
}

TEST_CASE("epsilon outside (0,1) is rejected") {
  CHECK_THROWS_AS(JointMeasure::example(params_with(Rational(1), MachineTable::empty(1))),
                  precondition_error);
  CHECK_THROWS_AS(JointMeasure::example(params_with(Rational(0), MachineTable::empty(1))),
                  precondition_error);
  CHECK_THROWS_AS(JointMeasure::example(params_with(Rational(-1, 2), MachineTable::empty(1))),
                  precondition_error);
}

TEST_CASE("ratio bounds: extremes are attained exactly when a detection fires") {
  RatioBoundsReport r = verify_ratio_bounds(trig1(), Rational(1, 2), 4);
  CHECK(r.pass);
  CHECK(r.violations.empty());
  CHECK(r.min_ratio == Rational(1, 2));
  CHECK(r.max_ratio == Rational(3, 2));
  CHECK(r.low_extreme_attained);
  CHECK(r.high_extreme_attained);
  // First witnesses in the canonical (|y|, y, |x|, x) scan: both at the
  // low child of the trigger, the cell first and then the spine.
  CHECK(r.min_x == "0");
  CHECK(r.min_y == "10");
  CHECK(r.max_x == "1");
  CHECK(r.max_y == "10");

  JointMeasure quiet =
      JointMeasure::example(params_with(Rational(1, 2), MachineTable::from_triggers(1, {})));
  RatioBoundsReport rq = verify_ratio_bounds(quiet, Rational(1, 2), 3);
  CHECK(rq.pass);
  CHECK(rq.min_ratio == Rational(1));
  CHECK(rq.max_ratio == Rational(1));
  CHECK_FALSE(rq.low_extreme_attained);
  CHECK_FALSE(rq.high_extreme_attained);
}

TEST_CASE("ratio bounds: two machines with disjoint triggers stay in band") {
  JointMeasure p = JointMeasure::example(
      params_with(Rational(1, 4), MachineTable::from_triggers(2, {{1, "0"}, {2, "1"}})));
  RatioBoundsReport r = verify_ratio_bounds(p, Rational(1, 4), 5);
  CHECK(r.pass);
  CHECK(r.violations.empty());
  CHECK(r.min_ratio == Rational(3, 4));
  CHECK(r.max_ratio == Rational(5, 4));
  CHECK(r.low_extreme_attained);
  CHECK(r.high_extreme_attained);
}

TEST_CASE("conditional deviation traces") {
  JointMeasure p = trig1();
  DeviationReport fired = conditional_deviation(p, 1, "11");
  CHECK(fired.deviates);
  CHECK(fired.expected == Rational(1, 2));
  CHECK(fired.trace == std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(3, 4)});

  DeviationReport quiet = conditional_deviation(p, 1, "00");
  CHECK_FALSE(quiet.deviates);
  CHECK(quiet.trace == std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(1, 2)});

  // A pending detection only takes effect one step later.
  CHECK_FALSE(conditional_deviation(p, 1, "1").deviates);

  // The nested split couples later cells to earlier flips: with two
  // machines and only machine 1 triggering, cell 2 still moves at "11".
  JointMeasure two = JointMeasure::example(
      params_with(Rational(1, 2), MachineTable::from_triggers(2, {{1, "1"}})));
  DeviationReport coupled = conditional_deviation(two, 2, "11");
  CHECK(coupled.deviates);
  CHECK(coupled.expected == Rational(1, 4));
  CHECK(coupled.trace == std::vector<Rational>{Rational(1, 4), Rational(1, 4), Rational(1, 8)});

  // Last-machine-only tables keep earlier cells exact.
  JointMeasure last = JointMeasure::example(
      params_with(Rational(1, 2), MachineTable::from_triggers(2, {{2, "1"}})));
  CHECK_FALSE(conditional_deviation(last, 1, "11").deviates);
  CHECK(conditional_deviation(last, 2, "11").deviates);
}

TEST_CASE("conditional deviation preconditions") {
  CHECK_THROWS_AS(conditional_deviation(trig1(), 2, "11"), precondition_error);
  CHECK_THROWS_AS(conditional_deviation(trig1(), 0, "11"), precondition_error);
  JointMeasure u = JointMeasure::product(Measure::uniform(), Measure::uniform());
  CHECK_THROWS_WITH_AS(conditional_deviation(u, 1, "1"), doctest::Contains("kind-mismatch"),
                       precondition_error);
}

TEST_CASE("invariant suite passes for well-formed constructions") {
  CHECK(verify_example_invariants(trig1(), 5).pass);
  JointMeasure quiet =
      JointMeasure::example(params_with(Rational(3, 4), MachineTable::from_triggers(1, {})));
  CHECK(verify_example_invariants(quiet, 4).pass);
  JointMeasure two = JointMeasure::example(
      params_with(Rational(1, 4), MachineTable::from_triggers(2, {{1, "0"}, {2, "1"}})));
  ExampleInvariantsReport rep = verify_example_invariants(two, 5);
  CHECK(rep.pass);
  CHECK(rep.additivity.pass);
  CHECK(rep.marginal_violations.empty());
  CHECK(rep.proportionality_violations.empty());
  CHECK(rep.flip_violations.empty());
}

TEST_CASE("the both-low control breaks additivity at the detection node") {
  JointMeasure bad = JointMeasure::example(params_with(
      Rational(1, 2), MachineTable::from_triggers(1, {{1, "1"}}), FlipStyle::both_low));
  ExampleInvariantsReport rep = verify_example_invariants(bad, 3);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.additivity.pass);
  bool at_detection = false;
  for (const auto& v : rep.additivity.violations) {
    if (v.what == "additivity-y" && v.x == "0" && v.y == "1") {
      at_detection = true;
      CHECK(v.lhs == Rational(1, 4));
      CHECK(v.rhs == Rational(1, 8));
    }
  }
  CHECK(at_detection);
  // The corruption is purely a mass-balance one: marginals at the boundary,
  // proportionality inside cells, and flip discipline all still hold.
  CHECK(rep.marginal_violations.empty());
  CHECK(rep.proportionality_violations.empty());
  CHECK(rep.flip_violations.empty());
}

TEST_CASE("trigger and entry forms of the same table agree") {
  MachineTable a = MachineTable::from_triggers(1, {{1, "1"}});
  MachineTable b = MachineTable::from_entries(
      1, {{1, "0", false}, {1, "1", true}, {1, "11", true}, {1, "10", true}});
  CHECK(a.triggers() == b.triggers());
  JointMeasure pa = JointMeasure::example(params_with(Rational(1, 2), a));
  JointMeasure pb = JointMeasure::example(params_with(Rational(1, 2), b));
  for (int xl = 0; xl <= 3; ++xl) {
    for (const Bits& x : strings_of_length(xl)) {
      for (int yl = 0; yl <= 3; ++yl) {
        for (const Bits& y : strings_of_length(yl)) CHECK(pa(x, y) == pb(x, y));
      }
    }
  }
  CHECK_THROWS_WITH_AS(
      MachineTable::from_entries(1, {{1, "1", true}, {1, "11", false}}),
      doctest::Contains("non-monotone-table"), precondition_error);
}

TEST_CASE("same-node collisions are serialized one machine per node") {
  // Both machines trigger at the root, so both are pending immediately;
  // machine 1 fires on the first step, machine 2 on the second.
  JointMeasure p = JointMeasure::example(
      params_with(Rational(1, 2), MachineTable::from_triggers(2, {{1, ""}, {2, ""}})));
  ExampleInvariantsReport rep = verify_example_invariants(p, 4);
  CHECK(rep.pass);
  // After "1" only machine 1 has fired (high); after "11" machine 2 too.
  CHECK(p.conditional("0", "1") == Rational(3, 4));
  // Cell 2 at "11": (1 - 3/4) * (3/2)/2 = 3/16.
  CHECK(p.conditional("10", "11") == Rational(3, 16));
  // Cell 2 at "10": machine 2 fired low on the 0-step: (1 - 3/4) * (1/2)/2.
  CHECK(p.conditional("10", "10") == Rational(1, 16));
}
