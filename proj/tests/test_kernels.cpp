#include <doctest.h>

#include "randlab/example.hpp"
#include "randlab/kernels.hpp"

using namespace randlab;

namespace {

JointMeasure trig1_example() {
  ExampleParams params;
  params.epsilon = Rational(1, 2);
  params.table = MachineTable::from_triggers(1, {{1, "1"}});
  return JointMeasure::example(params);
}

Measure perturbed_table() {
  std::map<Bits, Rational> leaves = {{"00", Rational(1, 6)},
                                     {"01", Rational(1, 3)},
                                     {"10", Rational(1, 4)},
                                     {"11", Rational(1, 4)}};
  return Measure::table(2, leaves).with_perturbed_node("00", Rational(1, 100));
}

void check_same(const ConsistencyReport& a, const ConsistencyReport& b) {
  CHECK(a.pass == b.pass);
  CHECK(a.depth == b.depth);
  CHECK(a.nodes_checked == b.nodes_checked);
  REQUIRE(a.violations.size() == b.violations.size());
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    CHECK(a.violations[i].x == b.violations[i].x);
    CHECK(a.violations[i].y == b.violations[i].y);
    CHECK(a.violations[i].what == b.violations[i].what);
    CHECK(a.violations[i].lhs == b.violations[i].lhs);
    CHECK(a.violations[i].rhs == b.violations[i].rhs);
  }
}

void check_same(const RatioSweep& a, const RatioSweep& b) {
  CHECK(a.pairs_checked == b.pairs_checked);
  CHECK(a.min_ratio == b.min_ratio);
  CHECK(a.max_ratio == b.max_ratio);
  CHECK(a.min_x == b.min_x);
  CHECK(a.min_y == b.min_y);
  CHECK(a.max_x == b.max_x);
  CHECK(a.max_y == b.max_y);
  REQUIRE(a.violations.size() == b.violations.size());
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    CHECK(a.violations[i].x == b.violations[i].x);
    CHECK(a.violations[i].y == b.violations[i].y);
    CHECK(a.violations[i].ratio == b.violations[i].ratio);
  }
}

}  // namespace

TEST_CASE("joint consistency sweep: serial and parallel agree on a clean instance") {
  JointMeasure p = trig1_example();
  ConsistencyReport serial = sweep_joint_consistency(p, 6, SweepMode::serial);
  ConsistencyReport parallel = sweep_joint_consistency(p, 6, SweepMode::parallel);
  CHECK(serial.pass);
  CHECK(serial.violations.empty());
  check_same(serial, parallel);
}

TEST_CASE("joint consistency sweep: violations are found and ordered identically") {
  JointMeasure bad = JointMeasure::product(perturbed_table(), Measure::uniform());
  ConsistencyReport serial = sweep_joint_consistency(bad, 3, SweepMode::serial);
  ConsistencyReport parallel = sweep_joint_consistency(bad, 3, SweepMode::parallel);
  CHECK_FALSE(serial.pass);
  check_same(serial, parallel);

  // The perturbed leaf breaks x-additivity at its parent, within every
  // oracle column: 15 oracle nodes at depth 3.
  REQUIRE(serial.violations.size() == 15);
  const ConsistencyViolation& v = serial.violations[0];
  CHECK(v.x == "0");
  CHECK(v.y == "");
  CHECK(v.what == "additivity-x");
  CHECK(v.lhs == Rational(1, 2));
  CHECK(v.rhs == Rational(51, 100));
  for (const ConsistencyViolation& each : serial.violations) {
    CHECK(each.x == "0");
    CHECK(each.what == "additivity-x");
  }
}

TEST_CASE("ratio sweep: serial and parallel agree with extremes in band") {
  JointMeasure p = trig1_example();
  RatioSweep serial = sweep_ratio_extremes(p, 5, Rational(1, 2), Rational(3, 2),
                                           SweepMode::serial);
  RatioSweep parallel = sweep_ratio_extremes(p, 5, Rational(1, 2), Rational(3, 2),
                                             SweepMode::parallel);
  check_same(serial, parallel);
  CHECK(serial.violations.empty());
  CHECK(serial.pairs_checked == 63 * 63);
  CHECK(serial.min_ratio == Rational(1, 2));
  CHECK(serial.max_ratio == Rational(3, 2));
  CHECK(serial.min_x == "0");
  CHECK(serial.min_y == "10");
  CHECK(serial.max_x == "1");
  CHECK(serial.max_y == "10");
}

TEST_CASE("ratio sweep: a narrow band lists every off-ratio pair canonically") {
  JointMeasure p = trig1_example();
  RatioSweep serial = sweep_ratio_extremes(p, 4, Rational(1), Rational(1), SweepMode::serial);
  RatioSweep parallel = sweep_ratio_extremes(p, 4, Rational(1), Rational(1), SweepMode::parallel);
  check_same(serial, parallel);
  REQUIRE(!serial.violations.empty());
  CHECK(serial.violations[0].x == "0");
  CHECK(serial.violations[0].y == "10");
  CHECK(serial.violations[0].ratio == Rational(1, 2));
  for (std::size_t i = 1; i < serial.violations.size(); ++i) {
    const RatioViolation& a = serial.violations[i - 1];
    const RatioViolation& b = serial.violations[i];
    bool ordered = a.y.size() < b.y.size() ||
                   (a.y.size() == b.y.size() &&
                    (a.y < b.y || (a.y == b.y && (a.x.size() < b.x.size() ||
                                                  (a.x.size() == b.x.size() && a.x < b.x)))));
    CHECK(ordered);
  }
}

TEST_CASE("plain-measure consistency matches between wrapper and sweep") {
  // The single-measure checker and the joint sweep agree on a product of a
  // corrupted measure with itself being caught either way.
  Measure bad = perturbed_table();
  ConsistencyReport plain = check_consistency(bad, 3);
  CHECK_FALSE(plain.pass);
  ConsistencyReport joint =
      sweep_joint_consistency(JointMeasure::product(bad, Measure::uniform()), 3,
                              SweepMode::serial);
  CHECK_FALSE(joint.pass);
}
