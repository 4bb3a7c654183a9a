#include <doctest.h>

#include <cstdint>
#include <map>

#include "randlab/martingale.hpp"

using namespace randlab;

namespace {

Measure zeros() { return Measure::bernoulli(Rational(0)); }

// Deterministic rng for the randomized property checks.
struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 33;
  }
  long in(long lo, long hi) { return lo + static_cast<long>(next() % (hi - lo + 1)); }
};

Measure random_table(Lcg& rng, int depth) {
  std::vector<Bits> leaves = strings_of_length(depth);
  std::vector<Rational> w;
  Rational total = 0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    w.push_back(Rational(rng.in(1, 16)));
    total += w.back();
  }
  std::map<Bits, Rational> m;
  for (std::size_t i = 0; i < leaves.size(); ++i) m[leaves[i]] = w[i] / total;
  return Measure::table(depth, m);
}

// Independent oracle for the Doob event mass: per-leaf sup over prefixes.
Rational doob_mass_by_leaves(const Measure& P, const RatioProcess& proc, int depth, long m) {
  Rational mass = 0;
  Rational mr(m);
  for (const Bits& x : strings_of_length(depth)) {
    bool in = false;
    for (int i = 1; i <= depth && !in; ++i) {
      in = ext_greater(proc(x.substr(0, static_cast<std::size_t>(i))), mr);
    }
    if (in) mass += P(x);
  }
  return mass;
}

}  // namespace

TEST_CASE("likelihood ratios use the a/0 convention") {
  Measure u = Measure::uniform();
  Measure b = Measure::bernoulli(Rational(1, 3));
  CHECK(likelihood_ratio(u, b, "11") == ExtendedRational::finite(Rational(4, 9)));
  CHECK(likelihood_ratio(u, b, "0") == ExtendedRational::finite(Rational(4, 3)));
  CHECK(likelihood_ratio(u, u, "0101") == ExtendedRational::finite(Rational(1)));
  CHECK(likelihood_ratio(zeros(), u, "1") == ExtendedRational::inf());
  CHECK(likelihood_ratio(u, zeros(), "1") == ExtendedRational::finite(Rational(0)));
  // 0/0 = 0: both measures null past a '1' under the point mass.
  CHECK(likelihood_ratio(zeros(), zeros(), "10") == ExtendedRational::finite(Rational(0)));
}

TEST_CASE("likelihood ratio processes are exact martingales under positive P") {
  Measure u = Measure::uniform();
  SubmartingaleReport rep = check_submartingale(u, RatioProcess::likelihood(u, Measure::bernoulli(Rational(1, 3))), 5);
  CHECK(rep.pass);
  CHECK(rep.martingale);
  CHECK(rep.violations.empty());
  CHECK(rep.nodes_checked == 31);
  CHECK(rep.null_nodes_skipped == 0);
}

TEST_CASE("a strict submartingale passes without the martingale flag") {
  Measure u = Measure::uniform();
  RatioProcess depth_proc = RatioProcess::from_function(
      "depth", [](const Bits& x) { return ExtendedRational::finite(Rational(static_cast<long>(x.size()))); });
  SubmartingaleReport rep = check_submartingale(u, depth_proc, 4);
  CHECK(rep.pass);
  CHECK_FALSE(rep.martingale);
}

TEST_CASE("a supermartingale is reported with the violating node") {
  Measure u = Measure::uniform();
  RatioProcess spike = RatioProcess::from_function("spike", [](const Bits& x) {
    return ExtendedRational::finite(Rational(x.empty() ? 2 : 1));
  });
  SubmartingaleReport rep = check_submartingale(u, spike, 2);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.martingale);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].x == "");
  CHECK(rep.violations[0].lhs == ExtendedRational::finite(Rational(1)));
  CHECK(rep.violations[0].rhs == ExtendedRational::finite(Rational(2)));
}

TEST_CASE("null nodes are skipped and 0 * inf weighs nothing") {
  // Under the point mass P, the ratio Q/P is infinite off the spine, but
  // those nodes are P-null: they may neither crash nor contribute.
  Measure p = zeros();
  Measure u = Measure::uniform();
  SubmartingaleReport rep = check_submartingale(p, RatioProcess::likelihood(p, u), 3);
  CHECK(rep.nodes_checked == 3);        // the all-zeros spine
  CHECK(rep.null_nodes_skipped == 4);   // "1", "01", "10", "11"
  // Uniform mass escapes into P-null branches, so the process loses mass:
  // lhs = Q(x0) = 2^-(n+1) < 2^-n = rhs at every spine node.
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.violations.size() == 3);
  CHECK(rep.violations[0].x == "");
  CHECK(rep.violations[0].lhs == ExtendedRational::finite(Rational(1, 2)));
  CHECK(rep.violations[0].rhs == ExtendedRational::finite(Rational(1)));
}

TEST_CASE("Doob inequality worked example with the transported-set chain") {
  Measure u = Measure::uniform();
  RatioProcess r = RatioProcess::likelihood(u, zeros());

  ApproximationScheme scheme;
  scheme.dyadic_log = true;
  scheme.c = 1;
  scheme.f[{Bits{}, 0}] = Rational(0);
  scheme.f[{"0", 1}] = Rational(1);
  scheme.f[{"00", 2}] = Rational(2);

  DoobReport rep = doob_check(u, r, 2, {1, 2, 4}, &scheme);
  CHECK(rep.pass);
  REQUIRE(rep.records.size() == 3);

  const DoobRecord& m1 = rep.records[0];
  CHECK(m1.mass == Rational(1, 2));
  CHECK(m1.expectation == ExtendedRational::finite(Rational(1)));
  CHECK(m1.bound == Rational(1));
  CHECK(m1.witnesses == std::vector<Bits>{"0"});

  const DoobRecord& m2 = rep.records[1];
  CHECK(m2.mass == Rational(1, 4));
  CHECK(m2.bound == Rational(1, 2));
  CHECK(m2.pass);
  CHECK(m2.witnesses == std::vector<Bits>{"00"});
  REQUIRE(m2.chain.has_value());
  CHECK(m2.chain->mass_v == Rational(1, 4));
  CHECK(m2.chain->mass_u == Rational(1, 4));
  CHECK(m2.chain->mass_uprime == Rational(1, 4));
  CHECK(m2.chain->pass);

  const DoobRecord& m4 = rep.records[2];
  CHECK(m4.mass == Rational(0));
  CHECK(m4.witnesses.empty());
  REQUIRE(m4.chain.has_value());
  CHECK(m4.chain->mass_v == Rational(0));
  CHECK(m4.chain->pass);
}

TEST_CASE("Doob: identical measures never exceed threshold 1") {
  Measure u = Measure::uniform();
  DoobReport rep = doob_check(u, RatioProcess::likelihood(u, u), 5, {1});
  CHECK(rep.pass);
  CHECK(rep.records[0].mass == Rational(0));
  CHECK(rep.records[0].expectation == ExtendedRational::finite(Rational(1)));
}

TEST_CASE("Doob masses agree with the leaf-enumeration oracle") {
  Measure u = Measure::uniform();
  Measure b = Measure::bernoulli(Rational(1, 3));
  RatioProcess r = RatioProcess::likelihood(u, b);
  DoobReport rep = doob_check(u, r, 6, {1, 2, 4});
  CHECK(rep.pass);
  for (const DoobRecord& rec : rep.records) {
    CHECK(rec.mass == doob_mass_by_leaves(u, r, 6, rec.m));
  }
  // E(r_6) = total Q-mass = 1 since P is everywhere positive.
  CHECK(rep.records[0].expectation == ExtendedRational::finite(Rational(1)));
}

TEST_CASE("Doob preconditions") {
  Measure u = Measure::uniform();
  RatioProcess r = RatioProcess::likelihood(u, u);
  CHECK_THROWS_WITH_AS(doob_check(u, r, 2, {0}), doctest::Contains("threshold-not-positive"),
                       precondition_error);
  RatioProcess neg = RatioProcess::from_function(
      "neg", [](const Bits&) { return ExtendedRational::finite(Rational(-1)); });
  CHECK_THROWS_WITH_AS(doob_check(u, neg, 2, {1}), doctest::Contains("negative-value"),
                       precondition_error);
}

TEST_CASE("randomized tower, expectation and Doob properties") {
  Lcg rng(20260815);
  for (int trial = 0; trial < 10; ++trial) {
    int depth = static_cast<int>(rng.in(2, 4));
    Measure p = random_table(rng, depth);
    Measure q = random_table(rng, depth);
    RatioProcess r = RatioProcess::likelihood(p, q);

    SubmartingaleReport sub = check_submartingale(p, r, depth);
    CHECK(sub.pass);
    CHECK(sub.martingale);

    DoobReport doob = doob_check(p, r, depth, {1, 2, 3, 5});
    CHECK(doob.pass);
    for (const DoobRecord& rec : doob.records) {
      CHECK(rec.mass == doob_mass_by_leaves(p, r, depth, rec.m));
      CHECK(rec.expectation == ExtendedRational::finite(Rational(1)));
      CHECK(rec.mass <= rec.bound);
    }
  }
}

TEST_CASE("effective approximation: identical measures with zero log") {
  Measure u = Measure::uniform();
  ApproximationScheme scheme;
  scheme.c = 1;
  for (int n = 0; n <= 3; ++n) {
    for (const Bits& x : strings_of_length(n)) scheme.f[{x, n}] = Rational(0);
  }
  ApproxReport rep = check_effective_approximation(RatioProcess::likelihood(u, u), scheme, 3);
  CHECK(rep.pass);
  CHECK_FALSE(rep.strong);
  CHECK(rep.nodes_checked == 15);
  CHECK(rep.has_tightest);
  CHECK(rep.tightest_c == 0);
}

TEST_CASE("effective approximation: exact dyadic logs on the spine") {
  Measure u = Measure::uniform();
  RatioProcess r = RatioProcess::likelihood(u, zeros());
  ApproximationScheme scheme;
  scheme.c = 1;
  for (int n = 0; n <= 4; ++n) scheme.f[{Bits(static_cast<std::size_t>(n), '0'), n}] = Rational(n);
  ApproxReport rep = check_effective_approximation(r, scheme, 4);
  CHECK(rep.pass);
  CHECK(rep.has_tightest);
  CHECK(rep.tightest_c == 0);  // g(2^n) = n is already exact

  // Shifting f by one above the root breaks the lower bound at depth 1.
  ApproximationScheme shifted = scheme;
  shifted.c = 0;
  for (int n = 1; n <= 4; ++n)
    shifted.f[{Bits(static_cast<std::size_t>(n), '0'), n}] = Rational(n + 1);
  ApproxReport bad = check_effective_approximation(r, shifted, 4);
  CHECK_FALSE(bad.pass);
  REQUIRE(!bad.violations.empty());
  CHECK(bad.violations[0].x == "0");
  CHECK(bad.violations[0].side == "lower");
  CHECK(bad.violations[0].f_defined);
  CHECK(bad.violations[0].f_value == Rational(2));
  // The upper bound still holds with no slack at all.
  CHECK(bad.has_tightest);
  CHECK(bad.tightest_c == 0);
}

TEST_CASE("effective approximation: table-backed g is the strong variant") {
  Measure u = Measure::uniform();
  RatioProcess r = RatioProcess::likelihood(u, zeros());
  ApproximationScheme scheme;
  scheme.dyadic_log = false;
  scheme.c = 0;
  scheme.g_table = {{Rational(0), Rational(-5)},
                    {Rational(1), Rational(0)},
                    {Rational(2), Rational(1)},
                    {Rational(4), Rational(2)},
                    {Rational(8), Rational(3)}};
  for (int n = 0; n <= 3; ++n) {
    for (const Bits& x : strings_of_length(n)) {
      bool spine = x.find('1') == Bits::npos;
      scheme.f[{x, n}] = spine ? Rational(n) : Rational(-5);
    }
  }
  ApproxReport rep = check_effective_approximation(r, scheme, 3);
  CHECK(rep.pass);
  CHECK(rep.strong);
  CHECK(rep.has_tightest);
  CHECK(rep.tightest_c == 0);
}

TEST_CASE("effective approximation: non-monotone or partial g tables are rejected") {
  Measure u = Measure::uniform();
  Measure b = Measure::bernoulli(Rational(1, 3));
  RatioProcess r = RatioProcess::likelihood(u, b);

  ApproximationScheme bad;
  bad.dyadic_log = false;
  bad.g_table = {{Rational(2, 3), Rational(5)},
                 {Rational(1), Rational(0)},
                 {Rational(4, 3), Rational(6)}};
  CHECK_THROWS_WITH_AS(check_effective_approximation(r, bad, 1),
                       doctest::Contains("g-not-monotone"), precondition_error);

  ApproximationScheme partial;
  partial.dyadic_log = false;
  partial.g_table = {{Rational(1), Rational(0)}, {Rational(2, 3), Rational(-1)}};
  CHECK_THROWS_WITH_AS(check_effective_approximation(r, partial, 1),
                       doctest::Contains("g-domain"), precondition_error);
}

TEST_CASE("bounded-in-probability diagnostics") {
  Measure u = Measure::uniform();

  BoundedReport same = check_bounded_in_probability(u, u, ProbBoundCertificate::reciprocal_map(),
                                                    3, {1, 2, 4});
  CHECK(same.pass);
  for (const BoundedRecord& rec : same.records) {
    CHECK(rec.mass == Rational(0));
    CHECK(rec.margin == rec.bound);
  }

  // Exact masses against a direct enumeration at depth 6.
  Measure b = Measure::bernoulli(Rational(1, 3));
  BoundedReport rep =
      check_bounded_in_probability(u, b, ProbBoundCertificate::reciprocal_map(), 6, {2, 4, 8});
  for (const BoundedRecord& rec : rep.records) {
    Rational mass = 0;
    for (const Bits& x : strings_of_length(6)) {
      if (ext_greater(ratio_of(u(x), b(x)), Rational(rec.k))) mass += u(x);
    }
    CHECK(rec.mass == mass);
    CHECK(rec.pass == (mass < rec.bound));
  }

  // Point masses are not bounded in probability: the null leaves carry
  // infinite ratio and their P-mass exceeds h(2).
  BoundedReport fail = check_bounded_in_probability(u, zeros(),
                                                    ProbBoundCertificate::reciprocal_map(), 2, {2});
  CHECK_FALSE(fail.pass);
  CHECK(fail.records[0].mass == Rational(3, 4));
  CHECK(fail.records[0].bound == Rational(1, 2));
  CHECK(fail.records[0].margin == Rational(-1, 4));
}

TEST_CASE("bound certificates validate their tables") {
  ProbBoundCertificate t = ProbBoundCertificate::from_table(
      {{1, Rational(1)}, {2, Rational(1, 2)}, {4, Rational(1, 4)}});
  CHECK(t.bound(2) == Rational(1, 2));
  CHECK_THROWS_WITH_AS(t.bound(3), doctest::Contains("h-missing"), precondition_error);
  CHECK_THROWS_WITH_AS(
      ProbBoundCertificate::from_table({{1, Rational(1, 4)}, {2, Rational(1, 2)}}),
      doctest::Contains("h-not-decreasing"), precondition_error);
  CHECK_THROWS_WITH_AS(ProbBoundCertificate::reciprocal_map().bound(0),
                       doctest::Contains("threshold-not-positive"), precondition_error);
}

TEST_CASE("classification traces") {
  Measure u = Measure::uniform();
  Measure b = Measure::bernoulli(Rational(1, 3));

  ClassificationReport same = classify(u, u, "0110");
  CHECK(same.regime == "bounded");
  for (const auto& r : same.ratios) CHECK(r == ExtendedRational::finite(Rational(1)));

  ClassificationReport alt = classify(u, b, "010101");
  CHECK(alt.ratios.size() == 7);
  CHECK(alt.ratios[2] == ExtendedRational::finite(Rational(8, 9)));
  CHECK(alt.ratios[4] == ExtendedRational::finite(Rational(64, 81)));
  CHECK(alt.ratios[6] == ExtendedRational::finite(Rational(512, 729)));
  CHECK(alt.running_min.back() == ExtendedRational::finite(Rational(512, 729)));
  CHECK(alt.regime == "bounded");  // 512/729 > 1/2 still

  // Twelve alternating bits push the running minimum below 1/2.
  ClassificationReport deep = classify(u, b, "010101010101");
  CHECK(deep.running_min.back() == ExtendedRational::finite(Rational(262144, 531441)));
  CHECK(deep.regime == "decayed");

  ClassificationReport zero_tail = classify(u, b, "000000");
  CHECK(zero_tail.ratios.back() == ExtendedRational::finite(Rational(4096, 729)));  // (4/3)^6
  CHECK(zero_tail.running_min.back() == ExtendedRational::finite(Rational(1)));
  CHECK(zero_tail.regime == "bounded");

  // Running extremes are monotone and a null Q prefix decays immediately.
  ClassificationReport z = classify(u, zeros(), "01");
  CHECK(z.ratios == std::vector<ExtendedRational>{ExtendedRational::finite(Rational(1)),
                                                  ExtendedRational::finite(Rational(2)),
                                                  ExtendedRational::finite(Rational(0))});
  CHECK(z.regime == "decayed");
  for (std::size_t i = 1; i < z.running_min.size(); ++i) {
    CHECK_FALSE(z.running_min[i] > z.running_min[i - 1]);
    CHECK_FALSE(z.running_max[i] < z.running_max[i - 1]);
  }
  ClassificationReport inf_case = classify(zeros(), u, "1");
  CHECK(inf_case.ratios.back() == ExtendedRational::inf());
  CHECK(inf_case.regime == "bounded");
}

TEST_CASE("equivalence certificates") {
  Measure u = Measure::uniform();
  Measure b = Measure::bernoulli(Rational(1, 3));

  EquivalenceReport same = equivalence_certificate(u, u, Rational(1, 2), Rational(2), 3, false);
  CHECK(same.pass);
  CHECK(same.min_ratio == ExtendedRational::finite(Rational(1)));
  CHECK(same.max_ratio == ExtendedRational::finite(Rational(1)));
  CHECK(same.nodes_checked == 15);
  CHECK_FALSE(same.joint);

  // Tight non-strict bounds at depth 2: extremes 4/9 and 16/9 are attained.
  EquivalenceReport tight =
      equivalence_certificate(u, b, Rational(4, 9), Rational(16, 9), 2, false);
  CHECK(tight.pass);
  CHECK(tight.min_ratio == ExtendedRational::finite(Rational(4, 9)));
  CHECK(tight.min_x == "11");
  CHECK(tight.max_ratio == ExtendedRational::finite(Rational(16, 9)));
  CHECK(tight.max_x == "00");

  // The same bounds strictly: both extremes become violations.
  EquivalenceReport strict =
      equivalence_certificate(u, b, Rational(4, 9), Rational(16, 9), 2, true);
  CHECK_FALSE(strict.pass);
  CHECK(strict.violations.size() == 2);

  // At depth 4 the ratio escapes [1/2, 2] at the all-zeros node.
  EquivalenceReport fail = equivalence_certificate(u, b, Rational(1, 2), Rational(2), 4, false);
  CHECK_FALSE(fail.pass);
  CHECK(fail.max_ratio == ExtendedRational::finite(Rational(256, 81)));
  CHECK(fail.max_x == "0000");
  bool found = false;
  for (const auto& v : fail.violations) {
    if (v.x == "0000") {
      found = true;
      CHECK(v.side == "upper");
      CHECK(v.ratio == ExtendedRational::finite(Rational(256, 81)));
    }
  }
  CHECK(found);

  // Infinite ratios always violate the upper bound, never the lower one.
  EquivalenceReport inf_case =
      equivalence_certificate(zeros(), u, Rational(1, 2), Rational(2), 1, false);
  CHECK_FALSE(inf_case.pass);
  CHECK(inf_case.max_ratio == ExtendedRational::inf());

  CHECK_THROWS_WITH_AS(equivalence_certificate(u, b, Rational(0), Rational(1), 2, false),
                       doctest::Contains("invalid-bounds"), precondition_error);
  CHECK_THROWS_WITH_AS(equivalence_certificate(u, b, Rational(2), Rational(1), 2, false),
                       doctest::Contains("invalid-bounds"), precondition_error);
}

TEST_CASE("joint equivalence certificate sees the construction's extremes") {
  JointMeasure q = [] {
    ExampleParams params;
    params.epsilon = Rational(1, 2);
    params.table = MachineTable::from_triggers(1, {{1, "1"}});
    return JointMeasure::example(params);
  }();
  JointMeasure p = JointMeasure::product(Measure::uniform(), Measure::uniform());
  EquivalenceReport rep = equivalence_certificate(p, q, Rational(1, 3), Rational(3), 4, false);
  CHECK(rep.pass);
  CHECK(rep.joint);
  CHECK(rep.min_ratio == ExtendedRational::finite(Rational(1, 2)));
  CHECK(rep.max_ratio == ExtendedRational::finite(Rational(3, 2)));
  CHECK(rep.min_x == "0");
  CHECK(rep.min_y == "10");
  CHECK(rep.max_x == "1");
  CHECK(rep.max_y == "10");
  // Tightened to the observed extremes it still passes non-strictly.
  CHECK(equivalence_certificate(p, q, Rational(1, 2), Rational(3, 2), 4, false).pass);
}
