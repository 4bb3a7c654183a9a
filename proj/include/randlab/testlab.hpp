#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "randlab/joint.hpp"
#include "randlab/measure.hpp"

namespace randlab {

// A finite indexed family of prefix sets with a decreasing level bound
// (default 2^-n). Levels are 1-based in every report.
struct TestFamily {
  std::vector<std::vector<Bits>> levels;
  bool default_bound = true;          // bound(n) = 2^-n
  std::vector<Rational> bounds;       // explicit per-level bounds otherwise

  Rational bound(int n) const;  // n is 1-based
};

struct BlindLevelRecord {
  int n = 0;
  Rational mass;   // measure of the level's open set
  Rational bound;  // required strict upper bound
  bool mass_ok = false;
  bool nested = true;  // open-set containment in the previous level
};

struct BlindTestReport {
  bool pass = true;
  std::vector<BlindLevelRecord> levels;
};

// Checks the blind-test conditions: each level's open set nested in the
// previous one and its exact mass strictly below bound(n).
BlindTestReport verify_blind_test(const Measure& m, const TestFamily& fam);

struct SolovayReport {
  bool pass = true;  // the declared majorant is respected on the range
  int horizon = 0;
  std::vector<Rational> masses;        // per level, 1..horizon
  std::vector<Rational> partial_sums;  // running sums of the masses
  Rational total;
  std::vector<int> majorant_violations;  // levels with mass > bound(n)
};

// Exact partial sums of the level masses up to the horizon, with a flag
// for whether the family's declared majorant bounds every level.
SolovayReport verify_solovay(const Measure& m, const TestFamily& fam, int horizon);

// --- Lemma-A decomposition machinery ---------------------------------------

// One atom of the partition generated by the first n oracle cylinders,
// expanded into equal-length pieces at the level resolution L_n.
struct LemmaAAtom {
  std::vector<Bits> pieces;   // length-L_n strings with a common signature
  std::vector<Bits> section;  // x-parts of pairs whose oracle part covers the atom
  Rational weight;            // marginal mass of the atom
  Rational section_mass;      // sum of conditional masses of the section
  bool below_eps = false;
  bool null_atom = false;  // atom is marginal-null (allowed only with empty section)
};

struct LemmaALevel {
  int n = 0;
  int resolution = 0;  // L_n = max length among the first n oracle parts
  std::vector<LemmaAAtom> atoms;
  std::vector<Rect> u;  // the level's pair set: (x, piece) per qualifying atom
};

struct LemmaAFamily {
  std::vector<Rect> w;  // enumeration order
  Rational epsilon;
  std::vector<LemmaALevel> levels;  // one per 1 <= n <= |w|
};

// Builds the staged family: for each n, partition the oracle space by the
// first n oracle cylinders, collect each atom's section, and keep the
// (x, piece) pairs of atoms whose conditional section mass falls strictly
// below epsilon. Adopted variable reading: the pair's x ranges over the
// section while the mass sum ranges over the whole section; this reading
// is flagged in serialized reports.
LemmaAFamily build_lemma_a_family(const std::vector<Rect>& w, const Rational& epsilon,
                                  const JointMeasure& joint);

struct LemmaACheck {
  std::string name;
  bool pass = true;
};

struct LemmaAReport {
  bool pass = true;
  int depth = 0;
  Bits y_prefix;
  std::vector<LemmaACheck> checks;
  std::vector<Bits> liminf_section;      // canonical open-set form
  std::vector<Bits> recomputed_section;  // the stage the section must equal
};

// Exhaustive leaf-pair verification of the decomposition: differences
// pairwise disjoint, differences disjoint from the stabilized
// intersection (the final level), union decomposition, and the final
// level's section at y_prefix equal to the recomputed stage.
LemmaAReport verify_lemma_a(const LemmaAFamily& fam, const Bits& y_prefix, int depth);

struct FEpsilonReport {
  long index = 1;  // least level with tail mass below the query
  Rational tail_mass;
  std::vector<Rational> candidate_tails;  // tail mass per candidate level
};

// Least N with exact mass of the union of difference sets from N on
// strictly below eps_query. Always exists for positive queries on finite
// families (the final tail is empty); non-positive queries are rejected.
FEpsilonReport compute_f_epsilon(const LemmaAFamily& fam, const JointMeasure& joint,
                                 const Rational& eps_query);

struct RelStage {
  Bits y;
  std::vector<Bits> items;
};

// Oracle-staged enumeration: an item becomes visible once the oracle
// prefix extends its stage's y. Items never disappear at later stages.
struct RelativizedTest {
  std::vector<RelStage> stages;
};

struct ExpandReport {
  bool pass = true;
  Bits y_prefix;
  Rational eps;
  Rational conditional_mass;  // mass of the enumerated set given y_prefix
  long f_eps = 1;
  bool f_eps_given = false;
  Rational tail_mass;  // joint mass of the union of levels from f_eps on
  Rational bound;      // 2 * eps
  std::vector<Rect> w;  // non-overlapping cover the family was built from
  LemmaAFamily family;
};

// Expands a relativized test into a global family: collects the items
// enumerated at y_prefix (their conditional mass must already be below
// eps), covers them as disjoint rectangles, builds the staged family, and
// verifies that the union of levels from f_eps on has joint mass below
// 2*eps. f_eps may be supplied or computed from the family with query eps.
ExpandReport expand_via_lemma_a(const RelativizedTest& test, const JointMeasure& joint,
                                const Bits& y_prefix, const Rational& eps,
                                std::optional<long> f_eps = std::nullopt);

// --- main-theorem probes -----------------------------------------------------

// A partial rational-valued map on bitstrings: explicit entries win over
// the optional constant fallback; neither present means "undefined".
struct PartialMap {
  std::optional<Rational> constant;
  std::map<Bits, Rational> entries;

  std::optional<Rational> at(const Bits& x) const;
};

struct ProbeReport {
  bool pass = true;
  Bits x, y;
  std::vector<ExtendedRational> ratios;  // conditional ratio per prefix of x
  bool positivity_pass = true;           // every conditional along x positive
  std::vector<Bits> positivity_failures;
  bool sandwich_pass = true;  // ratio < f wherever f is defined
  std::vector<Bits> sandwich_failures;
  std::optional<Rational> sup_f;
  ExtendedRational running_inf;
  bool inf_positive = false;
  std::optional<Rational> c1;  // half the running infimum
  std::optional<Rational> c2;  // the supremum of f on its domain
};

// Finite-depth probe of the expansion preconditions along one (x, y)
// pair: conditional positivity, the f-sandwich with its supremum, and the
// running infimum of the conditional ratios, emitting candidate constants
// when everything holds.
ProbeReport thmain_probe(const JointMeasure& P, const JointMeasure& Q, const Bits& x,
                         const Bits& y, const PartialMap& f_y);

struct ExpansionInstance {
  JointMeasure P, Q;
  Bits y;
  std::vector<Bits> u;  // prefix set over the x-axis
  PartialMap f_y;
  Rational c1, c2;
  long level = 1;
};

struct ChainCheck {
  std::string name;
  Rational lhs, rhs;
  std::string relation;  // "<" | "<="
  bool pass = true;
  bool vacuous = false;  // left set empty; inequality holds by convention
};

struct ThmainExpandReport {
  bool pass = true;
  int depth = 0;
  long level = 1;
  Rational p_u_given_y;  // conditional mass of the given prefix set
  Rational pre_bound;    // 2^-level / c2
  std::vector<Bits> v, vprime;  // reduced prefix sets
  bool v_subset_vprime = false;
  Rational q_v_given_y, q_vprime_given_y;
  std::vector<ChainCheck> checks;
  std::vector<Rect> w, wprime;
  Rational q_w;       // joint Q-mass of the rectangle cover
  Rational w_bound;   // (11/2) * 2^-level
  Rational p_wprime, q_wprime;
};

// Runs the expansion chain at finite depth: builds the f-filtered and
// ratio-filtered extension sets, checks the conditional mass chain against
// c2 and 2^-level, lifts the result to a global rectangle cover (per-piece
// brute-force minimization of the Q-mass over oracle-prefix rectangles),
// and checks the c1 comparison on the filtered cover. Every inequality is
// reported with exact values; empty-set cases pass with a vacuous flag.
ThmainExpandReport thmain_expand(const ExpansionInstance& inst, int depth);

// Canonical open-set form of a set of equal-length leaves: sibling pairs
// merged upward until no full pair remains, output in shortlex order.
std::vector<Bits> canonical_open_set(std::vector<Bits> leaves);

}  // namespace randlab
