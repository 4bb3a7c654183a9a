#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "randlab/joint.hpp"
#include "randlab/measure.hpp"

namespace randlab {

// A process r_n adapted to the depth filtration: r_n is constant on every
// depth-n cylinder, so it is fully described by one extended-rational value
// per node. The canonical instance is the likelihood ratio Q/P under the
// a/0 convention.
class RatioProcess {
 public:
  static RatioProcess likelihood(Measure P, Measure Q);
  static RatioProcess from_table(std::map<Bits, ExtendedRational> values);
  static RatioProcess from_function(std::string label,
                                    std::function<ExtendedRational(const Bits&)> fn);

  ExtendedRational operator()(const Bits& x) const { return fn_(x); }
  const std::string& label() const { return label_; }

 private:
  std::string label_;
  std::function<ExtendedRational(const Bits&)> fn_;
};

// Q(x)/P(x) with the a/0 convention.
ExtendedRational likelihood_ratio(const Measure& P, const Measure& Q, const Bits& x);

struct SubmartingaleViolation {
  Bits x;
  ExtendedRational lhs;  // P(x0) r(x0) + P(x1) r(x1)
  ExtendedRational rhs;  // P(x) r(x)
};

struct SubmartingaleReport {
  bool pass = true;
  bool martingale = true;  // equality held at every checked node
  int depth = 0;
  std::size_t nodes_checked = 0;
  std::size_t null_nodes_skipped = 0;
  std::vector<SubmartingaleViolation> violations;
};

// Verifies P(x0) r(x0) + P(x1) r(x1) >= P(x) r(x) at every node with
// |x| < depth and P(x) > 0; null nodes are skipped (the inequality is only
// required P-almost surely). 0 * inf counts as 0 in both sides.
SubmartingaleReport check_submartingale(const Measure& P, const RatioProcess& proc, int depth);

// The approximation scheme pairs a strictly increasing map g with an
// integer-valued approximation f(x, n) and a slack constant c. g is either
// the exact dyadic logarithm (compared through integer powers, never
// evaluated numerically) or an explicit exact table on the values it will
// meet. Arguments outside the f table mean "minus infinity": the lower
// sandwich bound holds vacuously there and the upper one only if g is also
// at minus infinity (ratio zero).
struct ApproximationScheme {
  bool dyadic_log = true;
  std::vector<std::pair<Rational, Rational>> g_table;  // used iff !dyadic_log
  std::map<std::pair<Bits, int>, Rational> f;          // (x, n=|x|) -> value
  long c = 0;
};

struct DoobChain {
  Rational mass_v;       // P over the f-threshold set
  Rational mass_u;       // P over the per-prefix g-threshold set
  Rational mass_uprime;  // P over the sup-then-g set
  bool v_le_u = false;
  bool u_eq_uprime = false;
  bool uprime_eq_m = false;
  bool pass = false;
};

struct DoobRecord {
  long m = 1;
  Rational mass;                 // P of the union over {sup_{1<=i<=n} r_i > m}
  ExtendedRational expectation;  // E(r_n)
  bool bound_infinite = false;
  Rational bound;  // expectation / m when finite
  bool pass = false;
  std::vector<Bits> witnesses;  // minimal prefixes covering the event, shortlex
  std::optional<DoobChain> chain;
};

struct DoobReport {
  bool pass = true;
  int depth = 0;
  std::vector<DoobRecord> records;
};

// Doob's submartingale inequality at finite depth: for each threshold m,
// P of the event {m < sup_{1<=i<=n} r_i} is at most E(r_n)/m, both sides
// exact. When a scheme is supplied, also crosses the event through the
// transported sets (f-threshold, per-prefix g-threshold, sup-then-g) and
// checks the mass chain <= , =, = against the raw-ratio event.
DoobReport doob_check(const Measure& P, const RatioProcess& proc, int depth,
                      const std::vector<long>& thresholds,
                      const ApproximationScheme* scheme = nullptr);

struct ApproxViolation {
  Bits x;
  std::string side;  // "lower" | "upper"
  bool f_defined = false;
  Rational f_value;
};

struct ApproxReport {
  bool pass = true;
  int depth = 0;
  long c = 0;
  bool strong = false;  // g supplied as an exact table
  std::size_t nodes_checked = 0;
  bool has_tightest = false;
  long tightest_c = 0;  // smallest natural c making every upper bound hold
  std::vector<ApproxViolation> violations;
};

// Verifies f(x, n) <= g(r_n(x)) <= f(x, n) + c for every |x| = n <= depth,
// and reports the tightest valid c. Table-backed g is checked for strict
// monotonicity across every evaluated point (g-not-monotone otherwise).
ApproxReport check_effective_approximation(const RatioProcess& proc,
                                           const ApproximationScheme& scheme, int depth);

// h is a decreasing bound certificate: either the reciprocal map k -> 1/k
// or an explicit table (validated non-increasing).
struct ProbBoundCertificate {
  bool reciprocal = true;
  std::vector<std::pair<long, Rational>> table;  // used iff !reciprocal

  static ProbBoundCertificate reciprocal_map();
  static ProbBoundCertificate from_table(std::vector<std::pair<long, Rational>> entries);
  Rational bound(long k) const;
};

struct BoundedRecord {
  long k = 0;
  Rational mass;   // P of {|x| = depth, P(x)/Q(x) > k}
  Rational bound;  // h(k)
  bool pass = false;
  Rational margin;  // bound - mass
};

struct BoundedReport {
  bool pass = true;
  int depth = 0;
  std::vector<BoundedRecord> records;
};

// Finite-depth bounded-in-probability diagnostic: for each k the P-mass of
// the depth-level set where P(x)/Q(x) > k must fall strictly below h(k).
BoundedReport check_bounded_in_probability(const Measure& P, const Measure& Q,
                                           const ProbBoundCertificate& cert, int depth,
                                           const std::vector<long>& ks);

struct ClassificationReport {
  Bits x;
  Rational threshold;  // report parameter for the regime flag
  std::vector<ExtendedRational> ratios;       // Q/P along prefixes incl. the root
  std::vector<ExtendedRational> running_min;  // non-increasing
  std::vector<ExtendedRational> running_max;  // non-decreasing
  std::string regime;  // "bounded" (min above threshold) | "decayed"
};

// Two-measure diagnostic along one branch: the running likelihood ratios
// with their running extremes, plus a finite-depth regime flag.
ClassificationReport classify(const Measure& P, const Measure& Q, const Bits& x,
                              const Rational& threshold = Rational(1, 2));

struct EquivViolation {
  Bits x, y;  // y empty for the single-measure overload
  ExtendedRational ratio;
  std::string side;  // "lower" | "upper"
};

struct EquivalenceReport {
  bool pass = true;
  int depth = 0;
  bool strict = false;
  bool joint = false;
  Rational c_lo, c_hi;
  ExtendedRational min_ratio, max_ratio;
  Bits min_x, min_y, max_x, max_y;
  std::size_t nodes_checked = 0;
  std::vector<EquivViolation> violations;
};

// Certifies c <= Q(x)/P(x) <= c_hi for every |x| <= depth (strict
// comparisons when the flag is set). Requires 0 < c <= c_hi.
EquivalenceReport equivalence_certificate(const Measure& P, const Measure& Q, const Rational& c,
                                          const Rational& c_hi, int depth, bool strict);

// Same certificate over all pairs |x| <= depth, |y| <= depth of a joint.
EquivalenceReport equivalence_certificate(const JointMeasure& P, const JointMeasure& Q,
                                          const Rational& c, const Rational& c_hi, int depth,
                                          bool strict);

}  // namespace randlab
