#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "randlab/bitstring.hpp"
#include "randlab/rational.hpp"

namespace randlab {

enum class MeasureKind { uniform, bernoulli, table, derived };

const char* measure_kind_name(MeasureKind k);

// A probability measure on the binary tree, evaluated on cylinder prefixes.
// All kinds are totally defined: table-backed measures extend below their
// tabulated depth by uniform refinement (each child takes half the parent
// mass). An optional depth cap makes truncation visible as an error instead
// of silent approximation.
class Measure {
 public:
  static Measure uniform();

  // p = probability of bit '1'; the closed interval [0,1] is allowed so
  // point masses (p = 0 or 1) are plain measures.
  static Measure bernoulli(const Rational& p);

  // Leaf values at the given depth; missing keys are zero. Validates keys,
  // non-negativity and total mass 1, then materializes every node value of
  // length <= depth by upward summation.
  static Measure table(int depth, const std::map<Bits, Rational>& leaves);

  // Diagnostic back door used to demonstrate that the consistency checker
  // catches broken inputs: trusts the node map as-is (no validation).
  static Measure table_from_nodes(int depth, std::map<Bits, Rational> nodes);

  static Measure derived(std::string label, std::function<Rational(const Bits&)> eval,
                         std::optional<int> depth_cap = std::nullopt);

  // P(cylinder of x). Throws depth-exceeded when a cap is set and violated.
  Rational operator()(const Bits& x) const;

  MeasureKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  std::optional<int> depth_cap() const { return depth_cap_; }
  // Tabulated depth for table-backed measures.
  int table_depth() const { return table_depth_; }
  const Rational& bernoulli_p() const;

  // Copy with eval(node) shifted by delta (table-backed measures only);
  // the diagnostic used to show a single additivity violation at the
  // perturbed node's parent.
  Measure with_perturbed_node(const Bits& node, const Rational& delta) const;

 private:
  Measure() = default;

  MeasureKind kind_ = MeasureKind::uniform;
  std::string label_;
  std::optional<int> depth_cap_;
  Rational p_;  // bernoulli
  int table_depth_ = 0;
  std::shared_ptr<const std::map<Bits, Rational>> nodes_;  // table
  std::function<Rational(const Bits&)> eval_;              // derived
};

struct ConsistencyViolation {
  Bits x;
  Bits y;  // empty and unused for measures on one tree
  std::string what;  // "additivity-x" | "additivity-y" | "negative" | "root-mass"
  Rational lhs;
  Rational rhs;
};

struct ConsistencyReport {
  bool pass = true;
  int depth = 0;
  std::size_t nodes_checked = 0;
  std::vector<ConsistencyViolation> violations;
};

// Verifies eval(s) = eval(s0) + eval(s1) for every |s| < depth, eval(root)=1,
// and eval(s) >= 0 for every |s| <= depth; lists every failing node.
ConsistencyReport check_consistency(const Measure& m, int depth);

// Measure of the union of cylinders, computed after prefix-minimal
// reduction (remaining elements are pairwise disjoint).
Rational prefix_set_measure(const Measure& m, const std::vector<Bits>& elems);

}  // namespace randlab
