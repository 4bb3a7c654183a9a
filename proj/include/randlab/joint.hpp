#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "randlab/example_core.hpp"
#include "randlab/measure.hpp"

namespace randlab {

enum class JointKind { product, table, example };

const char* joint_kind_name(JointKind k);

// A probability measure on the product of two binary trees, evaluated on
// rectangles of cylinders. Table-backed joints extend below their
// tabulated depths by uniform refinement per coordinate.
class JointMeasure {
 public:
  static JointMeasure product(Measure x, Measure y);

  // Rectangle leaf values at depths (dx, dy); missing keys are zero.
  static JointMeasure table(int dx, int dy,
                            const std::map<std::pair<Bits, Bits>, Rational>& leaves);

  // The halting-encoding construction; validates epsilon and the table.
  static JointMeasure example(ExampleParams params);

  Rational operator()(const Bits& x, const Bits& y) const;

  Measure marginal_x() const;
  Measure marginal_y() const;

  // P(x | y) = P(x,y) / P_Y(y); zero-condition error on a null condition.
  Rational conditional(const Bits& x, const Bits& y) const;

  // [P(x | y_prefix)] over all prefixes of y_stream, the root included.
  std::vector<Rational> conditional_trace(const Bits& x, const Bits& y_stream) const;

  // Fills out[heap_index(x)] = P(x, y) for every |x| <= xdepth.
  void column(const Bits& y, int xdepth, std::vector<Rational>* out) const;

  JointKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const ExampleParams* example_params() const;
  std::pair<int, int> table_depths() const { return {dx_, dy_}; }

 private:
  JointMeasure() = default;

  JointKind kind_ = JointKind::product;
  std::string label_;
  // product
  std::shared_ptr<const Measure> mx_, my_;
  // table
  int dx_ = 0, dy_ = 0;
  std::shared_ptr<const std::map<std::pair<Bits, Bits>, Rational>> nodes_;
  // example
  std::shared_ptr<const ExampleParams> params_;
};

// Both one-sided additivity identities at every node pair with
// |x|, |y| <= depth, plus non-negativity and unit root mass; violations are
// listed in canonical order (|y|, y, |x|, x).
ConsistencyReport check_consistency(const JointMeasure& j, int depth);

// Measure of a union of rectangles, via a verified non-overlapping cover.
Rational rect_set_measure(const JointMeasure& j, const std::vector<Rect>& rects);

}  // namespace randlab
