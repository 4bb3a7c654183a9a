#include "randlab/joint.hpp"

#include <algorithm>

#include "randlab/kernels.hpp"

namespace randlab {

const char* joint_kind_name(JointKind k) {
  switch (k) {
    case JointKind::product: return "product";
    case JointKind::table: return "table";
    case JointKind::example: return "example";
  }
  return "?";
}

JointMeasure JointMeasure::product(Measure x, Measure y) {
  JointMeasure j;
  j.kind_ = JointKind::product;
  j.label_ = "product(" + x.label() + "," + y.label() + ")";
  j.mx_ = std::make_shared<const Measure>(std::move(x));
  j.my_ = std::make_shared<const Measure>(std::move(y));
  return j;
}

JointMeasure JointMeasure::table(int dx, int dy,
                                 const std::map<std::pair<Bits, Bits>, Rational>& leaves) {
  if (dx < 0 || dy < 0) {
    throw precondition_error("parameter-out-of-range", "table depths must be >= 0");
  }
  Rational total = 0;
  for (const auto& [key, value] : leaves) {
    const auto& [xb, yb] = key;
    if (!valid_bits(xb) || static_cast<int>(xb.size()) != dx || !valid_bits(yb) ||
        static_cast<int>(yb.size()) != dy) {
      throw parse_error("joint table leaf (" + xb + "," + yb + ") does not match depths (" +
                        std::to_string(dx) + "," + std::to_string(dy) + ")");
    }
    if (value < 0) {
      throw precondition_error("negative-value", "joint table leaf (" + xb + "," + yb +
                                                     ") has negative mass " + rational_str(value));
    }
    total += value;
  }
  if (total != 1) {
    throw precondition_error("mass-not-one",
                             "joint table leaves sum to " + rational_str(total) + ", expected 1");
  }
  // Materialize every (x, y) node with |x| <= dx, |y| <= dy: first sum the
  // x-axis upward at full y-depth, then the y-axis upward everywhere.
  auto nodes = std::map<std::pair<Bits, Bits>, Rational>{};
  for (const Bits& xb : strings_of_length(dx)) {
    for (const Bits& yb : strings_of_length(dy)) {
      auto it = leaves.find({xb, yb});
      nodes[{xb, yb}] = (it == leaves.end()) ? Rational(0) : it->second;
    }
  }
  for (int lx = dx - 1; lx >= 0; --lx) {
    for (const Bits& xb : strings_of_length(lx)) {
      for (const Bits& yb : strings_of_length(dy)) {
        nodes[{xb, yb}] = nodes[{xb + '0', yb}] + nodes[{xb + '1', yb}];
      }
    }
  }
  for (int ly = dy - 1; ly >= 0; --ly) {
    for (int lx = 0; lx <= dx; ++lx) {
      for (const Bits& xb : strings_of_length(lx)) {
        for (const Bits& yb : strings_of_length(ly)) {
          nodes[{xb, yb}] = nodes[{xb, yb + '0'}] + nodes[{xb, yb + '1'}];
        }
      }
    }
  }
  JointMeasure j;
  j.kind_ = JointKind::table;
  j.label_ = "table(dx=" + std::to_string(dx) + ",dy=" + std::to_string(dy) + ")";
  j.dx_ = dx;
  j.dy_ = dy;
  j.nodes_ = std::make_shared<const std::map<std::pair<Bits, Bits>, Rational>>(std::move(nodes));
  return j;
}

JointMeasure JointMeasure::example(ExampleParams params) {
  validate_example_params(params);
  JointMeasure j;
  j.kind_ = JointKind::example;
  j.label_ = "example(eps=" + rational_str(params.epsilon) +
             ",machines=" + std::to_string(params.table.machine_count()) + ")";
  j.params_ = std::make_shared<const ExampleParams>(std::move(params));
  return j;
}

Rational JointMeasure::operator()(const Bits& x, const Bits& y) const {
  switch (kind_) {
    case JointKind::product:
      return (*mx_)(x) * (*my_)(y);
    case JointKind::table: {
      Bits xh = x.substr(0, std::min<std::size_t>(x.size(), static_cast<std::size_t>(dx_)));
      Bits yh = y.substr(0, std::min<std::size_t>(y.size(), static_cast<std::size_t>(dy_)));
      auto it = nodes_->find({xh, yh});
      Rational base = (it == nodes_->end()) ? Rational(0) : it->second;
      long excess = std::max<long>(0, static_cast<long>(x.size()) - dx_) +
                    std::max<long>(0, static_cast<long>(y.size()) - dy_);
      return excess == 0 ? base : base * pow2(-excess);
    }
    case JointKind::example: {
      SpineState st = state_at(*params_, y);
      return conditional_given_state(*params_, st, x) * pow2(-static_cast<long>(y.size()));
    }
  }
  throw randlab_error("internal: unknown joint kind");
}

Measure JointMeasure::marginal_x() const {
  JointMeasure self = *this;
  return Measure::derived("marginal-x of " + label_,
                          [self](const Bits& x) { return self(x, ""); });
}

Measure JointMeasure::marginal_y() const {
  JointMeasure self = *this;
  return Measure::derived("marginal-y of " + label_,
                          [self](const Bits& y) { return self("", y); });
}

Rational JointMeasure::conditional(const Bits& x, const Bits& y) const {
  Rational py = (*this)("", y);
  if (py == 0) {
    throw precondition_error("zero-condition",
                             "conditioning on the null cylinder '" + y + "'");
  }
  return (*this)(x, y) / py;
}

std::vector<Rational> JointMeasure::conditional_trace(const Bits& x, const Bits& y_stream) const {
  std::vector<Rational> out;
  out.reserve(y_stream.size() + 1);
  for (std::size_t k = 0; k <= y_stream.size(); ++k) {
    out.push_back(conditional(x, y_stream.substr(0, k)));
  }
  return out;
}

namespace {

// Uniform halving over the whole subtree below idx with the given root value.
void fill_uniform(std::vector<Rational>* out, std::size_t idx, const Rational& value,
                  int levels_left) {
  (*out)[idx] = value;
  if (levels_left == 0) return;
  Rational half = value / 2;
  fill_uniform(out, 2 * idx + 1, half, levels_left - 1);
  fill_uniform(out, 2 * idx + 2, half, levels_left - 1);
}

}  // namespace

void JointMeasure::column(const Bits& y, int xdepth, std::vector<Rational>* out) const {
  out->assign(heap_size(xdepth), Rational(0));
  switch (kind_) {
    case JointKind::product: {
      Rational wy = (*my_)(y);
      for (int len = 0; len <= xdepth; ++len) {
        for (const Bits& x : strings_of_length(len)) {
          (*out)[heap_index(x)] = (*mx_)(x)*wy;
        }
      }
      return;
    }
    case JointKind::table: {
      for (int len = 0; len <= xdepth; ++len) {
        for (const Bits& x : strings_of_length(len)) {
          (*out)[heap_index(x)] = (*this)(x, y);
        }
      }
      return;
    }
    case JointKind::example: {
      const ExampleParams& p = *params_;
      SpineState st = state_at(p, y);
      Rational wy = pow2(-static_cast<long>(y.size()));
      int machines = p.table.machine_count();
      // Walk the all-ones spine; each cell and the residual refine uniformly.
      Rational spine = wy;  // mass of the spine node 1^k, starting at the root
      std::size_t idx = 0;  // heap index of 1^k
      for (int k = 0;; ++k) {
        if (k >= machines || k >= xdepth) {
          // Residual: everything below 1^k is uniform.
          fill_uniform(out, idx, spine, xdepth - k);
          return;
        }
        (*out)[idx] = spine;
        Rational pi = st.beta[static_cast<std::size_t>(k)] / 2;  // cell share
        fill_uniform(out, 2 * idx + 1, spine * pi, xdepth - k - 1);
        spine *= Rational(1) - pi;
        idx = 2 * idx + 2;
      }
    }
  }
}

const ExampleParams* JointMeasure::example_params() const {
  return kind_ == JointKind::example ? params_.get() : nullptr;
}

ConsistencyReport check_consistency(const JointMeasure& j, int depth) {
  return sweep_joint_consistency(j, depth, SweepMode::serial);
}

Rational rect_set_measure(const JointMeasure& j, const std::vector<Rect>& rects) {
  Rational total = 0;
  for (const Rect& r : nonoverlapping_cover(rects)) total += j(r.x, r.y);
  return total;
}

}  // namespace randlab
