#include "randlab/measure.hpp"

#include <algorithm>

namespace randlab {

const char* measure_kind_name(MeasureKind k) {
  switch (k) {
    case MeasureKind::uniform: return "uniform";
    case MeasureKind::bernoulli: return "bernoulli";
    case MeasureKind::table: return "table";
    case MeasureKind::derived: return "derived";
  }
  return "?";
}

Measure Measure::uniform() {
  Measure m;
  m.kind_ = MeasureKind::uniform;
  m.label_ = "uniform";
  return m;
}

Measure Measure::bernoulli(const Rational& p) {
  if (p < 0 || p > 1) {
    throw precondition_error("parameter-out-of-range",
                             "bernoulli parameter must lie in [0,1], got " + rational_str(p));
  }
  Measure m;
  m.kind_ = MeasureKind::bernoulli;
  m.label_ = "bernoulli(" + rational_str(p) + ")";
  m.p_ = p;
  return m;
}

Measure Measure::table(int depth, const std::map<Bits, Rational>& leaves) {
  if (depth < 0) throw precondition_error("parameter-out-of-range", "table depth must be >= 0");
  std::map<Bits, Rational> nodes;
  Rational total = 0;
  for (const auto& [bits, value] : leaves) {
    if (!valid_bits(bits) || static_cast<int>(bits.size()) != depth) {
      throw parse_error("table leaf key '" + bits + "' is not a length-" +
                        std::to_string(depth) + " bitstring");
    }
    if (value < 0) {
      throw precondition_error("negative-value",
                               "table leaf '" + bits + "' has negative mass " + rational_str(value));
    }
    total += value;
  }
  if (total != 1) {
    throw precondition_error("mass-not-one",
                             "table leaves sum to " + rational_str(total) + ", expected 1");
  }
  // Materialize every node by upward summation; absent leaves carry zero.
  for (const Bits& s : strings_of_length(depth)) {
    auto it = leaves.find(s);
    nodes[s] = (it == leaves.end()) ? Rational(0) : it->second;
  }
  for (int len = depth - 1; len >= 0; --len) {
    for (const Bits& s : strings_of_length(len)) {
      nodes[s] = nodes[s + '0'] + nodes[s + '1'];
    }
  }
  return table_from_nodes(depth, std::move(nodes));
}

Measure Measure::table_from_nodes(int depth, std::map<Bits, Rational> nodes) {
  Measure m;
  m.kind_ = MeasureKind::table;
  m.label_ = "table(depth=" + std::to_string(depth) + ")";
  m.table_depth_ = depth;
  m.nodes_ = std::make_shared<const std::map<Bits, Rational>>(std::move(nodes));
  return m;
}

Measure Measure::derived(std::string label, std::function<Rational(const Bits&)> eval,
                         std::optional<int> depth_cap) {
  Measure m;
  m.kind_ = MeasureKind::derived;
  m.label_ = std::move(label);
  m.eval_ = std::move(eval);
  m.depth_cap_ = depth_cap;
  return m;
}

Rational Measure::operator()(const Bits& x) const {
  if (depth_cap_ && static_cast<int>(x.size()) > *depth_cap_) {
    throw precondition_error("depth-exceeded",
                             label_ + " is capped at depth " + std::to_string(*depth_cap_) +
                                 ", asked for length " + std::to_string(x.size()));
  }
  switch (kind_) {
    case MeasureKind::uniform:
      return pow2(-static_cast<long>(x.size()));
    case MeasureKind::bernoulli: {
      Rational v = 1;
      for (char c : x) v *= (c == '1') ? p_ : Rational(1) - p_;
      return v;
    }
    case MeasureKind::table: {
      if (static_cast<int>(x.size()) <= table_depth_) {
        auto it = nodes_->find(x);
        return it == nodes_->end() ? Rational(0) : it->second;
      }
      Bits head = x.substr(0, static_cast<std::size_t>(table_depth_));
      auto it = nodes_->find(head);
      Rational base = it == nodes_->end() ? Rational(0) : it->second;
      return base * pow2(static_cast<long>(table_depth_) - static_cast<long>(x.size()));
    }
    case MeasureKind::derived:
      return eval_(x);
  }
  throw randlab_error("internal: unknown measure kind");
}

const Rational& Measure::bernoulli_p() const {
  if (kind_ != MeasureKind::bernoulli) {
    throw randlab_error("internal: bernoulli_p on " + std::string(measure_kind_name(kind_)));
  }
  return p_;
}

Measure Measure::with_perturbed_node(const Bits& node, const Rational& delta) const {
  if (kind_ != MeasureKind::table) {
    throw precondition_error("kind-mismatch", "perturbation diagnostic needs a table measure");
  }
  if (static_cast<int>(node.size()) > table_depth_) {
    throw precondition_error("depth-exceeded", "perturbed node is below the tabulated depth");
  }
  std::map<Bits, Rational> nodes = *nodes_;
  nodes[node] += delta;
  return table_from_nodes(table_depth_, std::move(nodes));
}

ConsistencyReport check_consistency(const Measure& m, int depth) {
  ConsistencyReport rep;
  rep.depth = depth;
  Rational root = m("");
  if (root != 1) {
    rep.violations.push_back({"", "", "root-mass", root, Rational(1)});
  }
  for (int len = 0; len <= depth; ++len) {
    for (const Bits& s : strings_of_length(len)) {
      Rational v = m(s);
      ++rep.nodes_checked;
      if (v < 0) {
        rep.violations.push_back({s, "", "negative", v, Rational(0)});
      }
      if (len < depth) {
        Rational sum = m(s + '0') + m(s + '1');
        if (v != sum) {
          rep.violations.push_back({s, "", "additivity-x", v, sum});
        }
      }
    }
  }
  rep.pass = rep.violations.empty();
  return rep;
}

Rational prefix_set_measure(const Measure& m, const std::vector<Bits>& elems) {
  Rational total = 0;
  for (const Bits& s : reduce_prefix_set(elems)) total += m(s);
  return total;
}

}  // namespace randlab
