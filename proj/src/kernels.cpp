#include "randlab/kernels.hpp"

#include <algorithm>

#include "randlab/example.hpp"
#include "randlab/joint.hpp"

#ifdef RANDLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace randlab {

namespace {

bool violation_order_less(const ConsistencyViolation& a, const ConsistencyViolation& b) {
  if (a.y.size() != b.y.size()) return a.y.size() < b.y.size();
  if (a.y != b.y) return a.y < b.y;
  if (a.x.size() != b.x.size()) return a.x.size() < b.x.size();
  if (a.x != b.x) return a.x < b.x;
  return a.what < b.what;
}

// Everything checkable from one oracle node: x-additivity and
// non-negativity inside its column, y-additivity against the two child
// columns. 'below' collects the work for the whole subtree rooted at y.
struct JointChecker {
  const JointMeasure& j;
  int depth;
  std::vector<ConsistencyViolation>& out;
  std::size_t nodes_checked = 0;

  void check_within(const Bits& y, const std::vector<Rational>& col) {
    for (int len = 0; len <= depth; ++len) {
      for (const Bits& x : strings_of_length(len)) {
        std::size_t i = heap_index(x);
        ++nodes_checked;
        if (col[i] < 0) out.push_back({x, y, "negative", col[i], Rational(0)});
        if (len < depth) {
          Rational sum = col[2 * i + 1] + col[2 * i + 2];
          if (col[i] != sum) out.push_back({x, y, "additivity-x", col[i], sum});
        }
      }
    }
  }

  void check_split(const Bits& y, const std::vector<Rational>& col,
                   const std::vector<Rational>& col0, const std::vector<Rational>& col1) {
    for (int len = 0; len <= depth; ++len) {
      for (const Bits& x : strings_of_length(len)) {
        std::size_t i = heap_index(x);
        Rational sum = col0[i] + col1[i];
        if (col[i] != sum) out.push_back({x, y, "additivity-y", col[i], sum});
      }
    }
  }

  void below(const Bits& y, const std::vector<Rational>& col) {
    check_within(y, col);
    if (static_cast<int>(y.size()) >= depth) return;
    std::vector<Rational> col0, col1;
    j.column(y + '0', depth, &col0);
    j.column(y + '1', depth, &col1);
    check_split(y, col, col0, col1);
    below(y + '0', col0);
    below(y + '1', col1);
  }
};

}  // namespace

ConsistencyReport sweep_joint_consistency(const JointMeasure& j, int depth, SweepMode mode) {
  ConsistencyReport rep;
  rep.depth = depth;

  Rational root = j("", "");
  if (root != 1) rep.violations.push_back({"", "", "root-mass", root, Rational(1)});

  // Y-subtrees at the split level are independent; the serial path is the
  // split_level = 0 special case of the same traversal.
  int split_level = 0;
#ifdef RANDLAB_HAVE_OPENMP
  if (mode == SweepMode::parallel) split_level = std::min(depth, 3);
#else
  (void)mode;
#endif

  // Top part: all oracle nodes above the split level, handled serially.
  std::vector<Bits> roots = strings_of_length(split_level);
  std::vector<std::vector<Rational>> root_cols(roots.size());
  {
    JointChecker top{j, depth, rep.violations};
    std::vector<std::vector<Rational>> level_cols;
    std::vector<Bits> level{Bits{}};
    level_cols.resize(1);
    j.column("", depth, &level_cols[0]);
    for (int l = 0; l < split_level; ++l) {
      std::vector<Bits> next;
      std::vector<std::vector<Rational>> next_cols;
      for (std::size_t i = 0; i < level.size(); ++i) {
        top.check_within(level[i], level_cols[i]);
        std::vector<Rational> c0, c1;
        j.column(level[i] + '0', depth, &c0);
        j.column(level[i] + '1', depth, &c1);
        top.check_split(level[i], level_cols[i], c0, c1);
        next.push_back(level[i] + '0');
        next_cols.push_back(std::move(c0));
        next.push_back(level[i] + '1');
        next_cols.push_back(std::move(c1));
      }
      level = std::move(next);
      level_cols = std::move(next_cols);
    }
    rep.nodes_checked += top.nodes_checked;
    root_cols = std::move(level_cols);
    roots = std::move(level);
  }

  // Subtrees at and below the split level.
  std::vector<std::vector<ConsistencyViolation>> chunk_violations(roots.size());
  std::vector<std::size_t> chunk_nodes(roots.size(), 0);
#ifdef RANDLAB_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) if (mode == SweepMode::parallel)
#endif
  for (std::size_t i = 0; i < roots.size(); ++i) {
    JointChecker checker{j, depth, chunk_violations[i]};
    checker.below(roots[i], root_cols[i]);
    chunk_nodes[i] = checker.nodes_checked;
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    rep.nodes_checked += chunk_nodes[i];
    rep.violations.insert(rep.violations.end(), chunk_violations[i].begin(),
                          chunk_violations[i].end());
  }

  std::sort(rep.violations.begin(), rep.violations.end(), violation_order_less);
  rep.pass = rep.violations.empty();
  return rep;
}

namespace {

// Canonical pair order: (|y|, y, |x|, x). Witnesses and violation lists
// use it so both sweep modes report identical results.
bool pair_key_less(const Bits& x1, const Bits& y1, const Bits& x2, const Bits& y2) {
  if (y1.size() != y2.size()) return y1.size() < y2.size();
  if (y1 != y2) return y1 < y2;
  if (x1.size() != x2.size()) return x1.size() < x2.size();
  return x1 < x2;
}

struct RatioChunk {
  bool seen = false;
  Rational min_ratio, max_ratio;
  Bits min_x, min_y, max_x, max_y;
  std::size_t pairs = 0;
  std::vector<RatioViolation> violations;
};

// Scans the given y-columns; within each y-subtree the scan visits pairs
// in canonical order, so per-chunk first witnesses are canonical minima.
void ratio_scan(const JointMeasure& j, int depth, const Rational& lo, const Rational& hi,
                const std::vector<Bits>& ys, RatioChunk* chunk) {
  std::vector<Rational> col;
  for (const Bits& y : ys) {
    j.column(y, depth, &col);
    for (int len = 0; len <= depth; ++len) {
      for (const Bits& x : strings_of_length(len)) {
        Rational ratio = col[heap_index(x)] * pow2(len + static_cast<long>(y.size()));
        ++chunk->pairs;
        if (!chunk->seen || ratio < chunk->min_ratio ||
            (ratio == chunk->min_ratio && pair_key_less(x, y, chunk->min_x, chunk->min_y))) {
          chunk->min_ratio = ratio;
          chunk->min_x = x;
          chunk->min_y = y;
        }
        if (!chunk->seen || ratio > chunk->max_ratio ||
            (ratio == chunk->max_ratio && pair_key_less(x, y, chunk->max_x, chunk->max_y))) {
          chunk->max_ratio = ratio;
          chunk->max_x = x;
          chunk->max_y = y;
        }
        chunk->seen = true;
        if (ratio < lo || ratio > hi) chunk->violations.push_back({x, y, ratio});
      }
    }
  }
}

std::vector<Bits> subtree_nodes(const Bits& root, int depth) {
  std::vector<Bits> ys;
  for (int len = static_cast<int>(root.size()); len <= depth; ++len) {
    for (const Bits& tail : strings_of_length(len - static_cast<int>(root.size()))) {
      ys.push_back(root + tail);
    }
  }
  return ys;
}

}  // namespace

RatioSweep sweep_ratio_extremes(const JointMeasure& j, int depth, const Rational& lo,
                                const Rational& hi, SweepMode mode) {
  std::vector<RatioChunk> chunks;

#ifdef RANDLAB_HAVE_OPENMP
  if (mode == SweepMode::parallel && depth >= 2) {
    std::vector<Bits> subtree_roots = strings_of_length(2);
    chunks.resize(1 + subtree_roots.size());
    ratio_scan(j, depth, lo, hi, {Bits{}, "0", "1"}, &chunks[0]);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < subtree_roots.size(); ++i) {
      ratio_scan(j, depth, lo, hi, subtree_nodes(subtree_roots[i], depth), &chunks[1 + i]);
    }
  } else
#endif
  {
    (void)mode;
    chunks.resize(1);
    std::vector<Bits> all;
    for (int len = 0; len <= depth; ++len) {
      for (const Bits& y : strings_of_length(len)) all.push_back(y);
    }
    ratio_scan(j, depth, lo, hi, all, &chunks[0]);
  }

  RatioSweep out;
  bool seen = false;
  for (const RatioChunk& c : chunks) {
    out.pairs_checked += c.pairs;
    if (!c.seen) continue;
    if (!seen || c.min_ratio < out.min_ratio ||
        (c.min_ratio == out.min_ratio && pair_key_less(c.min_x, c.min_y, out.min_x, out.min_y))) {
      out.min_ratio = c.min_ratio;
      out.min_x = c.min_x;
      out.min_y = c.min_y;
    }
    if (!seen || c.max_ratio > out.max_ratio ||
        (c.max_ratio == out.max_ratio && pair_key_less(c.max_x, c.max_y, out.max_x, out.max_y))) {
      out.max_ratio = c.max_ratio;
      out.max_x = c.max_x;
      out.max_y = c.max_y;
    }
    seen = true;
    out.violations.insert(out.violations.end(), c.violations.begin(), c.violations.end());
  }
  std::sort(out.violations.begin(), out.violations.end(),
            [](const RatioViolation& a, const RatioViolation& b) {
              return pair_key_less(a.x, a.y, b.x, b.y);
            });
  return out;
}

}  // namespace randlab
