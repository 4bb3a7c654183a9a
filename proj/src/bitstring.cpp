#include "randlab/bitstring.hpp"

#include <algorithm>

namespace randlab {

bool valid_bits(const Bits& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

Bits parse_bits(const std::string& s) {
  if (!valid_bits(s)) throw parse_error("bad bitstring '" + s + "'");
  return s;
}

bool is_prefix(const Bits& a, const Bits& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool comparable(const Bits& a, const Bits& b) { return is_prefix(a, b) || is_prefix(b, a); }

std::vector<Bits> strings_of_length(int n) {
  std::vector<Bits> out;
  out.reserve(std::size_t{1} << n);
  Bits cur(static_cast<std::size_t>(n), '0');
  while (true) {
    out.push_back(cur);
    int i = n - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == '1') {
      cur[static_cast<std::size_t>(i)] = '0';
      --i;
    }
    if (i < 0) break;
    cur[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

std::vector<Bits> strings_up_to(int depth) {
  std::vector<Bits> out;
  for (int n = 0; n <= depth; ++n) {
    auto level = strings_of_length(n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::size_t heap_index(const Bits& s) {
  std::size_t idx = 0;
  for (char c : s) idx = 2 * idx + 1 + (c == '1' ? 1 : 0);
  return idx;
}

std::size_t heap_size(int depth) { return (std::size_t{2} << depth) - 1; }

Bits bits_from_heap_index(std::size_t idx) {
  Bits out;
  while (idx != 0) {
    out.push_back((idx % 2 == 1) ? '0' : '1');
    idx = (idx - 1) / 2;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

bool shortlex_less(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::vector<Bits> reduce_prefix_set(std::vector<Bits> elems) {
  std::sort(elems.begin(), elems.end(), shortlex_less);
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  std::vector<Bits> kept;
  for (const Bits& e : elems) {
    bool covered = std::any_of(kept.begin(), kept.end(),
                               [&](const Bits& k) { return is_prefix(k, e); });
    if (!covered) kept.push_back(e);
  }
  return kept;
}

bool prefix_set_covers(const std::vector<Bits>& elems, const Bits& s) {
  return std::any_of(elems.begin(), elems.end(),
                     [&](const Bits& e) { return is_prefix(e, s); });
}

bool operator==(const Rect& a, const Rect& b) { return a.x == b.x && a.y == b.y; }
bool operator!=(const Rect& a, const Rect& b) { return !(a == b); }

bool rect_order_less(const Rect& a, const Rect& b) {
  std::size_t ta = a.x.size() + a.y.size();
  std::size_t tb = b.x.size() + b.y.size();
  if (ta != tb) return ta < tb;
  if (a.y != b.y) return shortlex_less(a.y, b.y);
  return shortlex_less(a.x, b.x);
}

bool rects_disjoint(const Rect& a, const Rect& b) {
  return !comparable(a.x, b.x) || !comparable(a.y, b.y);
}

bool rect_contains(const Rect& outer, const Rect& inner) {
  return is_prefix(outer.x, inner.x) && is_prefix(outer.y, inner.y);
}

bool rect_set_covers(const std::vector<Rect>& rects, const Rect& leaf) {
  return std::any_of(rects.begin(), rects.end(),
                     [&](const Rect& r) { return rect_contains(r, leaf); });
}

namespace {

// Removes the part of `piece` covered by `kept`, splitting along whichever
// coordinate still extends; returns the surviving disjoint sub-rectangles.
void subtract_rect(const Rect& piece, const Rect& kept, std::vector<Rect>* out) {
  if (rects_disjoint(piece, kept)) {
    out->push_back(piece);
    return;
  }
  if (rect_contains(kept, piece)) return;
  // Overlapping but not contained: kept extends piece strictly along x or y.
  if (is_prefix(piece.x, kept.x) && piece.x != kept.x) {
    subtract_rect({piece.x + '0', piece.y}, kept, out);
    subtract_rect({piece.x + '1', piece.y}, kept, out);
  } else {
    subtract_rect({piece.x, piece.y + '0'}, kept, out);
    subtract_rect({piece.x, piece.y + '1'}, kept, out);
  }
}

}  // namespace

std::vector<Rect> nonoverlapping_cover(std::vector<Rect> rects) {
  std::sort(rects.begin(), rects.end(), rect_order_less);
  std::vector<Rect> kept;
  for (const Rect& r : rects) {
    std::vector<Rect> pieces{r};
    for (const Rect& k : kept) {
      std::vector<Rect> next;
      for (const Rect& p : pieces) subtract_rect(p, k, &next);
      pieces = std::move(next);
      if (pieces.empty()) break;
    }
    kept.insert(kept.end(), pieces.begin(), pieces.end());
  }
  std::sort(kept.begin(), kept.end(), rect_order_less);
  if (!verify_rect_cover(rects, kept)) {
    throw randlab_error("internal: cover verification failed");
  }
  return kept;
}

bool verify_rect_cover(const std::vector<Rect>& original, const std::vector<Rect>& cover) {
  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (std::size_t j = i + 1; j < cover.size(); ++j) {
      if (!rects_disjoint(cover[i], cover[j])) return false;
    }
  }
  std::size_t dx = 0, dy = 0;
  for (const Rect& r : original) {
    dx = std::max(dx, r.x.size());
    dy = std::max(dy, r.y.size());
  }
  for (const Rect& r : cover) {
    dx = std::max(dx, r.x.size());
    dy = std::max(dy, r.y.size());
  }
  if (dx + dy > 22) {
    // Exhaustive verification is reserved for desk-scale instances; larger
    // inputs would make the check itself the bottleneck.
    return true;
  }
  for (const Bits& xl : strings_of_length(static_cast<int>(dx))) {
    for (const Bits& yl : strings_of_length(static_cast<int>(dy))) {
      Rect leaf{xl, yl};
      if (rect_set_covers(original, leaf) != rect_set_covers(cover, leaf)) return false;
    }
  }
  return true;
}

}  // namespace randlab
