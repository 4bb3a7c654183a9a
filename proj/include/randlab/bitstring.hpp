#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "randlab/errors.hpp"

namespace randlab {

// A finite binary word indexing the cylinder set of its infinite
// extensions. The empty string is the root (whole space).
using Bits = std::string;

bool valid_bits(const Bits& s);
Bits parse_bits(const std::string& s);  // validates characters, throws parse_error

// a is a (not necessarily proper) prefix of b.
bool is_prefix(const Bits& a, const Bits& b);

// Cylinders of a and b intersect (one extends the other).
bool comparable(const Bits& a, const Bits& b);

// All strings of the given length, lexicographic ('0' < '1').
std::vector<Bits> strings_of_length(int n);

// All strings of length <= depth in breadth-first order: "", "0", "1", ...
std::vector<Bits> strings_up_to(int depth);

// Heap layout for arrays over all nodes of depth <= d:
// index("") = 0, children of i at 2i+1 ('0') and 2i+2 ('1').
std::size_t heap_index(const Bits& s);
std::size_t heap_size(int depth);  // 2^(depth+1) - 1
Bits bits_from_heap_index(std::size_t idx);

// shortlex: by length, then lexicographic.
bool shortlex_less(const Bits& a, const Bits& b);

// Prefix-minimal reduction: sort by (length, lexicographic), keep elements
// with no kept ancestor. The induced union of cylinders is unchanged.
std::vector<Bits> reduce_prefix_set(std::vector<Bits> elems);

// s lies under some element of the set (i.e. the cylinder of s is covered).
bool prefix_set_covers(const std::vector<Bits>& elems, const Bits& s);

// --- rectangles on the product tree ----------------------------------------

struct Rect {
  Bits x;
  Bits y;
};

bool operator==(const Rect& a, const Rect& b);
bool operator!=(const Rect& a, const Rect& b);

// Order rectangles by (|x|+|y|, shortlex y, shortlex x): the deterministic
// processing order for covers.
bool rect_order_less(const Rect& a, const Rect& b);

bool rects_disjoint(const Rect& a, const Rect& b);
bool rect_contains(const Rect& outer, const Rect& inner);

// True iff the leaf rectangle is covered by the union of the set.
bool rect_set_covers(const std::vector<Rect>& rects, const Rect& leaf);

// Rewrites a finite rectangle list into a pairwise-disjoint list with the
// same union. Deterministic: rectangles are processed in rect_order_less
// order; later rectangles lose their overlap with already-kept ones by
// repeated child-splitting of the longer coordinate. The result is verified
// by exhaustive leaf enumeration at the maximum element depth.
std::vector<Rect> nonoverlapping_cover(std::vector<Rect> rects);

// Exhaustive-leaf check that two rectangle lists have the same union and
// that `cover` is pairwise disjoint; used by nonoverlapping_cover and by
// tests.
bool verify_rect_cover(const std::vector<Rect>& original, const std::vector<Rect>& cover);

}  // namespace randlab
