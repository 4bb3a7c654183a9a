#pragma once

#include <gmpxx.h>

#include <string>

#include "randlab/errors.hpp"

namespace randlab {

// All probability values are exact rationals; no floating point appears in
// any check. GMP's mpq_class keeps values canonical (lowest terms, positive
// denominator).
using Rational = mpq_class;
using Integer = mpz_class;

// Parses "num/den" or "num" (optional sign, arbitrary precision).
Rational parse_rational(const std::string& text);

// Canonical decimal rendering: "n" or "n/d" in lowest terms.
std::string rational_str(const Rational& q);

// 2^exp for any integer exponent.
Rational pow2(long exp);

// q^exp for a non-negative integer exponent.
Rational rational_pow(const Rational& q, unsigned long exp);

// The ratio convention a/0 := inf if a != 0, else 0, totalizes ratios of
// measure values. +inf is the only non-finite value that can arise.
struct ExtendedRational {
  bool infinite = false;
  Rational value{};  // meaningful iff !infinite

  static ExtendedRational inf() {
    ExtendedRational r;
    r.infinite = true;
    return r;
  }
  static ExtendedRational finite(Rational v) {
    ExtendedRational r;
    r.value = std::move(v);
    return r;
  }
  bool is_finite() const { return !infinite; }
};

// Q = num/den under the a/0 convention.
ExtendedRational ratio_of(const Rational& num, const Rational& den);

bool operator==(const ExtendedRational& a, const ExtendedRational& b);
bool operator!=(const ExtendedRational& a, const ExtendedRational& b);
bool operator<(const ExtendedRational& a, const ExtendedRational& b);
bool operator<=(const ExtendedRational& a, const ExtendedRational& b);
bool operator>(const ExtendedRational& a, const ExtendedRational& b);
bool operator>=(const ExtendedRational& a, const ExtendedRational& b);

bool ext_less(const ExtendedRational& a, const Rational& b);     // a < b
bool ext_greater(const ExtendedRational& a, const Rational& b);  // a > b

ExtendedRational ext_add(const ExtendedRational& a, const ExtendedRational& b);

// w * v with the expectation convention 0 * inf := 0 (null cylinders
// contribute nothing even where the integrand is infinite).
ExtendedRational ext_mul_weight(const Rational& w, const ExtendedRational& v);

// "n/d" for finite values, "inf" otherwise.
std::string ext_str(const ExtendedRational& v);

// Accepts what ext_str produces.
ExtendedRational parse_extended(const std::string& text);

// --- exact dyadic logarithm -------------------------------------------------
//
// The default approximation map g is log2, compared exactly through integer
// power comparisons: for r = u/v > 0 and t = a/b (b > 0),
//   log2(r) <=> t  iff  u^b <=> 2^a * v^b,
// with the power of two moved to whichever side keeps exponents
// non-negative. No floating point is involved.

// -1, 0, +1 as log2(r) <, ==, > t. Requires r > 0.
int compare_log2(const Rational& r, const Rational& t);

// True iff r == 2^e for some integer e; e returned through exp_out.
bool dyadic_exponent(const Rational& r, long* exp_out);

// floor(log2(r)) for r > 0, exact.
long floor_log2(const Rational& r);

// Smallest natural c with log2(r) <= t + c; requires r > 0.
long ceil_log2_minus(const Rational& r, const Rational& t);

}  // namespace randlab
