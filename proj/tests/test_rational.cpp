#include <doctest.h>

#include "randlab/rational.hpp"

using namespace randlab;

TEST_CASE("rational parsing and formatting round-trip") {
  CHECK(rational_str(parse_rational("3/4")) == "3/4");
  CHECK(rational_str(parse_rational("2")) == "2");
  CHECK(rational_str(parse_rational("-1/2")) == "-1/2");
  CHECK(parse_rational("6/8") == Rational(3, 4));  // canonicalized
  CHECK(rational_str(Rational(0)) == "0");
  CHECK_THROWS_AS(parse_rational("1/0"), parse_error);
  CHECK_THROWS_AS(parse_rational("a/b"), parse_error);
  CHECK_THROWS_AS(parse_rational(""), parse_error);
}

TEST_CASE("pow2 and rational_pow are exact") {
  CHECK(pow2(4) == Rational(16));
  CHECK(pow2(0) == Rational(1));
  CHECK(pow2(-3) == Rational(1, 8));
  CHECK(rational_pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(rational_pow(Rational(5), 0) == Rational(1));
}

TEST_CASE("ratio convention a/0") {
  CHECK(ratio_of(Rational(1), Rational(2)) == ExtendedRational::finite(Rational(1, 2)));
  CHECK(!ratio_of(Rational(1), Rational(0)).is_finite());
  // 0/0 is 0, not infinity.
  CHECK(ratio_of(Rational(0), Rational(0)) == ExtendedRational::finite(Rational(0)));
}

TEST_CASE("extended arithmetic conventions") {
  ExtendedRational inf = ExtendedRational::inf();
  ExtendedRational two = ExtendedRational::finite(Rational(2));
  CHECK(inf > two);
  CHECK(two < inf);
  CHECK(ext_add(two, two) == ExtendedRational::finite(Rational(4)));
  CHECK(!ext_add(two, inf).is_finite());
  // The expectation convention: a null weight annihilates even infinity.
  CHECK(ext_mul_weight(Rational(0), inf) == ExtendedRational::finite(Rational(0)));
  CHECK(ext_mul_weight(Rational(1, 2), two) == ExtendedRational::finite(Rational(1)));
  CHECK(!ext_mul_weight(Rational(1, 2), inf).is_finite());
  CHECK(ext_str(inf) == "inf");
  CHECK(ext_str(two) == "2");
  CHECK(parse_extended("inf") == inf);
  CHECK(parse_extended("1/2") == ExtendedRational::finite(Rational(1, 2)));
}

TEST_CASE("exact dyadic log comparisons") {
  // compare_log2(r, t): sign of log2(r) - t, decided in integer arithmetic.
  CHECK(compare_log2(Rational(4), Rational(2)) == 0);
  CHECK(compare_log2(Rational(4), Rational(1)) > 0);
  CHECK(compare_log2(Rational(4), Rational(3)) < 0);
  CHECK(compare_log2(Rational(1, 2), Rational(-1)) == 0);
  // 1 < log2(3) < 2
  CHECK(compare_log2(Rational(3), Rational(1)) > 0);
  CHECK(compare_log2(Rational(3), Rational(2)) < 0);
  // Non-integer thresholds: log2(2) = 1 vs 3/2 and 1/2.
  CHECK(compare_log2(Rational(2), Rational(3, 2)) < 0);
  CHECK(compare_log2(Rational(2), Rational(1, 2)) > 0);
  // log2(8) vs 5/2: 3 > 5/2.
  CHECK(compare_log2(Rational(8), Rational(5, 2)) > 0);
}

TEST_CASE("ceil_log2_minus: least natural c with log2(r) <= t + c") {
  CHECK(ceil_log2_minus(Rational(4), Rational(0)) == 2);
  CHECK(ceil_log2_minus(Rational(3), Rational(0)) == 2);   // log2 3 ~ 1.585
  CHECK(ceil_log2_minus(Rational(4), Rational(2)) == 0);   // exact equality
  CHECK(ceil_log2_minus(Rational(1, 2), Rational(0)) == 0);
  CHECK(ceil_log2_minus(Rational(1024), Rational(1, 2)) == 10);  // 10 <= 1/2 + 10
  CHECK(ceil_log2_minus(Rational(5), Rational(2)) == 1);   // log2 5 ~ 2.32
}
