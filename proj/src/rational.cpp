#include "randlab/rational.hpp"

#include <cctype>

namespace randlab {

namespace {

bool parse_mpz(const std::string& text, Integer* out) {
  if (text.empty()) return false;
  std::size_t start = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (start == text.size()) return false;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  if (out->set_str(text[0] == '+' ? text.substr(1) : text, 10) != 0) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t");
  std::size_t end = text.find_last_not_of(" \t");
  if (begin == std::string::npos) throw parse_error("empty rational literal");
  std::string body = text.substr(begin, end - begin + 1);

  std::size_t slash = body.find('/');
  Integer num, den;
  if (slash == std::string::npos) {
    if (!parse_mpz(body, &num)) throw parse_error("bad rational literal '" + text + "'");
    den = 1;
  } else {
    if (!parse_mpz(body.substr(0, slash), &num) || !parse_mpz(body.substr(slash + 1), &den)) {
      throw parse_error("bad rational literal '" + text + "'");
    }
    if (den == 0) throw parse_error("zero denominator in '" + text + "'");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string rational_str(const Rational& q) { return q.get_str(); }

Rational pow2(long exp) {
  Rational q;
  if (exp >= 0) {
    Integer n = 1;
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(exp));
    q = Rational(n);
  } else {
    Integer d = 1;
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(-exp));
    q = Rational(Integer(1), d);
  }
  q.canonicalize();
  return q;
}

Rational rational_pow(const Rational& q, unsigned long exp) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), exp);
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), exp);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

ExtendedRational ratio_of(const Rational& num, const Rational& den) {
  if (den != 0) return ExtendedRational::finite(num / den);
  if (num == 0) return ExtendedRational::finite(Rational(0));
  return ExtendedRational::inf();
}

bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return a.value == b.value;
}
bool operator!=(const ExtendedRational& a, const ExtendedRational& b) { return !(a == b); }
bool operator<(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.infinite) return false;
  if (b.infinite) return true;
  return a.value < b.value;
}
bool operator<=(const ExtendedRational& a, const ExtendedRational& b) { return a < b || a == b; }
bool operator>(const ExtendedRational& a, const ExtendedRational& b) { return b < a; }
bool operator>=(const ExtendedRational& a, const ExtendedRational& b) { return b <= a; }

bool ext_less(const ExtendedRational& a, const Rational& b) {
  return !a.infinite && a.value < b;
}
bool ext_greater(const ExtendedRational& a, const Rational& b) {
  return a.infinite || a.value > b;
}

ExtendedRational ext_add(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.infinite || b.infinite) return ExtendedRational::inf();
  return ExtendedRational::finite(a.value + b.value);
}

ExtendedRational ext_mul_weight(const Rational& w, const ExtendedRational& v) {
  if (w == 0) return ExtendedRational::finite(Rational(0));
  if (v.infinite) return ExtendedRational::inf();
  return ExtendedRational::finite(w * v.value);
}

std::string ext_str(const ExtendedRational& v) {
  return v.infinite ? "inf" : rational_str(v.value);
}

ExtendedRational parse_extended(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t");
  std::size_t end = text.find_last_not_of(" \t");
  if (begin != std::string::npos && text.substr(begin, end - begin + 1) == "inf") {
    return ExtendedRational::inf();
  }
  return ExtendedRational::finite(parse_rational(text));
}

int compare_log2(const Rational& r, const Rational& t) {
  if (r <= 0) throw precondition_error("g-domain", "log2 needs a positive argument");
  // Decide log2(u/v) <=> a/b  via  u^b <=> 2^a v^b  (b > 0).
  const Integer& u = r.get_num();
  const Integer& v = r.get_den();
  Integer a = t.get_num();
  unsigned long b = mpz_get_ui(t.get_den_mpz_t());

  Integer lhs, rhs;
  mpz_pow_ui(lhs.get_mpz_t(), u.get_mpz_t(), b);
  mpz_pow_ui(rhs.get_mpz_t(), v.get_mpz_t(), b);
  if (a >= 0) {
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), mpz_get_ui(a.get_mpz_t()));
  } else {
    Integer neg = -a;
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), mpz_get_ui(neg.get_mpz_t()));
  }
  return mpz_cmp(lhs.get_mpz_t(), rhs.get_mpz_t());
}

bool dyadic_exponent(const Rational& r, long* exp_out) {
  if (r <= 0) return false;
  const Integer& u = r.get_num();
  const Integer& v = r.get_den();
  if (u == 1) {
    // 1/v: need v = 2^k.
    std::size_t k = mpz_scan1(v.get_mpz_t(), 0);
    Integer probe = 1;
    mpz_mul_2exp(probe.get_mpz_t(), probe.get_mpz_t(), k);
    if (probe == v) {
      *exp_out = -static_cast<long>(k);
      return true;
    }
    return false;
  }
  if (v == 1) {
    std::size_t k = mpz_scan1(u.get_mpz_t(), 0);
    Integer probe = 1;
    mpz_mul_2exp(probe.get_mpz_t(), probe.get_mpz_t(), k);
    if (probe == u) {
      *exp_out = static_cast<long>(k);
      return true;
    }
    return false;
  }
  return false;  // canonical form: a power of two has numerator or denominator 1
}

long floor_log2(const Rational& r) {
  if (r <= 0) throw precondition_error("g-domain", "log2 needs a positive argument");
  // Bracket with the bit sizes of numerator and denominator, then fix up.
  long lo = static_cast<long>(mpz_sizeinbase(r.get_num_mpz_t(), 2)) -
            static_cast<long>(mpz_sizeinbase(r.get_den_mpz_t(), 2));
  while (compare_log2(r, Rational(lo)) < 0) --lo;
  while (compare_log2(r, Rational(lo + 1)) >= 0) ++lo;
  return lo;
}

long ceil_log2_minus(const Rational& r, const Rational& t) {
  // Smallest natural c with log2(r) <= t + c; values are desk-scale.
  long c = 0;
  while (compare_log2(r, t + Rational(c)) > 0) ++c;
  return c;
}

}  // namespace randlab
