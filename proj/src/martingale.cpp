#include "randlab/martingale.hpp"

#include <algorithm>
#include <utility>

namespace randlab {

RatioProcess RatioProcess::likelihood(Measure P, Measure Q) {
  RatioProcess proc;
  proc.label_ = Q.label() + "/" + P.label();
  proc.fn_ = [P = std::move(P), Q = std::move(Q)](const Bits& x) {
    return ratio_of(Q(x), P(x));
  };
  return proc;
}

RatioProcess RatioProcess::from_table(std::map<Bits, ExtendedRational> values) {
  RatioProcess proc;
  proc.label_ = "table";
  proc.fn_ = [values = std::move(values)](const Bits& x) {
    auto it = values.find(x);
    if (it == values.end()) {
      throw precondition_error("process-domain", "no process value at node '" + x + "'");
    }
    return it->second;
  };
  return proc;
}

RatioProcess RatioProcess::from_function(std::string label,
                                         std::function<ExtendedRational(const Bits&)> fn) {
  RatioProcess proc;
  proc.label_ = std::move(label);
  proc.fn_ = std::move(fn);
  return proc;
}

ExtendedRational likelihood_ratio(const Measure& P, const Measure& Q, const Bits& x) {
  return ratio_of(Q(x), P(x));
}

SubmartingaleReport check_submartingale(const Measure& P, const RatioProcess& proc, int depth) {
  SubmartingaleReport rep;
  rep.depth = depth;
  for (int len = 0; len < depth; ++len) {
    for (const Bits& x : strings_of_length(len)) {
      Rational px = P(x);
      if (px == 0) {
        ++rep.null_nodes_skipped;
        continue;
      }
      ++rep.nodes_checked;
      ExtendedRational lhs =
          ext_add(ext_mul_weight(P(x + '0'), proc(x + '0')), ext_mul_weight(P(x + '1'), proc(x + '1')));
      ExtendedRational rhs = ext_mul_weight(px, proc(x));
      if (lhs < rhs) {
        rep.violations.push_back({x, lhs, rhs});
      } else if (lhs != rhs) {
        rep.martingale = false;
      }
    }
  }
  rep.pass = rep.violations.empty();
  if (!rep.pass) rep.martingale = false;
  return rep;
}

namespace {

void require_nonnegative(const ExtendedRational& r, const Bits& x) {
  if (r.is_finite() && r.value < 0) {
    throw precondition_error("negative-value",
                             "process value " + ext_str(r) + " at node '" + x + "'");
  }
}

// Table-backed g: exact lookup, recording every evaluated point so strict
// monotonicity can be certified over exactly the points the run touched.
struct GTable {
  const std::vector<std::pair<Rational, Rational>>& entries;
  mutable std::vector<std::pair<Rational, Rational>> evaluated;

  Rational at(const Rational& arg) const {
    for (const auto& [a, v] : entries) {
      if (a == arg) {
        evaluated.push_back({a, v});
        return v;
      }
    }
    throw precondition_error("g-domain", "g table has no entry for " + rational_str(arg));
  }

  void check_monotone() const {
    std::vector<std::pair<Rational, Rational>> pts = evaluated;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i].first == pts[i - 1].first) {
        if (pts[i].second != pts[i - 1].second) {
          throw precondition_error("g-not-monotone",
                                   "g maps " + rational_str(pts[i].first) + " to two values");
        }
        continue;
      }
      if (!(pts[i].second > pts[i - 1].second)) {
        throw precondition_error(
            "g-not-monotone", "g(" + rational_str(pts[i - 1].first) + ") = " +
                                  rational_str(pts[i - 1].second) + " but g(" +
                                  rational_str(pts[i].first) + ") = " +
                                  rational_str(pts[i].second));
      }
    }
  }
};

std::optional<Rational> f_at(const ApproximationScheme& scheme, const Bits& x, int n) {
  auto it = scheme.f.find({x, n});
  if (it == scheme.f.end()) return std::nullopt;
  return it->second;
}

}  // namespace

DoobReport doob_check(const Measure& P, const RatioProcess& proc, int depth,
                      const std::vector<long>& thresholds, const ApproximationScheme* scheme) {
  DoobReport rep;
  rep.depth = depth;

  for (long m : thresholds) {
    if (m < 1) {
      throw precondition_error("threshold-not-positive",
                               "Doob threshold must be a positive natural, got " +
                                   std::to_string(m));
    }
    DoobRecord rec;
    rec.m = m;
    Rational mr(m);

    // Minimal prefixes z (|z| >= 1) with r(z) > m cover the event exactly;
    // pruning below a witness keeps the cover an antichain.
    rec.mass = 0;
    std::vector<Bits> stack{""};
    while (!stack.empty()) {
      Bits cur = stack.back();
      stack.pop_back();
      if (!cur.empty()) {
        ExtendedRational r = proc(cur);
        require_nonnegative(r, cur);
        if (ext_greater(r, mr)) {
          rec.witnesses.push_back(cur);
          rec.mass += P(cur);
          continue;
        }
      }
      if (static_cast<int>(cur.size()) < depth) {
        stack.push_back(cur + '1');
        stack.push_back(cur + '0');
      }
    }
    std::sort(rec.witnesses.begin(), rec.witnesses.end(), shortlex_less);

    rec.expectation = ExtendedRational::finite(Rational(0));
    for (const Bits& x : strings_of_length(depth)) {
      ExtendedRational r = proc(x);
      require_nonnegative(r, x);
      rec.expectation = ext_add(rec.expectation, ext_mul_weight(P(x), r));
    }
    rec.bound_infinite = !rec.expectation.is_finite();
    if (rec.bound_infinite) {
      rec.pass = true;
    } else {
      rec.bound = rec.expectation.value / mr;
      rec.pass = rec.mass <= rec.bound;
    }

    if (scheme != nullptr) {
      // Leaf enumeration of the three transported events. Membership is
      // decided through g (per-prefix for U, sup-then-g for U', the f
      // approximation for V), never by reusing the raw-ratio test above,
      // so the equalities below genuinely cross-check the proof chain.
      DoobChain chain;
      chain.mass_v = 0;
      chain.mass_u = 0;
      chain.mass_uprime = 0;
      GTable gtab{scheme->g_table, {}};
      std::optional<Rational> g_m;
      if (!scheme->dyadic_log) g_m = gtab.at(mr);

      auto g_exceeds_gm = [&](const ExtendedRational& r) {
        if (!r.is_finite()) return true;  // g(inf) = +inf
        if (r.value == 0) return false;   // g(0) = -inf
        if (scheme->dyadic_log) {
          // log2(r) > log2(m)  iff  log2(r/m) > 0, decided exactly.
          return compare_log2(r.value / mr, Rational(0)) > 0;
        }
        return gtab.at(r.value) > *g_m;
      };
      auto f_exceeds_gm = [&](const Rational& fv) {
        if (scheme->dyadic_log) {
          // f > log2(m)  iff  log2(m) < f.
          return compare_log2(mr, fv) < 0;
        }
        return fv > *g_m;
      };

      for (const Bits& x : strings_of_length(depth)) {
        bool in_u = false, in_v = false;
        ExtendedRational sup = ExtendedRational::finite(Rational(0));
        bool sup_seen = false;
        for (int i = 1; i <= depth; ++i) {
          Bits prefix = x.substr(0, i);
          ExtendedRational r = proc(prefix);
          if (!sup_seen || r > sup) {
            sup = r;
            sup_seen = true;
          }
          if (!in_u && g_exceeds_gm(r)) in_u = true;
          if (!in_v) {
            std::optional<Rational> fv = f_at(*scheme, prefix, i);
            if (fv && f_exceeds_gm(*fv)) in_v = true;
          }
        }
        bool in_uprime = sup_seen && g_exceeds_gm(sup);
        Rational px = P(x);
        if (in_u) chain.mass_u += px;
        if (in_uprime) chain.mass_uprime += px;
        if (in_v) chain.mass_v += px;
      }
      if (!scheme->dyadic_log) gtab.check_monotone();

      chain.v_le_u = chain.mass_v <= chain.mass_u;
      chain.u_eq_uprime = chain.mass_u == chain.mass_uprime;
      chain.uprime_eq_m = chain.mass_uprime == rec.mass;
      chain.pass = chain.v_le_u && chain.u_eq_uprime && chain.uprime_eq_m;
      rec.chain = chain;
      if (!chain.pass) rec.pass = false;
    }

    if (!rec.pass) rep.pass = false;
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

ApproxReport check_effective_approximation(const RatioProcess& proc,
                                           const ApproximationScheme& scheme, int depth) {
  ApproxReport rep;
  rep.depth = depth;
  rep.c = scheme.c;
  rep.strong = !scheme.dyadic_log;
  GTable gtab{scheme.g_table, {}};

  enum class GKind { neg_inf, finite, pos_inf };
  bool tightest_possible = true;
  long tightest = 0;

  for (int n = 0; n <= depth; ++n) {
    for (const Bits& x : strings_of_length(n)) {
      ++rep.nodes_checked;
      ExtendedRational r = proc(x);
      require_nonnegative(r, x);
      std::optional<Rational> f = f_at(scheme, x, n);

      GKind kind;
      Rational g_val;  // meaningful only for table-backed finite g
      if (!r.is_finite()) {
        kind = GKind::pos_inf;
      } else if (r.value == 0 && scheme.dyadic_log) {
        kind = GKind::neg_inf;
      } else if (scheme.dyadic_log) {
        kind = GKind::finite;
      } else {
        g_val = gtab.at(r.value);
        kind = GKind::finite;
      }

      // Lower bound f <= g(r); holds vacuously when f is absent (-inf).
      if (f) {
        bool lower_ok;
        switch (kind) {
          case GKind::pos_inf:
            lower_ok = true;
            break;
          case GKind::neg_inf:
            lower_ok = false;
            break;
          case GKind::finite:
            lower_ok = scheme.dyadic_log ? compare_log2(r.value, *f) >= 0 : g_val >= *f;
            break;
        }
        if (!lower_ok) rep.violations.push_back({x, "lower", true, *f});
      }

      // Upper bound g(r) <= f + c; an absent f bounds nothing above.
      bool upper_ok;
      switch (kind) {
        case GKind::neg_inf:
          upper_ok = true;
          break;
        case GKind::pos_inf:
          upper_ok = false;
          tightest_possible = false;
          break;
        case GKind::finite:
          if (!f) {
            upper_ok = false;
            tightest_possible = false;
          } else if (scheme.dyadic_log) {
            upper_ok = compare_log2(r.value, *f + Rational(scheme.c)) <= 0;
            tightest = std::max(tightest, ceil_log2_minus(r.value, *f));
          } else {
            upper_ok = g_val <= *f + Rational(scheme.c);
            Rational gap = g_val - *f;
            if (gap > 0) {
              Integer q;
              mpz_cdiv_q(q.get_mpz_t(), gap.get_num_mpz_t(), gap.get_den_mpz_t());
              tightest = std::max(tightest, q.get_si());
            }
          }
          break;
      }
      if (!upper_ok) {
        Rational fv = f ? *f : Rational(0);
        rep.violations.push_back({x, "upper", f.has_value(), fv});
      }
    }
  }
  if (!scheme.dyadic_log) gtab.check_monotone();

  rep.has_tightest = tightest_possible;
  rep.tightest_c = tightest_possible ? tightest : 0;
  rep.pass = rep.violations.empty();
  return rep;
}

ProbBoundCertificate ProbBoundCertificate::reciprocal_map() { return ProbBoundCertificate{}; }

ProbBoundCertificate ProbBoundCertificate::from_table(
    std::vector<std::pair<long, Rational>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].first == entries[i - 1].first && entries[i].second != entries[i - 1].second) {
      throw precondition_error("h-not-decreasing", "h maps " + std::to_string(entries[i].first) +
                                                       " to two values");
    }
    if (entries[i].second > entries[i - 1].second) {
      throw precondition_error("h-not-decreasing",
                               "h(" + std::to_string(entries[i - 1].first) + ") = " +
                                   rational_str(entries[i - 1].second) + " < h(" +
                                   std::to_string(entries[i].first) + ") = " +
                                   rational_str(entries[i].second));
    }
  }
  ProbBoundCertificate cert;
  cert.reciprocal = false;
  cert.table = std::move(entries);
  return cert;
}

Rational ProbBoundCertificate::bound(long k) const {
  if (reciprocal) {
    if (k < 1) {
      throw precondition_error("threshold-not-positive",
                               "reciprocal bound needs k >= 1, got " + std::to_string(k));
    }
    return Rational(1) / Rational(k);
  }
  for (const auto& [key, value] : table) {
    if (key == k) return value;
  }
  throw precondition_error("h-missing", "h table has no entry for " + std::to_string(k));
}

BoundedReport check_bounded_in_probability(const Measure& P, const Measure& Q,
                                           const ProbBoundCertificate& cert, int depth,
                                           const std::vector<long>& ks) {
  BoundedReport rep;
  rep.depth = depth;
  for (long k : ks) {
    BoundedRecord rec;
    rec.k = k;
    rec.bound = cert.bound(k);
    rec.mass = 0;
    Rational kr(k);
    for (const Bits& x : strings_of_length(depth)) {
      if (ext_greater(ratio_of(P(x), Q(x)), kr)) rec.mass += P(x);
    }
    rec.pass = rec.mass < rec.bound;
    rec.margin = rec.bound - rec.mass;
    if (!rec.pass) rep.pass = false;
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

ClassificationReport classify(const Measure& P, const Measure& Q, const Bits& x,
                              const Rational& threshold) {
  ClassificationReport rep;
  rep.x = x;
  rep.threshold = threshold;
  for (std::size_t len = 0; len <= x.size(); ++len) {
    Bits prefix = x.substr(0, len);
    ExtendedRational r = ratio_of(Q(prefix), P(prefix));
    rep.ratios.push_back(r);
    if (rep.running_min.empty()) {
      rep.running_min.push_back(r);
      rep.running_max.push_back(r);
    } else {
      rep.running_min.push_back(r < rep.running_min.back() ? r : rep.running_min.back());
      rep.running_max.push_back(r > rep.running_max.back() ? r : rep.running_max.back());
    }
  }
  rep.regime = ext_greater(rep.running_min.back(), threshold) ? "bounded" : "decayed";
  return rep;
}

namespace {

EquivalenceReport equivalence_scan(
    const std::function<ExtendedRational(const Bits&, const Bits&)>& ratio,
    const std::vector<std::pair<Bits, Bits>>& pairs, const Rational& c, const Rational& c_hi,
    int depth, bool strict, bool joint) {
  if (!(c > 0) || !(c <= c_hi)) {
    throw precondition_error("invalid-bounds", "need 0 < c <= c_hi, got c = " + rational_str(c) +
                                                   ", c_hi = " + rational_str(c_hi));
  }
  EquivalenceReport rep;
  rep.depth = depth;
  rep.strict = strict;
  rep.joint = joint;
  rep.c_lo = c;
  rep.c_hi = c_hi;

  bool seen = false;
  for (const auto& [x, y] : pairs) {
    ExtendedRational r = ratio(x, y);
    ++rep.nodes_checked;
    if (!seen || r < rep.min_ratio) {
      rep.min_ratio = r;
      rep.min_x = x;
      rep.min_y = y;
    }
    if (!seen || r > rep.max_ratio) {
      rep.max_ratio = r;
      rep.max_x = x;
      rep.max_y = y;
    }
    seen = true;
    bool lower_ok = strict ? ext_greater(r, c) : (!r.is_finite() || r.value >= c);
    bool upper_ok = r.is_finite() && (strict ? r.value < c_hi : r.value <= c_hi);
    if (!lower_ok) rep.violations.push_back({x, y, r, "lower"});
    if (!upper_ok) rep.violations.push_back({x, y, r, "upper"});
  }
  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace

EquivalenceReport equivalence_certificate(const Measure& P, const Measure& Q, const Rational& c,
                                          const Rational& c_hi, int depth, bool strict) {
  std::vector<std::pair<Bits, Bits>> pairs;
  for (int len = 0; len <= depth; ++len) {
    for (const Bits& x : strings_of_length(len)) pairs.push_back({x, Bits{}});
  }
  return equivalence_scan(
      [&](const Bits& x, const Bits&) { return ratio_of(Q(x), P(x)); }, pairs, c, c_hi, depth,
      strict, false);
}

EquivalenceReport equivalence_certificate(const JointMeasure& P, const JointMeasure& Q,
                                          const Rational& c, const Rational& c_hi, int depth,
                                          bool strict) {
  std::vector<std::pair<Bits, Bits>> pairs;
  for (int ylen = 0; ylen <= depth; ++ylen) {
    for (const Bits& y : strings_of_length(ylen)) {
      for (int xlen = 0; xlen <= depth; ++xlen) {
        for (const Bits& x : strings_of_length(xlen)) pairs.push_back({x, y});
      }
    }
  }
  return equivalence_scan(
      [&](const Bits& x, const Bits& y) { return ratio_of(Q(x, y), P(x, y)); }, pairs, c, c_hi,
      depth, strict, true);
}

}  // namespace randlab
