#include "randlab/testlab.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace randlab {

namespace {

std::size_t leaf_ordinal(const Bits& s) {
  std::size_t v = 0;
  for (char c : s) v = v * 2 + (c == '1' ? 1 : 0);
  return v;
}

// Open-set containment union(inner) <= union(outer), decided exactly by
// expanding each inner element to the outer resolution. A single covering
// ancestor is not necessary: {"00","01"} jointly covers "0".
bool open_subset(const std::vector<Bits>& inner, const std::vector<Bits>& outer) {
  std::vector<Bits> in = reduce_prefix_set(inner);
  std::vector<Bits> out = reduce_prefix_set(outer);
  std::size_t resolution = 0;
  for (const Bits& t : out) resolution = std::max(resolution, t.size());
  for (const Bits& s : in) {
    if (prefix_set_covers(out, s)) continue;
    if (s.size() >= resolution) return false;
    for (const Bits& tail : strings_of_length(static_cast<int>(resolution - s.size()))) {
      if (!prefix_set_covers(out, s + tail)) return false;
    }
  }
  return true;
}

}  // namespace

Rational TestFamily::bound(int n) const {
  if (default_bound) return pow2(-n);
  if (n < 1 || static_cast<std::size_t>(n) > bounds.size()) {
    throw precondition_error("bound-missing",
                             "no explicit bound for level " + std::to_string(n));
  }
  return bounds[static_cast<std::size_t>(n) - 1];
}

BlindTestReport verify_blind_test(const Measure& m, const TestFamily& fam) {
  BlindTestReport rep;
  for (std::size_t i = 0; i < fam.levels.size(); ++i) {
    BlindLevelRecord rec;
    rec.n = static_cast<int>(i) + 1;
    rec.mass = prefix_set_measure(m, fam.levels[i]);
    rec.bound = fam.bound(rec.n);
    rec.mass_ok = rec.mass < rec.bound;
    rec.nested = i == 0 || open_subset(fam.levels[i], fam.levels[i - 1]);
    if (!rec.mass_ok || !rec.nested) rep.pass = false;
    rep.levels.push_back(std::move(rec));
  }
  return rep;
}

SolovayReport verify_solovay(const Measure& m, const TestFamily& fam, int horizon) {
  if (horizon < 0 || static_cast<std::size_t>(horizon) > fam.levels.size()) {
    throw precondition_error("horizon-exceeds-levels",
                             "family has " + std::to_string(fam.levels.size()) +
                                 " levels, horizon " + std::to_string(horizon));
  }
  SolovayReport rep;
  rep.horizon = horizon;
  rep.total = 0;
  for (int n = 1; n <= horizon; ++n) {
    Rational mass = prefix_set_measure(m, fam.levels[static_cast<std::size_t>(n) - 1]);
    rep.total += mass;
    rep.masses.push_back(mass);
    rep.partial_sums.push_back(rep.total);
    if (mass > fam.bound(n)) {
      rep.majorant_violations.push_back(n);
      rep.pass = false;
    }
  }
  return rep;
}

// --- Lemma-A machinery -------------------------------------------------------

LemmaAFamily build_lemma_a_family(const std::vector<Rect>& w, const Rational& epsilon,
                                  const JointMeasure& joint) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (!rects_disjoint(w[i], w[j])) {
        throw precondition_error("overlapping-rectangles",
                                 "pairs " + std::to_string(i + 1) + " and " +
                                     std::to_string(j + 1) + " overlap; run the "
                                     "non-overlapping cover first");
      }
    }
  }

  LemmaAFamily fam;
  fam.w = w;
  fam.epsilon = epsilon;

  for (std::size_t n = 1; n <= w.size(); ++n) {
    LemmaALevel level;
    level.n = static_cast<int>(n);
    std::size_t resolution = 0;
    for (std::size_t i = 0; i < n; ++i) resolution = std::max(resolution, w[i].y.size());
    level.resolution = static_cast<int>(resolution);

    // Atoms of the partition generated by the first n oracle cylinders:
    // equal-length pieces grouped by their membership signature.
    std::vector<std::vector<Bits>> atom_pieces;
    std::map<std::vector<bool>, std::size_t> by_signature;
    std::vector<std::vector<bool>> signatures;
    for (const Bits& piece : strings_of_length(level.resolution)) {
      std::vector<bool> sig(n);
      for (std::size_t i = 0; i < n; ++i) sig[i] = is_prefix(w[i].y, piece);
      auto [it, inserted] = by_signature.try_emplace(sig, atom_pieces.size());
      if (inserted) {
        atom_pieces.emplace_back();
        signatures.push_back(sig);
      }
      atom_pieces[it->second].push_back(piece);
    }

    for (std::size_t a = 0; a < atom_pieces.size(); ++a) {
      LemmaAAtom atom;
      atom.pieces = atom_pieces[a];
      for (std::size_t i = 0; i < n; ++i) {
        if (signatures[a][i]) atom.section.push_back(w[i].x);
      }
      atom.weight = 0;
      for (const Bits& piece : atom.pieces) atom.weight += joint("", piece);
      if (atom.weight == 0) {
        if (!atom.section.empty()) {
          throw precondition_error("null-atom",
                                   "atom containing '" + atom.pieces.front() +
                                       "' is marginal-null but has a non-empty section");
        }
        atom.null_atom = true;
        atom.section_mass = 0;
      } else {
        atom.section_mass = 0;
        for (const Bits& x : atom.section) {
          Rational joint_mass = 0;
          for (const Bits& piece : atom.pieces) joint_mass += joint(x, piece);
          atom.section_mass += joint_mass / atom.weight;
        }
      }
      atom.below_eps = atom.section_mass < epsilon;
      if (atom.below_eps) {
        for (const Bits& x : atom.section) {
          for (const Bits& piece : atom.pieces) level.u.push_back({x, piece});
        }
      }
      level.atoms.push_back(std::move(atom));
    }
    fam.levels.push_back(std::move(level));
  }
  return fam;
}

namespace {

// Leaf-pair membership of the open set spanned by a rectangle list, at a
// common resolution on both axes. Rows index x-leaves, columns y-leaves.
std::vector<char> rect_membership(const std::vector<Rect>& rects, int depth) {
  std::size_t leaves = std::size_t{1} << depth;
  std::vector<char> member(leaves * leaves, 0);
  for (const Rect& r : rects) {
    std::size_t row0 = leaf_ordinal(r.x) << (depth - static_cast<int>(r.x.size()));
    std::size_t rows = std::size_t{1} << (depth - static_cast<int>(r.x.size()));
    std::size_t col0 = leaf_ordinal(r.y) << (depth - static_cast<int>(r.y.size()));
    std::size_t cols = std::size_t{1} << (depth - static_cast<int>(r.y.size()));
    for (std::size_t row = row0; row < row0 + rows; ++row) {
      for (std::size_t col = col0; col < col0 + cols; ++col) member[row * leaves + col] = 1;
    }
  }
  return member;
}

int family_resolution(const LemmaAFamily& fam) {
  int needed = 0;
  for (const LemmaALevel& level : fam.levels) {
    needed = std::max(needed, level.resolution);
    for (const Rect& r : level.u) needed = std::max(needed, static_cast<int>(r.x.size()));
  }
  return needed;
}

Rational pair_union_mass(const std::vector<char>& member, const JointMeasure& joint, int depth) {
  std::size_t leaves = std::size_t{1} << depth;
  std::vector<Bits> leaf_strings = strings_of_length(depth);
  Rational mass = 0;
  for (std::size_t row = 0; row < leaves; ++row) {
    for (std::size_t col = 0; col < leaves; ++col) {
      if (member[row * leaves + col]) mass += joint(leaf_strings[row], leaf_strings[col]);
    }
  }
  return mass;
}

}  // namespace

std::vector<Bits> canonical_open_set(std::vector<Bits> leaves) {
  std::set<Bits> s(leaves.begin(), leaves.end());
  bool merged = true;
  while (merged) {
    merged = false;
    for (const Bits& e : s) {
      if (e.empty() || e.back() != '0') continue;
      Bits sibling = e;
      sibling.back() = '1';
      if (s.count(sibling)) {
        Bits parent = e.substr(0, e.size() - 1);
        s.erase(sibling);
        s.erase(e);
        s.insert(parent);
        merged = true;
        break;
      }
    }
  }
  std::vector<Bits> out(s.begin(), s.end());
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

LemmaAReport verify_lemma_a(const LemmaAFamily& fam, const Bits& y_prefix, int depth) {
  LemmaAReport rep;
  rep.depth = depth;
  rep.y_prefix = y_prefix;
  std::size_t n_levels = fam.levels.size();
  rep.checks = {{"differences-disjoint", true},
                {"differences-vs-liminf", true},
                {"union-decomposition", true},
                {"liminf-section", true}};
  if (n_levels == 0) return rep;

  int needed = family_resolution(fam);
  if (depth < needed) {
    throw precondition_error("depth-exceeded", "family needs resolution " +
                                                   std::to_string(needed) + ", got depth " +
                                                   std::to_string(depth));
  }
  int last_resolution = fam.levels.back().resolution;
  if (static_cast<int>(y_prefix.size()) < last_resolution) {
    throw precondition_error("prefix-too-short",
                             "oracle prefix must reach the final resolution " +
                                 std::to_string(last_resolution));
  }

  std::size_t leaves = std::size_t{1} << depth;
  std::vector<std::vector<char>> member;
  for (const LemmaALevel& level : fam.levels) {
    member.push_back(rect_membership(level.u, depth));
  }
  const std::vector<char>& liminf = member.back();

  std::vector<std::vector<char>> diffs;  // U_n minus U_{n+1}, n = 1..N-1
  for (std::size_t n = 0; n + 1 < n_levels; ++n) {
    std::vector<char> d(leaves * leaves, 0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = member[n][i] && !member[n + 1][i];
    diffs.push_back(std::move(d));
  }

  for (std::size_t a = 0; a < diffs.size() && rep.checks[0].pass; ++a) {
    for (std::size_t b = a + 1; b < diffs.size() && rep.checks[0].pass; ++b) {
      for (std::size_t i = 0; i < leaves * leaves; ++i) {
        if (diffs[a][i] && diffs[b][i]) {
          rep.checks[0].pass = false;
          break;
        }
      }
    }
  }

  for (std::size_t a = 0; a < diffs.size() && rep.checks[1].pass; ++a) {
    for (std::size_t i = 0; i < leaves * leaves; ++i) {
      if (diffs[a][i] && liminf[i]) {
        rep.checks[1].pass = false;
        break;
      }
    }
  }

  for (std::size_t i = 0; i < leaves * leaves && rep.checks[2].pass; ++i) {
    bool in_union = false;
    for (std::size_t n = 0; n < n_levels && !in_union; ++n) in_union = member[n][i];
    bool in_decomp = liminf[i] != 0;
    for (std::size_t a = 0; a < diffs.size() && !in_decomp; ++a) in_decomp = diffs[a][i];
    if (in_union != in_decomp) rep.checks[2].pass = false;
  }

  // Final-level section at the oracle prefix vs the recomputed stage.
  std::vector<Bits> leaf_strings = strings_of_length(depth);
  std::vector<char> section(leaves, 0);
  for (const Rect& r : fam.levels.back().u) {
    if (!is_prefix(r.y, y_prefix)) continue;
    std::size_t row0 = leaf_ordinal(r.x) << (depth - static_cast<int>(r.x.size()));
    std::size_t rows = std::size_t{1} << (depth - static_cast<int>(r.x.size()));
    for (std::size_t row = row0; row < row0 + rows; ++row) section[row] = 1;
  }
  Bits key = y_prefix.substr(0, static_cast<std::size_t>(last_resolution));
  std::vector<Bits> stage;
  for (const LemmaAAtom& atom : fam.levels.back().atoms) {
    if (std::find(atom.pieces.begin(), atom.pieces.end(), key) == atom.pieces.end()) continue;
    if (atom.below_eps) stage = reduce_prefix_set(atom.section);
    break;
  }
  std::vector<char> recomputed(leaves, 0);
  for (std::size_t row = 0; row < leaves; ++row) {
    recomputed[row] = prefix_set_covers(stage, leaf_strings[row]) ? 1 : 0;
  }
  std::vector<Bits> section_leaves, recomputed_leaves;
  for (std::size_t row = 0; row < leaves; ++row) {
    if (section[row]) section_leaves.push_back(leaf_strings[row]);
    if (recomputed[row]) recomputed_leaves.push_back(leaf_strings[row]);
  }
  rep.checks[3].pass = section == recomputed;
  rep.liminf_section = canonical_open_set(section_leaves);
  rep.recomputed_section = canonical_open_set(recomputed_leaves);

  for (const LemmaACheck& c : rep.checks) {
    if (!c.pass) rep.pass = false;
  }
  return rep;
}

FEpsilonReport compute_f_epsilon(const LemmaAFamily& fam, const JointMeasure& joint,
                                 const Rational& eps_query) {
  if (eps_query <= 0) {
    throw precondition_error("no-valid-index",
                             "tail masses are non-negative; no level can fall below " +
                                 rational_str(eps_query));
  }
  FEpsilonReport rep;
  rep.tail_mass = 0;
  std::size_t n_levels = fam.levels.size();
  if (n_levels == 0) return rep;

  int depth = family_resolution(fam);
  std::size_t leaves = std::size_t{1} << depth;
  std::vector<Bits> leaf_strings = strings_of_length(depth);
  std::vector<std::vector<char>> member;
  for (const LemmaALevel& level : fam.levels) {
    member.push_back(rect_membership(level.u, depth));
  }

  // Tail mass at N = mass of the union of difference sets from N on;
  // accumulated from the last level downward (the final tail is empty).
  std::vector<Rational> tails(n_levels);
  tails[n_levels - 1] = 0;
  std::vector<char> tail_set(leaves * leaves, 0);
  Rational running = 0;
  for (std::size_t n = n_levels - 1; n-- > 0;) {
    for (std::size_t i = 0; i < leaves * leaves; ++i) {
      if (member[n][i] && !member[n + 1][i] && !tail_set[i]) {
        tail_set[i] = 1;
        running += joint(leaf_strings[i / leaves], leaf_strings[i % leaves]);
      }
    }
    tails[n] = running;
  }

  rep.candidate_tails.assign(tails.begin(), tails.end());
  rep.index = static_cast<long>(n_levels);
  for (std::size_t n = 0; n < n_levels; ++n) {
    if (tails[n] < eps_query) {
      rep.index = static_cast<long>(n) + 1;
      break;
    }
  }
  rep.tail_mass = tails[static_cast<std::size_t>(rep.index) - 1];
  return rep;
}

ExpandReport expand_via_lemma_a(const RelativizedTest& test, const JointMeasure& joint,
                                const Bits& y_prefix, const Rational& eps,
                                std::optional<long> f_eps) {
  ExpandReport rep;
  rep.y_prefix = y_prefix;
  rep.eps = eps;
  rep.bound = Rational(2) * eps;

  std::vector<Rect> enumerated;
  std::vector<Bits> items;
  for (const RelStage& stage : test.stages) {
    if (!is_prefix(stage.y, y_prefix)) continue;
    for (const Bits& item : stage.items) {
      enumerated.push_back({item, stage.y});
      items.push_back(item);
    }
  }

  rep.conditional_mass = 0;
  for (const Bits& item : reduce_prefix_set(items)) {
    rep.conditional_mass += joint.conditional(item, y_prefix);
  }
  if (!(rep.conditional_mass < eps)) {
    throw precondition_error("precondition-violated",
                             "conditional mass " + rational_str(rep.conditional_mass) +
                                 " of the enumerated set is not below " + rational_str(eps));
  }

  rep.w = nonoverlapping_cover(enumerated);
  rep.family = build_lemma_a_family(rep.w, eps, joint);

  if (f_eps) {
    if (*f_eps < 1) {
      throw precondition_error("precondition-violated",
                               "f_eps must be at least 1, got " + std::to_string(*f_eps));
    }
    rep.f_eps = *f_eps;
    rep.f_eps_given = true;
  } else {
    rep.f_eps = compute_f_epsilon(rep.family, joint, eps).index;
  }

  rep.tail_mass = 0;
  std::size_t n_levels = rep.family.levels.size();
  if (n_levels > 0 && static_cast<std::size_t>(rep.f_eps) <= n_levels) {
    int depth = family_resolution(rep.family);
    std::size_t leaves = std::size_t{1} << depth;
    std::vector<char> member(leaves * leaves, 0);
    for (std::size_t n = static_cast<std::size_t>(rep.f_eps) - 1; n < n_levels; ++n) {
      std::vector<char> level = rect_membership(rep.family.levels[n].u, depth);
      for (std::size_t i = 0; i < member.size(); ++i) member[i] = member[i] || level[i];
    }
    rep.tail_mass = pair_union_mass(member, joint, depth);
  }
  rep.pass = rep.tail_mass < rep.bound;
  return rep;
}

// --- main-theorem probes -----------------------------------------------------

std::optional<Rational> PartialMap::at(const Bits& x) const {
  auto it = entries.find(x);
  if (it != entries.end()) return it->second;
  return constant;
}

ProbeReport thmain_probe(const JointMeasure& P, const JointMeasure& Q, const Bits& x,
                         const Bits& y, const PartialMap& f_y) {
  for (std::size_t len = 0; len <= y.size(); ++len) {
    Bits prefix = y.substr(0, len);
    if (P("", prefix) == 0 || Q("", prefix) == 0) {
      throw precondition_error("null-condition",
                               "oracle prefix '" + prefix + "' carries no mass");
    }
  }

  ProbeReport rep;
  rep.x = x;
  rep.y = y;
  bool inf_seen = false;
  for (std::size_t len = 0; len <= x.size(); ++len) {
    Bits prefix = x.substr(0, len);
    Rational pc = P.conditional(prefix, y);
    Rational qc = Q.conditional(prefix, y);
    ExtendedRational r = ratio_of(qc, pc);
    rep.ratios.push_back(r);
    if (pc == 0) {
      rep.positivity_pass = false;
      rep.positivity_failures.push_back(prefix);
    }
    std::optional<Rational> f = f_y.at(prefix);
    if (f) {
      if (!rep.sup_f || *f > *rep.sup_f) rep.sup_f = *f;
      if (!ext_less(r, *f)) {
        rep.sandwich_pass = false;
        rep.sandwich_failures.push_back(prefix);
      }
    }
    if (!inf_seen || r < rep.running_inf) {
      rep.running_inf = r;
      inf_seen = true;
    }
  }
  rep.inf_positive = rep.running_inf.is_finite() ? rep.running_inf.value > 0 : true;
  rep.pass = rep.positivity_pass && rep.sandwich_pass && rep.inf_positive;
  if (rep.pass && rep.running_inf.is_finite()) {
    rep.c1 = rep.running_inf.value / 2;
  }
  if (rep.pass && rep.sup_f) rep.c2 = *rep.sup_f;
  return rep;
}

ThmainExpandReport thmain_expand(const ExpansionInstance& inst, int depth) {
  if (!(inst.c1 > 0) || !(inst.c2 > 0)) {
    throw precondition_error("invalid-bounds", "need 0 < c1 and 0 < c2");
  }
  if (inst.P("", inst.y) == 0 || inst.Q("", inst.y) == 0) {
    throw precondition_error("null-condition",
                             "oracle prefix '" + inst.y + "' carries no mass");
  }

  ThmainExpandReport rep;
  rep.depth = depth;
  rep.level = inst.level;

  std::vector<Bits> u_red = reduce_prefix_set(inst.u);
  rep.p_u_given_y = 0;
  for (const Bits& z : u_red) rep.p_u_given_y += inst.P.conditional(z, inst.y);
  rep.pre_bound = pow2(-inst.level) / inst.c2;
  if (!(rep.p_u_given_y < rep.pre_bound)) {
    throw precondition_error("precondition-violated",
                             "conditional mass " + rational_str(rep.p_u_given_y) +
                                 " of the prefix set is not below " +
                                 rational_str(rep.pre_bound));
  }

  // Extensions of the prefix set, filtered by f (V) and by the exact
  // conditional ratio (V').
  std::vector<Bits> v_raw, vprime_raw;
  for (int len = 0; len <= depth; ++len) {
    for (const Bits& node : strings_of_length(len)) {
      if (!prefix_set_covers(u_red, node)) continue;
      std::optional<Rational> f = inst.f_y.at(node);
      if (f && *f < inst.c2) v_raw.push_back(node);
      ExtendedRational ratio =
          ratio_of(inst.Q.conditional(node, inst.y), inst.P.conditional(node, inst.y));
      if (ext_less(ratio, inst.c2)) vprime_raw.push_back(node);
    }
  }
  rep.v = reduce_prefix_set(v_raw);
  rep.vprime = reduce_prefix_set(vprime_raw);

  rep.v_subset_vprime = true;
  for (const Bits& leaf : strings_of_length(depth)) {
    if (prefix_set_covers(rep.v, leaf) && !prefix_set_covers(rep.vprime, leaf)) {
      rep.v_subset_vprime = false;
      break;
    }
  }

  rep.q_v_given_y = 0;
  for (const Bits& node : rep.v) rep.q_v_given_y += inst.Q.conditional(node, inst.y);
  rep.q_vprime_given_y = 0;
  for (const Bits& node : rep.vprime) rep.q_vprime_given_y += inst.Q.conditional(node, inst.y);

  rep.checks.push_back({"q-v-le-q-vprime", rep.q_v_given_y, rep.q_vprime_given_y, "<=",
                        rep.q_v_given_y <= rep.q_vprime_given_y, false});
  {
    Rational rhs = inst.c2 * rep.p_u_given_y;
    bool vacuous = rep.vprime.empty();
    rep.checks.push_back({"q-vprime-lt-c2-p-u", rep.q_vprime_given_y, rhs, "<",
                          vacuous || rep.q_vprime_given_y < rhs, vacuous});
    rep.checks.push_back(
        {"c2-p-u-lt-level-bound", rhs, pow2(-inst.level), "<", rhs < pow2(-inst.level), false});
  }

  // Global cover: one rectangle per reduced piece, the oracle coordinate
  // chosen by brute force over all prefixes of y to minimize the Q-mass
  // (ties resolved toward the longest prefix).
  for (const Bits& node : rep.v) {
    Bits best_y;
    Rational best_q;
    bool seen = false;
    for (std::size_t len = 0; len <= inst.y.size(); ++len) {
      Bits candidate = inst.y.substr(0, len);
      Rational q = inst.Q(node, candidate);
      if (!seen || q <= best_q) {
        best_q = q;
        best_y = candidate;
        seen = true;
      }
    }
    rep.w.push_back({node, best_y});
  }
  rep.q_w = rect_set_measure(inst.Q, rep.w);
  rep.w_bound = Rational(11, 2) * pow2(-inst.level);
  rep.checks.push_back({"q-w-lt-cover-bound", rep.q_w, rep.w_bound, "<", rep.q_w < rep.w_bound,
                        false});

  for (const Rect& r : rep.w) {
    Rational pc = inst.P.conditional(r.x, r.y);
    Rational qc = inst.Q.conditional(r.x, r.y);
    if (pc < qc / inst.c1) rep.wprime.push_back(r);
  }
  rep.p_wprime = rect_set_measure(inst.P, rep.wprime);
  rep.q_wprime = rect_set_measure(inst.Q, rep.wprime);
  {
    bool vacuous = rep.wprime.empty();
    Rational rhs = rep.q_wprime / inst.c1;
    rep.checks.push_back({"p-wprime-lt-q-wprime-over-c1", rep.p_wprime, rhs, "<",
                          vacuous || rep.p_wprime < rhs, vacuous});
  }

  rep.pass = rep.v_subset_vprime;
  for (const ChainCheck& check : rep.checks) {
    if (!check.pass) rep.pass = false;
  }
  return rep;
}

}  // namespace randlab
