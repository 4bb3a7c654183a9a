#include "randlab/io.hpp"

#include <filesystem>
#include <fstream>

namespace randlab {

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw parse_error("missing field '" + std::string(key) + "' in " + j.dump());
  }
  return *it;
}

Bits bits_from_json(const Json& v) {
  if (!v.is_string()) throw parse_error("expected a bitstring, got " + v.dump());
  return parse_bits(v.get<std::string>());
}

int int_from_json(const Json& v, const char* what) {
  if (!v.is_number_integer()) {
    throw parse_error(std::string("expected an integer for ") + what + ", got " + v.dump());
  }
  return v.get<int>();
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw parse_error("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

Rational rational_from_json(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw parse_error("expected a rational (\"num/den\" or integer), got " + v.dump());
}

MachineTable machine_table_from_json(const Json& j) {
  if (!j.is_object()) throw parse_error("machine table must be an object, got " + j.dump());
  int count = int_from_json(field(j, "machine_count"), "machine_count");
  if (j.contains("triggers")) {
    std::vector<std::pair<int, Bits>> triggers;
    for (const Json& t : field(j, "triggers")) {
      triggers.push_back({int_from_json(field(t, "n"), "trigger n"),
                          bits_from_json(field(t, "prefix"))});
    }
    return MachineTable::from_triggers(count, triggers);
  }
  if (j.contains("entries")) {
    std::vector<MachineTable::Entry> entries;
    for (const Json& e : field(j, "entries")) {
      MachineTable::Entry entry;
      entry.machine = int_from_json(field(e, "n"), "entry n");
      entry.y = bits_from_json(field(e, "y"));
      entry.halted = field(e, "halted").get<bool>();
      entries.push_back(entry);
    }
    return MachineTable::from_entries(count, entries);
  }
  return MachineTable::empty(count);
}

ExampleParams example_params_from_json(const Json& j, const std::string& base_dir) {
  ExampleParams params;
  params.epsilon = rational_from_json(field(j, "epsilon"));
  const Json& machines = field(j, "machines");
  if (machines.is_string()) {
    params.table = machine_table_from_json(load_json_file(resolve(base_dir, machines)));
  } else {
    params.table = machine_table_from_json(machines);
  }
  if (j.contains("flip")) {
    std::string flip = j["flip"].get<std::string>();
    if (flip == "balanced") {
      params.flip = FlipStyle::balanced;
    } else if (flip == "both-low") {
      params.flip = FlipStyle::both_low;
    } else {
      throw parse_error("unknown flip style '" + flip + "'");
    }
  }
  return params;
}

namespace {

Measure table_measure_from_json(const Json& j) {
  int depth = int_from_json(field(j, "depth"), "depth");
  std::map<Bits, Rational> leaves;
  for (const auto& [key, value] : field(j, "leaves").items()) {
    leaves[parse_bits(key)] = rational_from_json(value);
  }
  return Measure::table(depth, leaves);
}

JointMeasure joint_table_from_json(const Json& j) {
  int dx = int_from_json(field(j, "depth_x"), "depth_x");
  int dy = int_from_json(field(j, "depth_y"), "depth_y");
  std::map<std::pair<Bits, Bits>, Rational> leaves;
  for (const Json& e : field(j, "leaves")) {
    leaves[{bits_from_json(field(e, "x")), bits_from_json(field(e, "y"))}] =
        rational_from_json(field(e, "value"));
  }
  return JointMeasure::table(dx, dy, leaves);
}

LoadedMeasure measure_from_json(const Json& j, const std::string& base_dir);

LoadedMeasure sub_measure(const Json& v, const std::string& base_dir) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "uniform" || s.rfind("bernoulli:", 0) == 0) return load_measure_spec(s, base_dir);
    return measure_from_json(load_json_file(resolve(base_dir, s)), base_dir);
  }
  return measure_from_json(v, base_dir);
}

LoadedMeasure measure_from_json(const Json& j, const std::string& base_dir) {
  if (!j.is_object() || !j.contains("kind")) {
    throw parse_error("measure description needs a 'kind' field: " + j.dump());
  }
  std::string kind = j["kind"].get<std::string>();
  LoadedMeasure lm;
  if (kind == "uniform") {
    lm.plain = Measure::uniform();
    lm.echo = Json{{"kind", "uniform"}};
  } else if (kind == "bernoulli") {
    Rational p = rational_from_json(field(j, "p"));
    lm.plain = Measure::bernoulli(p);
    lm.echo = Json{{"kind", "bernoulli"}, {"p", rational_str(p)}};
  } else if (kind == "table") {
    lm.plain = table_measure_from_json(j);
    lm.echo = j;
  } else if (kind == "joint-table") {
    lm.joint = joint_table_from_json(j);
    lm.echo = j;
  } else if (kind == "product") {
    LoadedMeasure x = sub_measure(field(j, "x"), base_dir);
    LoadedMeasure y = sub_measure(field(j, "y"), base_dir);
    lm.joint = JointMeasure::product(require_plain(x, "product x factor"),
                                     require_plain(y, "product y factor"));
    lm.echo = Json{{"kind", "product"}, {"x", x.echo}, {"y", y.echo}};
  } else if (kind == "example") {
    ExampleParams params = example_params_from_json(j, base_dir);
    lm.joint = JointMeasure::example(params);
    Json machines = Json::object();
    machines["machine_count"] = params.table.machine_count();
    Json triggers = Json::array();
    for (int n = 1; n <= params.table.machine_count(); ++n) {
      for (const Bits& prefix : params.table.triggers()[static_cast<std::size_t>(n) - 1]) {
        triggers.push_back(Json{{"n", n}, {"prefix", prefix}});
      }
    }
    machines["triggers"] = triggers;
    lm.echo = Json{{"kind", "example"},
                   {"epsilon", rational_str(params.epsilon)},
                   {"machines", machines},
                   {"flip", params.flip == FlipStyle::balanced ? "balanced" : "both-low"}};
  } else {
    throw parse_error("unknown measure kind '" + kind + "'");
  }
  return lm;
}

}  // namespace

LoadedMeasure load_measure_spec(const std::string& spec, const std::string& base_dir) {
  if (spec == "uniform") {
    LoadedMeasure lm;
    lm.plain = Measure::uniform();
    lm.echo = Json{{"kind", "uniform"}};
    return lm;
  }
  if (spec.rfind("bernoulli:", 0) == 0) {
    Rational p = parse_rational(spec.substr(10));
    LoadedMeasure lm;
    lm.plain = Measure::bernoulli(p);
    lm.echo = Json{{"kind", "bernoulli"}, {"p", rational_str(p)}};
    return lm;
  }
  std::string path = resolve(base_dir, spec);
  Json j = load_json_file(path);
  return measure_from_json(j, std::filesystem::path(path).parent_path().string());
}

Measure require_plain(const LoadedMeasure& lm, const std::string& what) {
  if (!lm.plain) {
    throw parse_error(what + " must be a plain measure (uniform | bernoulli | table), not a "
                      "joint description");
  }
  return *lm.plain;
}

JointMeasure require_joint(const LoadedMeasure& lm, const std::string& what) {
  if (!lm.joint) {
    throw parse_error(what +
                      " must be a joint measure (product | example | joint-table), not a plain "
                      "measure description");
  }
  return *lm.joint;
}

TestFamily family_from_json(const Json& j) {
  TestFamily fam;
  for (const Json& level : field(j, "levels")) {
    std::vector<Bits> elems;
    for (const Json& e : level) elems.push_back(bits_from_json(e));
    fam.levels.push_back(std::move(elems));
  }
  if (j.contains("bound") && j["bound"] != Json("2^-n")) {
    const Json& b = j["bound"];
    if (!b.is_array()) {
      throw parse_error("bound must be \"2^-n\" or an array of rationals, got " + b.dump());
    }
    fam.default_bound = false;
    for (const Json& v : b) fam.bounds.push_back(rational_from_json(v));
    if (fam.bounds.size() < fam.levels.size()) {
      throw parse_error("explicit bound list shorter than the level list");
    }
  }
  return fam;
}

RelativizedTest relativized_from_json(const Json& j) {
  RelativizedTest test;
  for (const Json& s : field(j, "stages")) {
    RelStage stage;
    stage.y = bits_from_json(field(s, "y"));
    for (const Json& item : field(s, "items")) stage.items.push_back(bits_from_json(item));
    test.stages.push_back(std::move(stage));
  }
  return test;
}

std::vector<Rect> rects_from_json(const Json& j) {
  if (!j.is_array()) throw parse_error("rectangle list must be an array, got " + j.dump());
  std::vector<Rect> rects;
  for (const Json& pair : j) {
    if (!pair.is_array() || pair.size() != 2) {
      throw parse_error("each rectangle must be a [x, y] pair, got " + pair.dump());
    }
    rects.push_back({bits_from_json(pair[0]), bits_from_json(pair[1])});
  }
  return rects;
}

ApproximationScheme scheme_from_json(const Json& j) {
  ApproximationScheme scheme;
  const Json& g = field(j, "g");
  if (g.is_string()) {
    if (g.get<std::string>() != "dyadic-log") {
      throw parse_error("g tag must be \"dyadic-log\" or a table object, got " + g.dump());
    }
  } else {
    scheme.dyadic_log = false;
    for (const Json& e : field(g, "table")) {
      scheme.g_table.push_back(
          {rational_from_json(field(e, "arg")), rational_from_json(field(e, "value"))});
    }
  }
  if (j.contains("c")) scheme.c = field(j, "c").get<long>();
  if (j.contains("f")) {
    for (const Json& e : j["f"]) {
      Bits x = bits_from_json(field(e, "x"));
      int n = e.contains("n") ? int_from_json(e["n"], "f entry n") : static_cast<int>(x.size());
      if (n != static_cast<int>(x.size())) {
        throw parse_error("f entry index must equal the bitstring length: " + e.dump());
      }
      scheme.f[{x, n}] = rational_from_json(field(e, "value"));
    }
  }
  return scheme;
}

ProbBoundCertificate cert_from_json(const Json& j) {
  const Json& h = field(j, "h");
  if (h.is_string()) {
    if (h.get<std::string>() != "reciprocal") {
      throw parse_error("h tag must be \"reciprocal\" or a table array, got " + h.dump());
    }
    return ProbBoundCertificate::reciprocal_map();
  }
  std::vector<std::pair<long, Rational>> entries;
  for (const Json& e : h) {
    entries.push_back({field(e, "k").get<long>(), rational_from_json(field(e, "value"))});
  }
  return ProbBoundCertificate::from_table(std::move(entries));
}

PartialMap partial_map_from_json(const Json& j) {
  PartialMap map;
  if (j.contains("constant")) map.constant = rational_from_json(j["constant"]);
  if (j.contains("entries")) {
    for (const Json& e : j["entries"]) {
      map.entries[bits_from_json(field(e, "x"))] = rational_from_json(field(e, "value"));
    }
  }
  return map;
}

std::vector<Bits> bits_list_from_json(const Json& j) {
  if (!j.is_array()) throw parse_error("expected an array of bitstrings, got " + j.dump());
  std::vector<Bits> out;
  for (const Json& e : j) out.push_back(bits_from_json(e));
  return out;
}

// --- serialization -----------------------------------------------------------

namespace {

Json rect_json(const Rect& r) { return Json::array({r.x, r.y}); }

Json rects_json(const std::vector<Rect>& rects) {
  Json out = Json::array();
  for (const Rect& r : rects) out.push_back(rect_json(r));
  return out;
}

Json rationals_json(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const Rational& v : values) out.push_back(rational_str(v));
  return out;
}

Json extendeds_json(const std::vector<ExtendedRational>& values) {
  Json out = Json::array();
  for (const ExtendedRational& v : values) out.push_back(ext_str(v));
  return out;
}

}  // namespace

Json check_record(const std::string& name, const Rational& lhs, const Rational& rhs,
                  const std::string& relation, bool pass) {
  return Json{{"name", name},
              {"lhs", rational_str(lhs)},
              {"rhs", rational_str(rhs)},
              {"relation", relation},
              {"pass", pass}};
}

Json report_json(const ConsistencyReport& r) {
  Json violations = Json::array();
  for (const ConsistencyViolation& v : r.violations) {
    violations.push_back(Json{{"x", v.x},
                              {"y", v.y},
                              {"what", v.what},
                              {"lhs", rational_str(v.lhs)},
                              {"rhs", rational_str(v.rhs)}});
  }
  return Json{{"pass", r.pass},
              {"depth", r.depth},
              {"nodes_checked", r.nodes_checked},
              {"violations", violations}};
}

Json report_json(const RatioBoundsReport& r) {
  Json violations = Json::array();
  for (const RatioViolation& v : r.violations) {
    violations.push_back(Json{{"x", v.x}, {"y", v.y}, {"ratio", rational_str(v.ratio)}});
  }
  return Json{{"pass", r.pass},
              {"epsilon", rational_str(r.epsilon)},
              {"depth", r.depth},
              {"min_ratio", rational_str(r.min_ratio)},
              {"max_ratio", rational_str(r.max_ratio)},
              {"min_x", r.min_x},
              {"min_y", r.min_y},
              {"max_x", r.max_x},
              {"max_y", r.max_y},
              {"low_extreme_attained", r.low_extreme_attained},
              {"high_extreme_attained", r.high_extreme_attained},
              {"pairs_checked", r.pairs_checked},
              {"violations", violations}};
}

Json report_json(const DeviationReport& r) {
  return Json{{"deviates", r.deviates},
              {"cell", r.cell},
              {"y", r.y},
              {"expected", rational_str(r.expected)},
              {"trace", rationals_json(r.trace)}};
}

Json report_json(const ExampleInvariantsReport& r) {
  Json marginal = Json::array();
  for (const MarginalViolation& v : r.marginal_violations) {
    marginal.push_back(Json{{"axis", v.axis},
                            {"node", v.node},
                            {"value", rational_str(v.value)},
                            {"expected", rational_str(v.expected)}});
  }
  Json proportionality = Json::array();
  for (const ProportionalityViolation& v : r.proportionality_violations) {
    proportionality.push_back(Json{{"cell", v.cell},
                                   {"x", v.x},
                                   {"y", v.y},
                                   {"value", rational_str(v.value)},
                                   {"expected", rational_str(v.expected)}});
  }
  Json flips = Json::array();
  for (const FlipViolation& v : r.flip_violations) {
    flips.push_back(Json{{"y", v.y}, {"what", v.what}});
  }
  return Json{{"pass", r.pass},
              {"depth", r.depth},
              {"additivity", report_json(r.additivity)},
              {"marginal_violations", marginal},
              {"proportionality_violations", proportionality},
              {"flip_violations", flips}};
}

Json report_json(const SubmartingaleReport& r) {
  Json violations = Json::array();
  for (const SubmartingaleViolation& v : r.violations) {
    violations.push_back(Json{{"x", v.x}, {"lhs", ext_str(v.lhs)}, {"rhs", ext_str(v.rhs)}});
  }
  return Json{{"pass", r.pass},
              {"martingale", r.martingale},
              {"depth", r.depth},
              {"nodes_checked", r.nodes_checked},
              {"null_nodes_skipped", r.null_nodes_skipped},
              {"violations", violations}};
}

Json report_json(const DoobReport& r) {
  Json records = Json::array();
  for (const DoobRecord& rec : r.records) {
    Json item{{"m", rec.m},
              {"lhs", rational_str(rec.mass)},
              {"rhs", rec.bound_infinite ? std::string("inf") : rational_str(rec.bound)},
              {"relation", "<="},
              {"expectation", ext_str(rec.expectation)},
              {"bound_infinite", rec.bound_infinite},
              {"pass", rec.pass},
              {"witnesses", rec.witnesses}};
    if (rec.chain) {
      item["chain"] = Json{{"mass_v", rational_str(rec.chain->mass_v)},
                           {"mass_u", rational_str(rec.chain->mass_u)},
                           {"mass_uprime", rational_str(rec.chain->mass_uprime)},
                           {"v_le_u", rec.chain->v_le_u},
                           {"u_eq_uprime", rec.chain->u_eq_uprime},
                           {"uprime_eq_m", rec.chain->uprime_eq_m},
                           {"pass", rec.chain->pass}};
    }
    records.push_back(std::move(item));
  }
  return Json{{"pass", r.pass}, {"depth", r.depth}, {"records", records}};
}

Json report_json(const ApproxReport& r) {
  Json violations = Json::array();
  for (const ApproxViolation& v : r.violations) {
    Json item{{"x", v.x}, {"side", v.side}, {"f_defined", v.f_defined}};
    if (v.f_defined) item["f"] = rational_str(v.f_value);
    violations.push_back(std::move(item));
  }
  Json out{{"pass", r.pass},
           {"depth", r.depth},
           {"c", r.c},
           {"strong", r.strong},
           {"nodes_checked", r.nodes_checked},
           {"has_tightest", r.has_tightest},
           {"violations", violations}};
  if (r.has_tightest) out["tightest_c"] = r.tightest_c;
  return out;
}

Json report_json(const BoundedReport& r) {
  Json records = Json::array();
  for (const BoundedRecord& rec : r.records) {
    records.push_back(Json{{"k", rec.k},
                           {"mass", rational_str(rec.mass)},
                           {"bound", rational_str(rec.bound)},
                           {"pass", rec.pass},
                           {"margin", rational_str(rec.margin)}});
  }
  return Json{{"pass", r.pass}, {"depth", r.depth}, {"records", records}};
}

Json report_json(const ClassificationReport& r) {
  return Json{{"x", r.x},
              {"threshold", rational_str(r.threshold)},
              {"ratios", extendeds_json(r.ratios)},
              {"running_min", extendeds_json(r.running_min)},
              {"running_max", extendeds_json(r.running_max)},
              {"regime", r.regime}};
}

Json report_json(const EquivalenceReport& r) {
  Json violations = Json::array();
  for (const EquivViolation& v : r.violations) {
    violations.push_back(
        Json{{"x", v.x}, {"y", v.y}, {"ratio", ext_str(v.ratio)}, {"side", v.side}});
  }
  return Json{{"pass", r.pass},
              {"depth", r.depth},
              {"strict", r.strict},
              {"joint", r.joint},
              {"c", rational_str(r.c_lo)},
              {"c_hi", rational_str(r.c_hi)},
              {"min_ratio", ext_str(r.min_ratio)},
              {"max_ratio", ext_str(r.max_ratio)},
              {"min_x", r.min_x},
              {"min_y", r.min_y},
              {"max_x", r.max_x},
              {"max_y", r.max_y},
              {"nodes_checked", r.nodes_checked},
              {"violations", violations}};
}

Json report_json(const BlindTestReport& r) {
  Json levels = Json::array();
  for (const BlindLevelRecord& rec : r.levels) {
    levels.push_back(Json{{"n", rec.n},
                          {"mass", rational_str(rec.mass)},
                          {"bound", rational_str(rec.bound)},
                          {"mass_ok", rec.mass_ok},
                          {"nested", rec.nested}});
  }
  return Json{{"pass", r.pass}, {"levels", levels}};
}

Json report_json(const SolovayReport& r) {
  return Json{{"pass", r.pass},
              {"horizon", r.horizon},
              {"masses", rationals_json(r.masses)},
              {"partial_sums", rationals_json(r.partial_sums)},
              {"total", rational_str(r.total)},
              {"majorant_violations", r.majorant_violations}};
}

Json report_json(const LemmaAFamily& r) {
  Json levels = Json::array();
  for (const LemmaALevel& level : r.levels) {
    Json atoms = Json::array();
    for (const LemmaAAtom& atom : level.atoms) {
      atoms.push_back(Json{{"pieces", atom.pieces},
                           {"section", atom.section},
                           {"weight", rational_str(atom.weight)},
                           {"section_mass", rational_str(atom.section_mass)},
                           {"below_eps", atom.below_eps},
                           {"null_atom", atom.null_atom}});
    }
    levels.push_back(Json{{"n", level.n},
                          {"resolution", level.resolution},
                          {"atoms", atoms},
                          {"u", rects_json(level.u)}});
  }
  return Json{{"epsilon", rational_str(r.epsilon)},
              {"def_u_reading", "sum-over-section"},
              {"w", rects_json(r.w)},
              {"levels", levels}};
}

Json report_json(const LemmaAReport& r) {
  Json checks = Json::array();
  for (const LemmaACheck& c : r.checks) {
    checks.push_back(Json{{"name", c.name}, {"pass", c.pass}});
  }
  return Json{{"pass", r.pass},
              {"depth", r.depth},
              {"y_prefix", r.y_prefix},
              {"def_u_reading", "sum-over-section"},
              {"checks", checks},
              {"liminf_section", r.liminf_section},
              {"recomputed_section", r.recomputed_section}};
}

Json report_json(const FEpsilonReport& r) {
  return Json{{"index", r.index},
              {"tail_mass", rational_str(r.tail_mass)},
              {"candidate_tails", rationals_json(r.candidate_tails)}};
}

Json report_json(const ExpandReport& r) {
  Json witness = Json::array();
  for (std::size_t n = static_cast<std::size_t>(r.f_eps);
       n <= r.family.levels.size() && n >= 1; ++n) {
    witness.push_back(rects_json(r.family.levels[n - 1].u));
  }
  return Json{{"pass", r.pass},
              {"y_prefix", r.y_prefix},
              {"eps", rational_str(r.eps)},
              {"conditional_mass", rational_str(r.conditional_mass)},
              {"f_eps", r.f_eps},
              {"f_eps_given", r.f_eps_given},
              {"tail_mass", rational_str(r.tail_mass)},
              {"bound", rational_str(r.bound)},
              {"w", rects_json(r.w)},
              {"witness_levels", witness},
              {"family", report_json(r.family)}};
}

Json report_json(const ProbeReport& r) {
  Json out{{"pass", r.pass},
           {"x", r.x},
           {"y", r.y},
           {"ratios", extendeds_json(r.ratios)},
           {"positivity_pass", r.positivity_pass},
           {"positivity_failures", r.positivity_failures},
           {"sandwich_pass", r.sandwich_pass},
           {"sandwich_failures", r.sandwich_failures},
           {"running_inf", ext_str(r.running_inf)},
           {"inf_positive", r.inf_positive}};
  if (r.sup_f) out["sup_f"] = rational_str(*r.sup_f);
  if (r.c1) out["c1"] = rational_str(*r.c1);
  if (r.c2) out["c2"] = rational_str(*r.c2);
  return out;
}

Json report_json(const ThmainExpandReport& r) {
  Json checks = Json::array();
  for (const ChainCheck& c : r.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"lhs", rational_str(c.lhs)},
                          {"rhs", rational_str(c.rhs)},
                          {"relation", c.relation},
                          {"pass", c.pass},
                          {"vacuous", c.vacuous}});
  }
  return Json{{"pass", r.pass},
              {"depth", r.depth},
              {"level", r.level},
              {"p_u_given_y", rational_str(r.p_u_given_y)},
              {"pre_bound", rational_str(r.pre_bound)},
              {"v", r.v},
              {"vprime", r.vprime},
              {"v_subset_vprime", r.v_subset_vprime},
              {"q_v_given_y", rational_str(r.q_v_given_y)},
              {"q_vprime_given_y", rational_str(r.q_vprime_given_y)},
              {"checks", checks},
              {"w", rects_json(r.w)},
              {"wprime", rects_json(r.wprime)},
              {"q_w", rational_str(r.q_w)},
              {"w_bound", rational_str(r.w_bound)},
              {"p_wprime", rational_str(r.p_wprime)},
              {"q_wprime", rational_str(r.q_wprime)}};
}

}  // namespace randlab
