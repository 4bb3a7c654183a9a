// randlab: exact-rational verification toolkit for measures on the binary
// tree — consistency sweeps, likelihood-ratio martingale diagnostics and
// effective test checks, all reported as JSON with exact values.
//
// Exit codes: 0 = every check passed; 1 = at least one checked inequality
// failed (the report lists it); 2 = usage, parse, or precondition error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "randlab/example.hpp"
#include "randlab/io.hpp"
#include "randlab/kernels.hpp"
#include "randlab/martingale.hpp"
#include "randlab/testlab.hpp"

namespace {

using namespace randlab;

int max_depth_cap() {
  const char* env = std::getenv("RANDLAB_MAX_DEPTH");
  if (!env || !*env) return 16;
  try {
    return std::stoi(env);
  } catch (const std::exception&) {
    throw parse_error("RANDLAB_MAX_DEPTH must be an integer, got '" + std::string(env) + "'");
  }
}

void check_depth(long depth, const std::string& what) {
  if (depth < 0) throw precondition_error("depth-exceeded", what + " must be non-negative");
  int cap = max_depth_cap();
  if (depth > cap) {
    throw precondition_error("depth-exceeded", what + " " + std::to_string(depth) +
                                                   " exceeds RANDLAB_MAX_DEPTH " +
                                                   std::to_string(cap));
  }
}

struct Opts {
  std::string measure, p, q, joint;
  std::string family, w, relativized, u, f, scheme, machines;
  std::string h = "reciprocal";
  std::string process;
  std::string x, y, y_prefix;
  std::string flip;
  std::string epsilon, eps_query, threshold = "1/2", c, c_hi;
  std::string mode = "parallel";
  std::string out;
  int depth = -1, horizon = -1, n = 1;
  long level = 1, f_eps = -1;
  std::vector<long> thresholds, ks;
  bool strict = false;
};

SweepMode sweep_mode(const std::string& mode) {
  if (mode == "serial") return SweepMode::serial;
  if (mode == "parallel") return SweepMode::parallel;
  throw parse_error("mode must be 'serial' or 'parallel', got '" + mode + "'");
}

ExtendedRational ext_from_json(const Json& v) {
  if (v.is_string() && v.get<std::string>() == "inf") return ExtendedRational::inf();
  return ExtendedRational::finite(rational_from_json(v));
}

// Loads an auxiliary JSON file and records its content under `inputs` so
// every report can be re-verified offline from the report alone.
Json load_echoed(const std::string& path, Json* inputs, const std::string& key) {
  Json j = load_json_file(path);
  (*inputs)[key] = j;
  return j;
}

LoadedMeasure load_echoed_measure(const std::string& spec, Json* inputs, const std::string& key) {
  LoadedMeasure lm = load_measure_spec(spec, "");
  (*inputs)[key] = lm.echo;
  return lm;
}

void emit(const Json& report, const std::string& out) {
  std::string text = report.dump(2);
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw parse_error("cannot open output file '" + out + "'");
    f << text << "\n";
  }
}

// Wraps an operation report into the CLI envelope and returns the exit code.
int finish(const std::string& command, Json inputs, Json body, bool pass,
           const std::string& out,
           std::chrono::steady_clock::time_point start) {
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  body["command"] = command;
  body["inputs"] = std::move(inputs);
  body["pass"] = pass;
  body["timing_ms"] = static_cast<long>(elapsed);
  emit(body, out);
  return pass ? 0 : 1;
}

ExampleParams example_params(const Opts& o, Json* inputs) {
  Json spec{{"epsilon", o.epsilon}, {"machines", o.machines}};
  if (!o.flip.empty()) spec["flip"] = o.flip;
  ExampleParams params = example_params_from_json(spec, "");
  Json echo{{"epsilon", rational_str(params.epsilon)},
            {"machines", load_json_file(o.machines)},
            {"flip", params.flip == FlipStyle::balanced ? "balanced" : "both-low"}};
  (*inputs)["example"] = echo;
  return params;
}

int run_measure_check(const Opts& o, std::chrono::steady_clock::time_point start) {
  check_depth(o.depth, "--depth");
  SweepMode mode = sweep_mode(o.mode);  // validate even when the plain path ignores it
  Json inputs{{"depth", o.depth}, {"mode", o.mode}};
  LoadedMeasure lm = load_echoed_measure(o.measure, &inputs, "measure");
  ConsistencyReport rep = lm.plain ? check_consistency(*lm.plain, o.depth)
                                   : sweep_joint_consistency(*lm.joint, o.depth, mode);
  return finish("measure check", inputs, report_json(rep), rep.pass, o.out, start);
}

int run_measure_eval(const Opts& o, std::chrono::steady_clock::time_point start) {
  Bits x = parse_bits(o.x);
  check_depth(static_cast<long>(x.size()), "|x|");
  Json inputs{{"x", x}};
  LoadedMeasure lm = load_echoed_measure(o.measure, &inputs, "measure");
  Json body;
  if (lm.plain) {
    body["value"] = rational_str((*lm.plain)(x));
  } else {
    Bits y = parse_bits(o.y);
    check_depth(static_cast<long>(y.size()), "|y|");
    inputs["y"] = y;
    const JointMeasure& j = *lm.joint;
    Rational py = j("", y);
    body["value"] = rational_str(j(x, y));
    body["marginal_x"] = rational_str(j(x, ""));
    body["marginal_y"] = rational_str(py);
    if (py > 0) body["conditional"] = rational_str(j.conditional(x, y));
  }
  return finish("measure eval", inputs, body, true, o.out, start);
}

int run_conditional_trace(const Opts& o, std::chrono::steady_clock::time_point start) {
  Bits x = parse_bits(o.x);
  Bits y = parse_bits(o.y);
  check_depth(static_cast<long>(x.size()), "|x|");
  check_depth(static_cast<long>(y.size()), "|y|");
  Json inputs{{"x", x}, {"y", y}};
  LoadedMeasure lm = load_echoed_measure(o.measure, &inputs, "measure");
  JointMeasure j = require_joint(lm, "--measure");
  std::vector<Rational> trace = j.conditional_trace(x, y);
  Json values = Json::array();
  for (const Rational& v : trace) values.push_back(rational_str(v));
  Json body{{"x", x}, {"y", y}, {"trace", values}};
  return finish("conditional trace", inputs, body, true, o.out, start);
}

int run_example_build(const Opts& o, std::chrono::steady_clock::time_point start) {
  check_depth(o.depth, "--depth");
  Json inputs{{"depth", o.depth}};
  ExampleParams params = example_params(o, &inputs);
  JointMeasure j = build_example(params);
  std::vector<Bits> leaves = strings_of_length(o.depth);
  Json cells = Json::array();
  for (const Bits& y : leaves) {
    for (const Bits& x : leaves) {
      cells.push_back(Json{{"x", x}, {"y", y}, {"value", rational_str(j(x, y))}});
    }
  }
  Json body{{"depth", o.depth}, {"cells", cells}};
  return finish("example build", inputs, body, true, o.out, start);
}

int run_example_verify(const Opts& o, std::chrono::steady_clock::time_point start) {
  check_depth(o.depth, "--depth");
  Json inputs{{"depth", o.depth}};
  ExampleParams params = example_params(o, &inputs);
  JointMeasure j = build_example(params);
  ExampleInvariantsReport invariants = verify_example_invariants(j, o.depth);
  RatioBoundsReport bounds = verify_ratio_bounds(j, params.epsilon, o.depth);
  bool pass = invariants.pass && bounds.pass;
  Json body{{"invariants", report_json(invariants)}, {"ratio_bounds", report_json(bounds)}};
  return finish("example verify", inputs, body, pass, o.out, start);
}

int run_example_deviation(const Opts& o, std::chrono::steady_clock::time_point start) {
  Bits y = parse_bits(o.y);
  check_depth(static_cast<long>(y.size()), "|y|");
  Json inputs{{"n", o.n}, {"y", y}};
  ExampleParams params = example_params(o, &inputs);
  JointMeasure j = build_example(params);
  DeviationReport rep = conditional_deviation(j, o.n, y);
  return finish("example deviation", inputs, report_json(rep), true, o.out, start);
}

RatioProcess load_process(const Opts& o, const Measure& P, Json* inputs) {
  if (!o.process.empty()) {
    Json j = load_echoed(o.process, inputs, "process");
    std::map<Bits, ExtendedRational> values;
    for (const Json& e : j.contains("entries") ? j["entries"] : j) {
      values[parse_bits(e.at("x").get<std::string>())] = ext_from_json(e.at("value"));
    }
    return RatioProcess::from_table(std::move(values));
  }
  LoadedMeasure q = load_echoed_measure(o.q, inputs, "q");
  return RatioProcess::likelihood(P, require_plain(q, "--q"));
}

int run_submartingale(const Opts& o, std::chrono::steady_clock::time_point start) {
  check_depth(o.depth, "--depth");
  Json inputs{{"depth", o.depth}};
  Measure P = require_plain(load_echoed_measure(o.p, &inputs, "p"), "--p");
  RatioProcess proc = load_process(o, P, &inputs);
  SubmartingaleReport rep = check_submartingale(P, proc, o.depth);
  return finish("martingale submartingale", inputs, report_json(rep), rep.pass, o.out, start);
}

int run_doob(const Opts& o, std::chrono::steady_clock::time_point start) {
  check_depth(o.depth, "--depth");
  Json inputs{{"depth", o.depth}, {"thresholds", o.thresholds}};
  Measure P = require_plain(load_echoed_measure(o.p, &inputs, "p"), "--p");
  RatioProcess proc = load_process(o, P, &inputs);
  std::optional<ApproximationScheme> scheme;
  if (!o.scheme.empty()) scheme = scheme_from_json(load_echoed(o.scheme, &inputs, "scheme"));
  DoobReport rep = doob_check(P, proc, o.depth, o.thresholds, scheme ? &*scheme : nullptr);
  return finish("martingale doob", inputs, report_json(rep), rep.pass, o.out, start);
}

int run_approx(const Opts& o, std::chrono::steady_clock::time_point start) {
  check_depth(o.depth, "--depth");
  Json inputs{{"depth", o.depth}};
  Measure P = require_plain(load_echoed_measure(o.p, &inputs, "p"), "--p");
  RatioProcess proc = load_process(o, P, &inputs);
  ApproximationScheme scheme = scheme_from_json(load_echoed(o.scheme, &inputs, "scheme"));
  ApproxReport rep = check_effective_approximation(proc, scheme, o.depth);
  return finish("martingale approx", inputs, report_json(rep), rep.pass, o.out, start);
}

int run_boundedprob(const Opts& o, std::chrono::steady_clock::time_point start) {
  check_depth(o.depth, "--depth");
  Json inputs{{"depth", o.depth}, {"k", o.ks}, {"h", o.h}};
  Measure P = require_plain(load_echoed_measure(o.p, &inputs, "p"), "--p");
  Measure Q = require_plain(load_echoed_measure(o.q, &inputs, "q"), "--q");
  ProbBoundCertificate cert = o.h == "reciprocal"
                                  ? ProbBoundCertificate::reciprocal_map()
                                  : cert_from_json(load_echoed(o.h, &inputs, "h"));
  BoundedReport rep = check_bounded_in_probability(P, Q, cert, o.depth, o.ks);
  return finish("martingale boundedprob", inputs, report_json(rep), rep.pass, o.out, start);
}

int run_classify(const Opts& o, std::chrono::steady_clock::time_point start) {
  Bits x = parse_bits(o.x);
  check_depth(static_cast<long>(x.size()), "|x|");
  Json inputs{{"x", x}, {"threshold", o.threshold}};
  Measure P = require_plain(load_echoed_measure(o.p, &inputs, "p"), "--p");
  Measure Q = require_plain(load_echoed_measure(o.q, &inputs, "q"), "--q");
  ClassificationReport rep = classify(P, Q, x, parse_rational(o.threshold));
  return finish("martingale classify", inputs, report_json(rep), true, o.out, start);
}

int run_equiv(const Opts& o, std::chrono::steady_clock::time_point start) {
  check_depth(o.depth, "--depth");
  Json inputs{{"depth", o.depth}, {"c", o.c}, {"c_hi", o.c_hi}, {"strict", o.strict}};
  LoadedMeasure p = load_echoed_measure(o.p, &inputs, "p");
  LoadedMeasure q = load_echoed_measure(o.q, &inputs, "q");
  Rational c = parse_rational(o.c);
  Rational c_hi = parse_rational(o.c_hi);
  EquivalenceReport rep;
  if (p.plain && q.plain) {
    rep = equivalence_certificate(*p.plain, *q.plain, c, c_hi, o.depth, o.strict);
  } else if (p.joint && q.joint) {
    rep = equivalence_certificate(*p.joint, *q.joint, c, c_hi, o.depth, o.strict);
  } else {
    throw parse_error("--p and --q must both be plain measures or both be joint measures");
  }
  return finish("martingale equiv", inputs, report_json(rep), rep.pass, o.out, start);
}

int family_resolution_of(const TestFamily& fam) {
  std::size_t r = 0;
  for (const auto& level : fam.levels) {
    for (const Bits& s : level) r = std::max(r, s.size());
  }
  return static_cast<int>(r);
}

int run_blind(const Opts& o, std::chrono::steady_clock::time_point start) {
  Json inputs;
  Measure m = require_plain(load_echoed_measure(o.measure, &inputs, "measure"), "--measure");
  TestFamily fam = family_from_json(load_echoed(o.family, &inputs, "family"));
  check_depth(family_resolution_of(fam), "family resolution");
  BlindTestReport rep = verify_blind_test(m, fam);
  return finish("test blind", inputs, report_json(rep), rep.pass, o.out, start);
}

int run_solovay(const Opts& o, std::chrono::steady_clock::time_point start) {
  Json inputs;
  Measure m = require_plain(load_echoed_measure(o.measure, &inputs, "measure"), "--measure");
  TestFamily fam = family_from_json(load_echoed(o.family, &inputs, "family"));
  check_depth(family_resolution_of(fam), "family resolution");
  int horizon = o.horizon > 0 ? o.horizon : static_cast<int>(fam.levels.size());
  inputs["horizon"] = horizon;
  SolovayReport rep = verify_solovay(m, fam, horizon);
  return finish("test solovay", inputs, report_json(rep), rep.pass, o.out, start);
}

int run_lemma_a(const Opts& o, std::chrono::steady_clock::time_point start) {
  Json inputs{{"epsilon", o.epsilon}};
  JointMeasure j = require_joint(load_echoed_measure(o.joint, &inputs, "joint"), "--joint");
  std::vector<Rect> w = rects_from_json(load_echoed(o.w, &inputs, "w"));
  for (const Rect& r : w) {
    check_depth(static_cast<long>(r.x.size()), "rectangle x side");
    check_depth(static_cast<long>(r.y.size()), "rectangle y side");
  }
  LemmaAFamily fam = build_lemma_a_family(w, parse_rational(o.epsilon), j);
  Json body{{"family", report_json(fam)}};
  bool pass = true;
  if (!o.y_prefix.empty() || o.depth >= 0) {
    check_depth(o.depth, "--depth");
    Bits y_prefix = parse_bits(o.y_prefix);
    inputs["y_prefix"] = y_prefix;
    inputs["depth"] = o.depth;
    LemmaAReport rep = verify_lemma_a(fam, y_prefix, o.depth);
    body["verification"] = report_json(rep);
    pass = rep.pass;
  }
  return finish("test lemma-a", inputs, body, pass, o.out, start);
}

int run_f_epsilon(const Opts& o, std::chrono::steady_clock::time_point start) {
  Json inputs{{"epsilon", o.epsilon}};
  JointMeasure j = require_joint(load_echoed_measure(o.joint, &inputs, "joint"), "--joint");
  std::vector<Rect> w = rects_from_json(load_echoed(o.w, &inputs, "w"));
  LemmaAFamily fam = build_lemma_a_family(w, parse_rational(o.epsilon), j);
  Rational query = o.eps_query.empty() ? parse_rational(o.epsilon) : parse_rational(o.eps_query);
  inputs["eps_query"] = rational_str(query);
  FEpsilonReport rep = compute_f_epsilon(fam, j, query);
  return finish("test f-epsilon", inputs, report_json(rep), true, o.out, start);
}

int run_expand(const Opts& o, std::chrono::steady_clock::time_point start) {
  Bits y_prefix = parse_bits(o.y_prefix);
  check_depth(static_cast<long>(y_prefix.size()), "|y-prefix|");
  Json inputs{{"epsilon", o.epsilon}, {"y_prefix", y_prefix}};
  JointMeasure j = require_joint(load_echoed_measure(o.joint, &inputs, "joint"), "--joint");
  RelativizedTest test = relativized_from_json(load_echoed(o.relativized, &inputs, "relativized"));
  std::optional<long> f_eps;
  if (o.f_eps >= 0) {
    f_eps = o.f_eps;
    inputs["f_eps"] = o.f_eps;
  }
  ExpandReport rep = expand_via_lemma_a(test, j, y_prefix, parse_rational(o.epsilon), f_eps);
  return finish("test expand", inputs, report_json(rep), rep.pass, o.out, start);
}

int run_probe(const Opts& o, std::chrono::steady_clock::time_point start) {
  Bits x = parse_bits(o.x);
  Bits y = parse_bits(o.y);
  check_depth(static_cast<long>(x.size()), "|x|");
  check_depth(static_cast<long>(y.size()), "|y|");
  Json inputs{{"x", x}, {"y", y}};
  JointMeasure P = require_joint(load_echoed_measure(o.p, &inputs, "p"), "--p");
  JointMeasure Q = require_joint(load_echoed_measure(o.q, &inputs, "q"), "--q");
  PartialMap f = partial_map_from_json(load_echoed(o.f, &inputs, "f"));
  ProbeReport rep = thmain_probe(P, Q, x, y, f);
  return finish("test thmain-probe", inputs, report_json(rep), rep.pass, o.out, start);
}

int run_thmain_expand(const Opts& o, std::chrono::steady_clock::time_point start) {
  check_depth(o.depth, "--depth");
  Bits y = parse_bits(o.y);
  check_depth(static_cast<long>(y.size()), "|y|");
  Json inputs{{"y", y}, {"c1", o.c}, {"c2", o.c_hi}, {"level", o.level}, {"depth", o.depth}};
  ExpansionInstance inst{require_joint(load_echoed_measure(o.p, &inputs, "p"), "--p"),
                         require_joint(load_echoed_measure(o.q, &inputs, "q"), "--q"),
                         y,
                         bits_list_from_json(load_echoed(o.u, &inputs, "u")),
                         partial_map_from_json(load_echoed(o.f, &inputs, "f")),
                         parse_rational(o.c),
                         parse_rational(o.c_hi),
                         o.level};
  ThmainExpandReport rep = thmain_expand(inst, o.depth);
  return finish("test thmain-expand", inputs, report_json(rep), rep.pass, o.out, start);
}

}  // namespace

int main(int argc, char** argv) {
  Opts o;
  CLI::App app{"exact-rational randomness-test laboratory"};
  app.require_subcommand(1);

  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", o.out, "write the report here"); };

  // measure ------------------------------------------------------------------
  CLI::App* measure = app.add_subcommand("measure", "measure-level checks");
  measure->require_subcommand(1);
  CLI::App* m_check = measure->add_subcommand("check", "exact Kolmogorov consistency sweep");
  m_check->add_option("--measure", o.measure, "measure spec or file")->required();
  m_check->add_option("--depth", o.depth, "sweep depth")->required();
  m_check->add_option("--mode", o.mode, "serial | parallel");
  add_out(m_check);
  CLI::App* m_eval = measure->add_subcommand("eval", "evaluate a cylinder mass");
  m_eval->add_option("--measure", o.measure)->required();
  m_eval->add_option("--x", o.x, "x prefix");
  m_eval->add_option("--y", o.y, "y prefix (joint measures)");
  add_out(m_eval);

  // conditional ----------------------------------------------------------------
  CLI::App* conditional = app.add_subcommand("conditional", "conditional probabilities");
  conditional->require_subcommand(1);
  CLI::App* c_trace = conditional->add_subcommand("trace", "P(x|y') along prefixes y' of y");
  c_trace->add_option("--measure", o.measure)->required();
  c_trace->add_option("--x", o.x)->required();
  c_trace->add_option("--y", o.y)->required();
  add_out(c_trace);

  // example --------------------------------------------------------------------
  CLI::App* example = app.add_subcommand("example", "dependent-pair construction");
  example->require_subcommand(1);
  CLI::App* e_build = example->add_subcommand("build", "emit the joint cell table");
  CLI::App* e_verify = example->add_subcommand("verify", "invariants + ratio bounds");
  CLI::App* e_dev = example->add_subcommand("deviation", "conditional deviation along y");
  for (CLI::App* cmd : {e_build, e_verify, e_dev}) {
    cmd->add_option("--epsilon", o.epsilon, "perturbation size, in (0,1)")->required();
    cmd->add_option("--machines", o.machines, "machine table file")->required();
    cmd->add_option("--flip", o.flip, "balanced | both-low");
    add_out(cmd);
  }
  e_build->add_option("--depth", o.depth)->required();
  e_verify->add_option("--depth", o.depth)->required();
  e_dev->add_option("--n", o.n, "machine index")->required();
  e_dev->add_option("--y", o.y, "oracle prefix")->required();

  // martingale -------------------------------------------------------------
  CLI::App* mart = app.add_subcommand("martingale", "likelihood-ratio diagnostics");
  mart->require_subcommand(1);
  CLI::App* g_sub = mart->add_subcommand("submartingale", "one-step inequality sweep");
  CLI::App* g_doob = mart->add_subcommand("doob", "threshold inequality, exact");
  CLI::App* g_approx = mart->add_subcommand("approx", "two-sided log-scale sandwich");
  CLI::App* g_bnd = mart->add_subcommand("boundedprob", "tail-mass bound per threshold");
  CLI::App* g_cls = mart->add_subcommand("classify", "running ratio extremes on one branch");
  CLI::App* g_eq = mart->add_subcommand("equiv", "two-sided ratio certificate");
  for (CLI::App* cmd : {g_sub, g_doob, g_approx, g_bnd, g_cls, g_eq}) {
    cmd->add_option("--p", o.p, "base measure spec or file")->required();
    add_out(cmd);
  }
  for (CLI::App* cmd : {g_bnd, g_cls, g_eq}) cmd->add_option("--q", o.q)->required();
  for (CLI::App* cmd : {g_sub, g_doob, g_approx}) {
    cmd->add_option("--q", o.q, "ratio numerator measure");
    cmd->add_option("--process", o.process, "explicit ratio table file");
  }
  g_sub->add_option("--depth", o.depth)->required();
  g_doob->add_option("--depth", o.depth)->required();
  g_doob->add_option("--thresholds", o.thresholds, "threshold list")->required();
  g_doob->add_option("--scheme", o.scheme, "approximation scheme file (adds the set chain)");
  g_approx->add_option("--depth", o.depth)->required();
  g_approx->add_option("--scheme", o.scheme)->required();
  g_bnd->add_option("--depth", o.depth)->required();
  g_bnd->add_option("--k", o.ks, "threshold list")->required();
  g_bnd->add_option("--cert", o.h, "'reciprocal' or a bound-table file");
  g_cls->add_option("--x", o.x, "branch to follow")->required();
  g_cls->add_option("--threshold", o.threshold, "regime threshold");
  g_eq->add_option("--depth", o.depth)->required();
  g_eq->add_option("--c", o.c, "lower ratio bound")->required();
  g_eq->add_option("--c-hi", o.c_hi, "upper ratio bound")->required();
  g_eq->add_flag("--strict", o.strict, "strict comparisons");

  // test ---------------------------------------------------------------------
  CLI::App* test = app.add_subcommand("test", "effective test verification");
  test->require_subcommand(1);
  CLI::App* t_blind = test->add_subcommand("blind", "nested family with mass bounds");
  CLI::App* t_sol = test->add_subcommand("solovay", "summable level masses");
  for (CLI::App* cmd : {t_blind, t_sol}) {
    cmd->add_option("--measure", o.measure)->required();
    cmd->add_option("--family", o.family, "test family file")->required();
    add_out(cmd);
  }
  t_sol->add_option("--horizon", o.horizon, "levels to sum (default: all)");
  CLI::App* t_lem = test->add_subcommand("lemma-a", "staged decomposition family");
  CLI::App* t_feps = test->add_subcommand("f-epsilon", "least index with small tail");
  for (CLI::App* cmd : {t_lem, t_feps}) {
    cmd->add_option("--joint", o.joint, "joint measure spec or file")->required();
    cmd->add_option("--w", o.w, "non-overlapping rectangle file")->required();
    cmd->add_option("--epsilon", o.epsilon)->required();
    add_out(cmd);
  }
  t_lem->add_option("--y-prefix", o.y_prefix, "verify the decomposition at this oracle prefix");
  t_lem->add_option("--depth", o.depth, "leaf-enumeration depth for verification");
  t_feps->add_option("--eps-query", o.eps_query, "tail query (default: epsilon)");
  CLI::App* t_exp = test->add_subcommand("expand", "relativized test to global family");
  t_exp->add_option("--joint", o.joint)->required();
  t_exp->add_option("--relativized", o.relativized, "staged test file")->required();
  t_exp->add_option("--y-prefix", o.y_prefix)->required();
  t_exp->add_option("--epsilon", o.epsilon)->required();
  t_exp->add_option("--f-eps", o.f_eps, "level index (default: computed)");
  add_out(t_exp);
  CLI::App* t_probe = test->add_subcommand("thmain-probe", "expansion preconditions on a pair");
  t_probe->add_option("--p", o.p)->required();
  t_probe->add_option("--q", o.q)->required();
  t_probe->add_option("--x", o.x)->required();
  t_probe->add_option("--y", o.y)->required();
  t_probe->add_option("--f", o.f, "partial map file")->required();
  add_out(t_probe);
  CLI::App* t_texp = test->add_subcommand("thmain-expand", "conditional-to-global mass chain");
  t_texp->add_option("--p", o.p)->required();
  t_texp->add_option("--q", o.q)->required();
  t_texp->add_option("--y", o.y, "oracle prefix")->required();
  t_texp->add_option("--u", o.u, "prefix-set file")->required();
  t_texp->add_option("--f", o.f, "partial map file")->required();
  t_texp->add_option("--c1", o.c, "lower constant")->required();
  t_texp->add_option("--c2", o.c_hi, "upper constant")->required();
  t_texp->add_option("--level", o.level, "bound level (2^-level)");
  t_texp->add_option("--depth", o.depth)->required();
  add_out(t_texp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto start = std::chrono::steady_clock::now();
  try {
    if (m_check->parsed()) return run_measure_check(o, start);
    if (m_eval->parsed()) return run_measure_eval(o, start);
    if (c_trace->parsed()) return run_conditional_trace(o, start);
    if (e_build->parsed()) return run_example_build(o, start);
    if (e_verify->parsed()) return run_example_verify(o, start);
    if (e_dev->parsed()) return run_example_deviation(o, start);
    if (g_sub->parsed()) return run_submartingale(o, start);
    if (g_doob->parsed()) return run_doob(o, start);
    if (g_approx->parsed()) return run_approx(o, start);
    if (g_bnd->parsed()) return run_boundedprob(o, start);
    if (g_cls->parsed()) return run_classify(o, start);
    if (g_eq->parsed()) return run_equiv(o, start);
    if (t_blind->parsed()) return run_blind(o, start);
    if (t_sol->parsed()) return run_solovay(o, start);
    if (t_lem->parsed()) return run_lemma_a(o, start);
    if (t_feps->parsed()) return run_f_epsilon(o, start);
    if (t_exp->parsed()) return run_expand(o, start);
    if (t_probe->parsed()) return run_probe(o, start);
    if (t_texp->parsed()) return run_thmain_expand(o, start);
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand selected\n";
  return 2;
}
