#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "randlab/example.hpp"
#include "randlab/joint.hpp"
#include "randlab/martingale.hpp"
#include "randlab/measure.hpp"
#include "randlab/testlab.hpp"

namespace randlab {

using Json = nlohmann::json;

// --- loading -----------------------------------------------------------------

Json load_json_file(const std::string& path);

// Accepts "num/den", "num", or a JSON integer.
Rational rational_from_json(const Json& v);

// A measure argument names either a plain measure on one tree or a joint
// on the product tree; `echo` is the fully-inlined description (referenced
// files resolved) for report round-tripping.
struct LoadedMeasure {
  std::optional<Measure> plain;
  std::optional<JointMeasure> joint;
  Json echo;
};

// Spec forms: the aliases "uniform" and "bernoulli:<p>", or a path to a
// JSON file with a "kind" field (uniform | bernoulli | table for plain
// measures; product | example | joint-table for joints). Relative paths
// inside files resolve against the referencing file's directory.
LoadedMeasure load_measure_spec(const std::string& spec, const std::string& base_dir);

Measure require_plain(const LoadedMeasure& lm, const std::string& what);
JointMeasure require_joint(const LoadedMeasure& lm, const std::string& what);

MachineTable machine_table_from_json(const Json& j);
ExampleParams example_params_from_json(const Json& j, const std::string& base_dir);
TestFamily family_from_json(const Json& j);
RelativizedTest relativized_from_json(const Json& j);
std::vector<Rect> rects_from_json(const Json& j);
ApproximationScheme scheme_from_json(const Json& j);
ProbBoundCertificate cert_from_json(const Json& j);
PartialMap partial_map_from_json(const Json& j);
std::vector<Bits> bits_list_from_json(const Json& j);

// --- report serialization ----------------------------------------------------
//
// Every value is exact ("num/den" strings, "inf" for the infinite ratio);
// no field ever holds a rounded number.

Json check_record(const std::string& name, const Rational& lhs, const Rational& rhs,
                  const std::string& relation, bool pass);

Json report_json(const ConsistencyReport& r);
Json report_json(const RatioBoundsReport& r);
Json report_json(const DeviationReport& r);
Json report_json(const ExampleInvariantsReport& r);
Json report_json(const SubmartingaleReport& r);
Json report_json(const DoobReport& r);
Json report_json(const ApproxReport& r);
Json report_json(const BoundedReport& r);
Json report_json(const ClassificationReport& r);
Json report_json(const EquivalenceReport& r);
Json report_json(const BlindTestReport& r);
Json report_json(const SolovayReport& r);
Json report_json(const LemmaAFamily& r);
Json report_json(const LemmaAReport& r);
Json report_json(const FEpsilonReport& r);
Json report_json(const ExpandReport& r);
Json report_json(const ProbeReport& r);
Json report_json(const ThmainExpandReport& r);

}  // namespace randlab
