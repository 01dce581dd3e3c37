#pragma once

#include "lpiso/certificate.hpp"
#include "lpiso/isometry.hpp"
#include "lpiso/presentation.hpp"
#include "lpiso/sigma.hpp"
#include "lpiso/synth.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace lpiso {

using Json = nlohmann::json;

// Every *_from_json throws ParseError on malformed input.

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);  // "n/d" strings or integers

Json to_json(const ComplexRational& z);
ComplexRational complex_from_json(const Json& j);

Json to_json(const Interval& x);
Interval interval_from_json(const Json& j);

Json to_json(const Exponent& p);
Exponent exponent_from_json(const Json& j);

Json to_json(const DyadicSet& s);
DyadicSet dyadic_set_from_json(const Json& j);

Json to_json(const StepFn& f);
StepFn stepfn_from_json(const Json& j);

Json node_to_json(const Node& nu);
Node node_from_json(const Json& j);

Json to_json(const NodeMap& m);
NodeMap nodemap_from_json(const Json& j);

Json to_json(const RationalVector& v);
RationalVector rational_vector_from_json(const Json& j);

Json to_json(const std::map<Node, RationalVector>& m);
std::map<Node, RationalVector> vectormap_from_json(const Json& j);

Json to_json(const std::map<Node, ComplexRational>& m);
std::map<Node, ComplexRational> coefficients_from_json(const Json& j);

/// {"p": "3/2", "kind": "stepfn", "generators": [...]},
/// {"p": ..., "kind": "measure_ring", "sets": [[["0","1/2"]], ...]},
/// {"p": ..., "kind": "dyadic"} or {"kind": "half_swapped_dyadic"}.
/// "oracle_only": true hides the generators. The parsed JSON is kept as the
/// presentation's descriptor. A missing "p" means p = 1.
Presentation presentation_from_json(const Json& j);

Json to_json(const Witness& w);
Json to_json(const SuccessCertificate& c);
SuccessCertificate certificate_from_json(const Json& j);

Json to_json(const Stage& s);

Json to_json(const RepairResult& r);

Json to_json(const IsometryData& d);
IsometryData isometry_data_from_json(const Json& j);

Json to_json(const VerificationReport& r);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace lpiso
