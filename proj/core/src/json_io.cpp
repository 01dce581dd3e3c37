#include "lpiso/json_io.hpp"

#include "lpiso/errors.hpp"

#include <fstream>
#include <sstream>

namespace lpiso {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

const Json& array_field(const Json& j, const char* key) {
    const Json& a = field(j, key);
    if (!a.is_array()) {
        throw ParseError(std::string("field '") + key + "' is not an array");
    }
    return a;
}

std::size_t index_from_json(const Json& j) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        throw ParseError("expected a non-negative integer index");
    }
    return j.get<std::size_t>();
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
    if (j.is_string()) {
        return parse_rational(j.get<std::string>());
    }
    if (j.is_number_integer()) {
        return Rational(j.get<long>());
    }
    throw ParseError("expected a rational string \"num/den\"");
}

Json to_json(const ComplexRational& z) { return {{"re", to_string(z.re)}, {"im", to_string(z.im)}}; }

ComplexRational complex_from_json(const Json& j) {
    if (j.is_string() || j.is_number_integer()) {
        return ComplexRational(rational_from_json(j));
    }
    const Rational im = j.is_object() && j.contains("im") ? rational_from_json(j.at("im")) : 0;
    return {rational_from_json(field(j, "re")), im};
}

Json to_json(const Interval& x) { return {{"lo", to_string(x.lo())}, {"hi", to_string(x.hi())}}; }

Interval interval_from_json(const Json& j) {
    const Rational lo = rational_from_json(field(j, "lo"));
    const Rational hi = rational_from_json(field(j, "hi"));
    if (lo > hi) {
        throw ParseError("interval with lo > hi");
    }
    return Interval(lo, hi);
}

Json to_json(const Exponent& p) {
    if (p.is_rational()) {
        return to_string(p.value());
    }
    return to_json(p.refine(64));
}

Exponent exponent_from_json(const Json& j) {
    const Rational p = rational_from_json(j);
    if (p < 1) {
        throw ParseError("exponent must be at least 1");
    }
    return Exponent(p);
}

Json to_json(const DyadicSet& s) {
    Json a = Json::array();
    for (const auto& sp : s.spans()) {
        a.push_back({to_string(sp.lo), to_string(sp.hi)});
    }
    return a;
}

DyadicSet dyadic_set_from_json(const Json& j) {
    if (!j.is_array()) {
        throw ParseError("a set is an array of [lo, hi] pairs");
    }
    std::vector<Span> spans;
    for (const auto& e : j) {
        Rational lo;
        Rational hi;
        if (e.is_array() && e.size() == 2) {
            lo = rational_from_json(e[0]);
            hi = rational_from_json(e[1]);
        } else {
            lo = rational_from_json(field(e, "lo"));
            hi = rational_from_json(field(e, "hi"));
        }
        if (sgn(lo) < 0 || hi > 1 || lo > hi) {
            throw ParseError("span outside [0,1] or reversed");
        }
        spans.push_back({lo, hi});
    }
    return DyadicSet(std::move(spans));
}

Json to_json(const StepFn& f) {
    Json pieces = Json::array();
    for (const auto& pc : f.pieces()) {
        pieces.push_back({{"lo", to_string(pc.lo)},
                          {"hi", to_string(pc.hi)},
                          {"re", to_string(pc.value.re)},
                          {"im", to_string(pc.value.im)}});
    }
    return {{"pieces", pieces}};
}

StepFn stepfn_from_json(const Json& j) {
    std::vector<StepFn::Piece> pieces;
    for (const auto& e : array_field(j, "pieces")) {
        StepFn::Piece pc;
        pc.lo = rational_from_json(field(e, "lo"));
        pc.hi = rational_from_json(field(e, "hi"));
        if (sgn(pc.lo) < 0 || pc.hi > 1 || pc.lo > pc.hi) {
            throw ParseError("piece outside [0,1] or reversed");
        }
        pc.value = {rational_from_json(field(e, "re")),
                    e.contains("im") ? rational_from_json(e.at("im")) : Rational(0)};
        pieces.push_back(std::move(pc));
    }
    return StepFn::from_pieces(pieces);
}

Json node_to_json(const Node& nu) { return Json(std::vector<std::uint32_t>(nu.begin(), nu.end())); }

Node node_from_json(const Json& j) {
    if (!j.is_array()) {
        throw ParseError("a node is an array of naturals");
    }
    Node nu;
    for (const auto& e : j) {
        const std::size_t v = index_from_json(e);
        if (v > 0xffffffffu) {
            throw ParseError("node entry too large");
        }
        nu.push_back(static_cast<std::uint32_t>(v));
    }
    return nu;
}

Json to_json(const NodeMap& m) {
    Json a = Json::array();
    for (const auto& [nu, f] : m) {
        a.push_back({{"node", node_to_json(nu)}, {"value", to_json(f)}});
    }
    return a;
}

NodeMap nodemap_from_json(const Json& j) {
    if (!j.is_array()) {
        throw ParseError("a node map is an array of {node, value}");
    }
    NodeMap m;
    for (const auto& e : j) {
        m[node_from_json(field(e, "node"))] = stepfn_from_json(field(e, "value"));
    }
    return m;
}

Json to_json(const RationalVector& v) {
    Json a = Json::array();
    for (const auto& [n, c] : v.terms()) {
        a.push_back({{"index", n}, {"re", to_string(c.re)}, {"im", to_string(c.im)}});
    }
    return {{"terms", a}};
}

RationalVector rational_vector_from_json(const Json& j) {
    RationalVector v;
    for (const auto& e : array_field(j, "terms")) {
        v.add(index_from_json(field(e, "index")), complex_from_json(e));
    }
    return v;
}

Json to_json(const std::map<Node, RationalVector>& m) {
    Json a = Json::array();
    for (const auto& [nu, v] : m) {
        a.push_back({{"node", node_to_json(nu)}, {"vector", to_json(v)}});
    }
    return a;
}

std::map<Node, RationalVector> vectormap_from_json(const Json& j) {
    if (!j.is_array()) {
        throw ParseError("a vector map is an array of {node, vector}");
    }
    std::map<Node, RationalVector> m;
    for (const auto& e : j) {
        m[node_from_json(field(e, "node"))] = rational_vector_from_json(field(e, "vector"));
    }
    return m;
}

Json to_json(const std::map<Node, ComplexRational>& m) {
    Json a = Json::array();
    for (const auto& [nu, c] : m) {
        a.push_back({{"node", node_to_json(nu)}, {"re", to_string(c.re)}, {"im", to_string(c.im)}});
    }
    return a;
}

std::map<Node, ComplexRational> coefficients_from_json(const Json& j) {
    if (!j.is_array()) {
        throw ParseError("coefficients are an array of {node, re, im}");
    }
    std::map<Node, ComplexRational> m;
    for (const auto& e : j) {
        m[node_from_json(field(e, "node"))] = complex_from_json(e);
    }
    return m;
}

Presentation presentation_from_json(const Json& j) {
    try {
        if (!j.is_object()) {
            throw ParseError("a presentation is a JSON object");
        }
        // The exponent may be left to the job; it then defaults to 1.
        const Exponent p = j.contains("p") ? exponent_from_json(j.at("p")) : Exponent(Rational(1));
        const std::string kind = field(j, "kind").get<std::string>();
        std::optional<Presentation> P;
        if (kind == "stepfn") {
            std::vector<StepFn> gens;
            for (const auto& g : array_field(j, "generators")) {
                gens.push_back(stepfn_from_json(g));
            }
            P = from_generators(p, std::move(gens), j.value("name", std::string("stepfn")));
        } else if (kind == "measure_ring") {
            std::vector<DyadicSet> sets;
            for (const auto& s : array_field(j, "sets")) {
                sets.push_back(dyadic_set_from_json(s));
            }
            P = induced_presentation(MeasureRing::finite(std::move(sets), "measure_ring"), p);
        } else if (kind == "dyadic") {
            P = standard_dyadic(p);
        } else if (kind == "half_swapped_dyadic") {
            P = half_swapped_dyadic(p);
        } else {
            throw ParseError("unknown presentation kind '" + kind + "'");
        }
        if (j.value("oracle_only", false)) {
            P = oracle_only(*P);
        }
        return P->with_descriptor(j);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("presentation: ") + e.what());
    }
}

Json to_json(const Witness& w) {
    return {{"beta", to_json(w.beta)}, {"residual", to_json(w.residual)}};
}

Json to_json(const SuccessCertificate& c) {
    Json j;
    j["p"] = to_json(c.p);
    j["level"] = c.level;
    j["form"] = c.vector_form ? "vector" : "stepfn";
    if (c.vector_form) {
        j["vectors"] = to_json(c.vectors);
    } else {
        j["values"] = to_json(c.values);
        Json t = Json::array();
        for (const auto& f : c.targets) {
            t.push_back(to_json(f));
        }
        j["targets"] = t;
    }
    Json w = Json::array();
    for (std::size_t i = 0; i < c.betas.size(); ++i) {
        w.push_back({{"generator", c.target_indices.at(i)},
                     {"beta", to_json(c.betas[i])},
                     {"residual", to_json(c.residuals.at(i))}});
    }
    j["witnesses"] = w;
    Json d = Json::array();
    for (const auto& [nu, x] : c.defects) {
        d.push_back({{"node", node_to_json(nu)}, {"bound", to_json(x)}});
    }
    j["defects"] = d;
    return j;
}

SuccessCertificate certificate_from_json(const Json& j) {
    try {
        SuccessCertificate c;
        c.p = exponent_from_json(field(j, "p"));
        c.level = field(j, "level").get<long>();
        const std::string form = field(j, "form").get<std::string>();
        if (form == "vector") {
            c.vector_form = true;
            c.vectors = vectormap_from_json(field(j, "vectors"));
        } else if (form == "stepfn") {
            c.values = nodemap_from_json(field(j, "values"));
            for (const auto& t : array_field(j, "targets")) {
                c.targets.push_back(stepfn_from_json(t));
            }
        } else {
            throw ParseError("unknown certificate form '" + form + "'");
        }
        for (const auto& w : array_field(j, "witnesses")) {
            c.target_indices.push_back(index_from_json(field(w, "generator")));
            c.betas.push_back(coefficients_from_json(field(w, "beta")));
            c.residuals.push_back(interval_from_json(field(w, "residual")));
        }
        for (const auto& d : array_field(j, "defects")) {
            c.defects[node_from_json(field(d, "node"))] = interval_from_json(field(d, "bound"));
        }
        return c;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("certificate: ") + e.what());
    }
}

Json to_json(const Stage& s) {
    Json j;
    j["level"] = s.n;
    j["margin_exponent"] = s.k;
    j["form"] = s.vector_form ? "vector" : "stepfn";
    if (!s.phi.empty()) {
        j["values"] = to_json(s.phi);
    }
    if (s.vector_form) {
        j["vectors"] = to_json(s.coords);
    }
    j["certificate"] = to_json(s.cert);
    return j;
}

Json to_json(const RepairResult& r) {
    Json j;
    j["repaired"] = to_json(r.repaired);
    j["lhs"] = to_json(r.lhs);
    j["rhs"] = to_json(r.rhs);
    j["bound_certified"] = r.bound_certified;
    j["precision"] = r.precision;
    return j;
}

Json to_json(const IsometryData& d) {
    Json j;
    j["p"] = to_json(d.p);
    j["source"] = d.source;
    j["target"] = d.target;
    j["source_presentation"] = d.source_descriptor;
    j["target_presentation"] = d.target_descriptor;
    j["precision"] = d.precision;
    j["source_level"] = d.source_level;
    j["target_level"] = d.target_level;
    Json imgs = Json::array();
    for (std::size_t i = 0; i < d.images.size(); ++i) {
        const ResidualParts& r = d.residuals.at(i);
        imgs.push_back({{"generator", i},
                        {"image", to_json(d.images[i])},
                        {"residual",
                         {{"total", to_json(r.total())},
                          {"source_span", to_json(r.source_span)},
                          {"rescaling", to_json(r.rescaling)},
                          {"target_span", to_json(r.target_span)},
                          {"target_coords", to_json(r.target_coords)}}}});
    }
    j["images"] = imgs;
    return j;
}

IsometryData isometry_data_from_json(const Json& j) {
    try {
        IsometryData d;
        d.p = exponent_from_json(field(j, "p"));
        d.source = field(j, "source").get<std::string>();
        d.target = field(j, "target").get<std::string>();
        d.source_descriptor = j.value("source_presentation", Json());
        d.target_descriptor = j.value("target_presentation", Json());
        d.precision = field(j, "precision").get<long>();
        d.source_level = j.value("source_level", std::size_t{0});
        d.target_level = j.value("target_level", std::size_t{0});
        for (const auto& e : array_field(j, "images")) {
            if (index_from_json(field(e, "generator")) != d.images.size()) {
                throw ParseError("images must be listed by generator index");
            }
            d.images.push_back(rational_vector_from_json(field(e, "image")));
            const Json& r = field(e, "residual");
            ResidualParts parts;
            parts.source_span = rational_from_json(field(r, "source_span"));
            parts.rescaling = rational_from_json(field(r, "rescaling"));
            parts.target_span = rational_from_json(field(r, "target_span"));
            parts.target_coords = rational_from_json(field(r, "target_coords"));
            d.residuals.push_back(parts);
        }
        return d;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("isometry data: ") + e.what());
    }
}

Json to_json(const VerificationReport& r) {
    Json j;
    Json probes = Json::array();
    for (const auto& p : r.probes) {
        probes.push_back({{"probe", to_json(p.probe)},
                          {"norm_source", to_json(p.norm_source)},
                          {"norm_target", to_json(p.norm_target)},
                          {"norm_gap", to_json(p.norm_gap)},
                          {"predicted_gap", to_json(p.predicted_gap)}});
    }
    j["probes"] = probes;
    Json lin = Json::array();
    for (const auto& l : r.linearity) {
        lin.push_back({{"first", l.first},
                       {"second", l.second},
                       {"a", to_json(l.a)},
                       {"b", to_json(l.b)},
                       {"residual", to_json(l.residual)}});
    }
    j["linearity"] = lin;
    j["max_norm_gap"] = to_json(r.max_norm_gap);
    j["max_linearity"] = to_json(r.max_linearity);
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << j.dump(2) << '\n';
}

}  // namespace lpiso
