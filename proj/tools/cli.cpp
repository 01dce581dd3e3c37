#include "cli.hpp"

#include "lpiso/errors.hpp"
#include "lpiso/json_io.hpp"

#include <iostream>

namespace lpiso::cli {

namespace {

using nlohmann::json;

constexpr long kSigmaPrecision = 30;
constexpr long kIsometryPrecision = 8;

void need_inputs(const JobSpec& job, std::size_t n) {
    if (job.inputs.size() != n) {
        throw ParseError(job.verb + " takes " + std::to_string(n) + " input file(s), got " +
                         std::to_string(job.inputs.size()));
    }
}

json sigma_job(const JobSpec& job) {
    need_inputs(job, 1);
    const json in = read_json_file(job.inputs[0]);
    const Exponent p = exponent_from_json(in.contains("p") ? in.at("p") : json());
    const long k = job.precision.value_or(kSigmaPrecision);
    json out;
    out["p"] = to_json(p);
    out["precision"] = k;
    bool any = false;
    if (in.contains("f") || in.contains("g")) {
        if (!in.contains("f") || !in.contains("g")) {
            throw ParseError("sigma input needs both 'f' and 'g'");
        }
        const StepFn f = stepfn_from_json(in.at("f"));
        const StepFn g = stepfn_from_json(in.at("g"));
        const Interval s = sigma_vec(f, g, p, k);
        out["pair"] = {{"f", to_json(f)},
                       {"g", to_json(g)},
                       {"sigma", to_json(s)},
                       {"contains_zero", s.contains_zero()},
                       {"disjoint_exact", disjointly_supported(f, g)}};
        any = true;
    }
    if (in.contains("map")) {
        const NodeMap m = nodemap_from_json(in.at("map"));
        const Interval s = sigma_map(m, p, k);
        out["map"] = {{"values", to_json(m)},
                      {"sigma", to_json(s)},
                      {"contains_zero", s.contains_zero()},
                      {"separating_antitone_exact", is_separating_antitone_exact(m)},
                      {"dist_bound", to_json(dist_bound(m, p, k))}};
        any = true;
    }
    if (in.contains("phi") || in.contains("psi")) {
        if (!in.contains("phi") || !in.contains("psi")) {
            throw ParseError("repair needs both 'phi' and 'psi'");
        }
        const NodeMap phi = nodemap_from_json(in.at("phi"));
        const NodeMap psi = nodemap_from_json(in.at("psi"));
        const RepairResult r = repair(phi, psi, p, k);
        json rep = to_json(r);
        rep["phi"] = to_json(phi);
        rep["psi"] = to_json(psi);
        rep["separating_antitone_exact"] = is_separating_antitone_exact(r.repaired);
        out["repair"] = rep;
        any = true;
    }
    if (!any) {
        throw ParseError("sigma input has none of 'f'/'g', 'map', 'phi'/'psi'");
    }
    return out;
}

json stages_to_json(const std::vector<Stage>& stages) {
    json a = json::array();
    for (const auto& s : stages) {
        a.push_back(to_json(s));
    }
    return a;
}

// Stages are produced one at a time so a budget failure still reports the
// levels already certified.
Outcome disintegrate_job(const JobSpec& job) {
    need_inputs(job, 1);
    const Presentation P = presentation_from_json(read_json_file(job.inputs[0]));
    SynthOptions opt;
    opt.strategy = parse_strategy(job.strategy);
    Outcome o;
    json& out = o.report;
    out["presentation"] = P.descriptor();
    out["p"] = to_json(P.p());
    out["strategy"] = job.strategy;
    out["budget"] = job.budget;
    std::vector<Stage> stages;
    try {
        stages.push_back(seed_stage(P, opt));
        for (std::size_t level = 1; level <= job.budget; ++level) {
            const Stage& last = stages.back();
            stages.push_back(advance_stage(P, last, last.k + 1, level, opt));
        }
        check_chain(P, stages);
        out["complete"] = true;
    } catch (const BudgetExhaustedError& e) {
        out["complete"] = false;
        out["error"] = e.what();
        o.status = kBudget;
    }
    out["stages"] = stages_to_json(stages);
    out["certified_level"] = stages.empty() ? -1 : static_cast<long>(stages.back().n);
    return o;
}

Outcome isometry_job(const JobSpec& job) {
    need_inputs(job, 2);
    const Presentation A = presentation_from_json(read_json_file(job.inputs[0]));
    const Presentation B = presentation_from_json(read_json_file(job.inputs[1]));
    const long k = job.precision.value_or(kIsometryPrecision);
    IsometryOptions opt;
    opt.synth.strategy = parse_strategy(job.strategy);
    Outcome o;
    json& out = o.report;
    out["strategy"] = job.strategy;
    out["budget"] = job.budget;
    out["seed"] = job.seed;
    try {
        const IsometryData data = synthesize_isometry(A, B, k, job.budget, opt);
        out["isometry"] = to_json(data);
        const auto probes = random_probes(job.probes, data.images.size(), job.seed);
        out["verification"] = to_json(verify_isometry(B, data, A, probes, k));
    } catch (const BudgetExhaustedError& e) {
        out["source_presentation"] = A.descriptor();
        out["target_presentation"] = B.descriptor();
        out["error"] = e.what();
        o.status = kBudget;
    }
    return o;
}

struct Checks {
    json list = json::array();
    bool ok = true;
    void add(const std::string& what, bool pass, const std::string& reason = {}) {
        json c = {{"check", what}, {"ok", pass}};
        if (!pass && !reason.empty()) {
            c["reason"] = reason;
        }
        list.push_back(c);
        ok = ok && pass;
    }
};

void verify_disintegration(const json& rep, Checks& checks) {
    const Presentation P = presentation_from_json(rep.at("presentation"));
    long prev = -1;
    for (const auto& s : rep.at("stages")) {
        const long level = s.at("level").get<long>();
        const SuccessCertificate cert = certificate_from_json(s.at("certificate"));
        const CertificateCheck c = verify_certificate(cert, P);
        const std::string what = "stage level " + std::to_string(level);
        checks.add(what + " certificate", c.ok, c.reason);
        checks.add(what + " claims its level", cert.level == level,
                   "certificate level " + std::to_string(cert.level));
        checks.add(what + " follows level " + std::to_string(prev), level >= prev);
        prev = level;
    }
}

void verify_isometry_report(const json& rep, const JobSpec& job, Checks& checks) {
    const IsometryData data = isometry_data_from_json(rep.at("isometry"));
    const Presentation A = presentation_from_json(data.source_descriptor);
    const Presentation B = presentation_from_json(data.target_descriptor);
    const json& ver = rep.at("verification");
    std::vector<RationalVector> probes;
    for (const auto& pr : ver.at("probes")) {
        probes.push_back(rational_vector_from_json(pr.at("probe")));
    }
    const long k = data.precision;
    const VerificationReport again = verify_isometry(B, data, A, probes, k);
    const Rational tol = pow2(-(k - 1));
    for (std::size_t i = 0; i < again.probes.size(); ++i) {
        const ProbeReport& pr = again.probes[i];
        const Rational claimed = rational_from_json(ver.at("probes").at(i).at("norm_gap"));
        checks.add("probe " + std::to_string(i) + " norm gap reproduced", pr.norm_gap == claimed,
                   "recomputed " + to_string(pr.norm_gap));
        checks.add("probe " + std::to_string(i) + " norm gap within 2^-(k-1)", pr.norm_gap <= tol,
                   to_string(pr.norm_gap));
    }
    for (std::size_t i = 0; i < again.linearity.size(); ++i) {
        const Interval& r = again.linearity[i].residual;
        const Interval claimed = interval_from_json(ver.at("linearity").at(i).at("residual"));
        checks.add("linearity " + std::to_string(i) + " reproduced", r == claimed);
        checks.add("linearity " + std::to_string(i) + " within 2^-(k-1)", r.hi() <= tol,
                   to_string(r.hi()));
    }
    for (std::size_t j = 0; j < data.residuals.size(); ++j) {
        checks.add("generator " + std::to_string(j) + " residual below 2^-k",
                   data.residuals[j].total() < pow2(-k), to_string(data.residuals[j].total()));
    }
    (void)job;
}

void verify_sigma_report(const json& rep, Checks& checks) {
    const Exponent p = exponent_from_json(rep.at("p"));
    const long k = rep.at("precision").get<long>();
    if (rep.contains("pair")) {
        const json& pr = rep.at("pair");
        const Interval s =
            sigma_vec(stepfn_from_json(pr.at("f")), stepfn_from_json(pr.at("g")), p, k);
        checks.add("pair sigma reproduced", s == interval_from_json(pr.at("sigma")));
    }
    if (rep.contains("map")) {
        const json& m = rep.at("map");
        const NodeMap values = nodemap_from_json(m.at("values"));
        checks.add("map sigma reproduced",
                   sigma_map(values, p, k) == interval_from_json(m.at("sigma")));
        checks.add("map separation reproduced",
                   is_separating_antitone_exact(values) ==
                       m.at("separating_antitone_exact").get<bool>());
    }
    if (rep.contains("repair")) {
        const json& r = rep.at("repair");
        const RepairResult again =
            repair(nodemap_from_json(r.at("phi")), nodemap_from_json(r.at("psi")), p, k);
        checks.add("repair reproduced", again.repaired == nodemap_from_json(r.at("repaired")));
        checks.add("repair separating antitone", is_separating_antitone_exact(again.repaired));
        checks.add("repair bound", again.bound_certified);
    }
}

Outcome verify_job(const JobSpec& job) {
    need_inputs(job, 1);
    const json rep = read_json_file(job.inputs[0]);
    Checks checks;
    std::string kind;
    try {
        if (rep.contains("form") && rep.contains("witnesses")) {
            kind = "certificate";
            const SuccessCertificate cert = certificate_from_json(rep);
            if (cert.vector_form) {
                throw ParseError("a vector-form certificate needs its presentation; verify the report");
            }
            const CertificateCheck c = verify_certificate(cert);
            checks.add("certificate", c.ok, c.reason);
        } else {
            kind = rep.at("verb").get<std::string>();
            if (kind == "disintegrate") {
                verify_disintegration(rep, checks);
            } else if (kind == "isometry") {
                if (!rep.contains("isometry")) {
                    throw ParseError("isometry report has no isometry section");
                }
                verify_isometry_report(rep, job, checks);
            } else if (kind == "sigma") {
                verify_sigma_report(rep, checks);
            } else {
                throw ParseError("cannot verify a '" + kind + "' report");
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
    Outcome o;
    o.report = {{"verified", kind}, {"checks", checks.list}, {"ok", checks.ok}};
    o.status = checks.ok ? kOk : kFailed;
    return o;
}

}  // namespace

Outcome execute(const JobSpec& job) {
    Outcome o;
    try {
        if (job.precision && *job.precision < 0) {
            throw ParseError("precision must be non-negative");
        }
        if (job.verb == "sigma") {
            o.report = sigma_job(job);
        } else if (job.verb == "disintegrate") {
            o = disintegrate_job(job);
        } else if (job.verb == "isometry") {
            o = isometry_job(job);
        } else if (job.verb == "verify") {
            o = verify_job(job);
        } else {
            throw ParseError("unknown verb '" + job.verb + "'");
        }
    } catch (const ParseError& e) {
        o = {kParse, {{"error", e.what()}}};
    } catch (const BudgetExhaustedError& e) {
        o = {kBudget, {{"error", e.what()}}};
    } catch (const PEqualsTwoError& e) {
        o = {kPEqualsTwo, {{"error", e.what()}}};
    } catch (const ExponentMismatchError& e) {
        o = {kPEqualsTwo, {{"error", e.what()}}};
    } catch (const std::exception& e) {
        o = {kFailed, {{"error", e.what()}}};
    }
    o.report["verb"] = job.verb;
    o.report["status"] = o.status;
    return o;
}

int run(const JobSpec& job) {
    const Outcome o = execute(job);
    try {
        if (job.report.empty()) {
            std::cout << o.report.dump(2) << '\n';
        } else {
            write_json_file(job.report, o.report);
        }
    } catch (const std::exception& e) {
        std::cerr << "lpiso: " << e.what() << '\n';
        return kFailed;
    }
    if (o.report.contains("error")) {
        std::cerr << "lpiso: " << o.report.at("error").get<std::string>() << '\n';
    }
    return o.status;
}

}  // namespace lpiso::cli
