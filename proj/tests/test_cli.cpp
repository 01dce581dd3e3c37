#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"
#include "lpiso/json_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace lpiso;
using lpiso::cli::execute;
using lpiso::cli::JobSpec;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("lpiso_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string put(const std::string& name, const std::string& text) {
    const fs::path path = workdir() / name;
    std::ofstream(path) << text;
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

JobSpec job(std::string verb, std::vector<std::string> inputs) {
    JobSpec j;
    j.verb = std::move(verb);
    j.inputs = std::move(inputs);
    return j;
}

int shell(const std::string& args) {
    const std::string cmd = std::string(LPISO_BINARY) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kDisjoint = R"({"p": "3/2",
  "f": {"pieces": [{"lo": "0", "hi": "1/2", "re": "1"}]},
  "g": {"pieces": [{"lo": "1/2", "hi": "1", "re": "2", "im": "1"}]}})";

const char* kOverlap = R"({"p": "1",
  "f": {"pieces": [{"lo": "0", "hi": "3/4", "re": "1"}]},
  "g": {"pieces": [{"lo": "1/2", "hi": "1", "re": "1"}]}})";

const char* kDyadic1 = R"({"p": "1", "kind": "dyadic"})";
const char* kDyadic3 = R"({"p": "3", "kind": "dyadic"})";
const char* kSwapped1 = R"({"p": "1", "kind": "half_swapped_dyadic"})";
const char* kDyadic2 = R"({"p": "2", "kind": "dyadic"})";

}  // namespace

TEST_CASE("sigma job on disjoint step functions") {
    const auto o = execute(job("sigma", {put("disjoint.json", kDisjoint)}));
    CHECK(o.status == cli::kOk);
    CHECK(o.report.at("pair").at("contains_zero") == true);
    CHECK(o.report.at("pair").at("disjoint_exact") == true);
    CHECK(o.report.at("precision") == 30);
    const Interval s = interval_from_json(o.report.at("pair").at("sigma"));
    CHECK(s.contains_zero());
    CHECK(s.width() <= pow2(-30));
}

TEST_CASE("sigma job on overlapping step functions") {
    JobSpec j = job("sigma", {put("overlap.json", kOverlap)});
    j.precision = 12;
    const auto o = execute(j);
    CHECK(o.status == cli::kOk);
    CHECK(o.report.at("pair").at("contains_zero") == false);
    CHECK(o.report.at("pair").at("disjoint_exact") == false);
}

TEST_CASE("sigma job on maps and repairs") {
    const char* text = R"({"p": "3",
      "map": [{"node": [0], "value": {"pieces": [{"lo": "0", "hi": "1", "re": "1"}]}},
              {"node": [0, 0], "value": {"pieces": [{"lo": "0", "hi": "1/2", "re": "1"}]}}],
      "phi": [{"node": [0], "value": {"pieces": [{"lo": "0", "hi": "1", "re": "1"}]}}],
      "psi": [{"node": [0], "value": {"pieces": [{"lo": "0", "hi": "1", "re": "1"}]}},
              {"node": [0, 0], "value": {"pieces": [{"lo": "0", "hi": "1/2", "re": "1"}]}}]})";
    const auto o = execute(job("sigma", {put("map.json", text)}));
    CHECK(o.status == cli::kOk);
    CHECK(o.report.at("map").at("separating_antitone_exact") == true);
    CHECK(o.report.at("map").at("contains_zero") == true);
    CHECK(o.report.at("repair").at("separating_antitone_exact") == true);
    CHECK(o.report.at("repair").at("bound_certified") == true);

    const std::string report = put("map_report.json", o.report.dump(2));
    const auto v = execute(job("verify", {report}));
    CHECK(v.status == cli::kOk);
    CHECK(v.report.at("ok") == true);
}

TEST_CASE("disintegrate job certifies level 2") {
    JobSpec j = job("disintegrate", {put("d1.json", kDyadic1)});
    j.budget = 2;
    const auto o = execute(j);
    CHECK(o.status == cli::kOk);
    CHECK(o.report.at("complete") == true);
    CHECK(o.report.at("certified_level") == 2);
    const auto& stages = o.report.at("stages");
    REQUIRE(stages.size() == 3);
    CHECK(stages.at(2).at("certificate").at("level").get<long>() >= 2);
    // Each stage certificate re-verifies from its JSON alone.
    for (const auto& s : stages) {
        CHECK(verify_certificate(certificate_from_json(s.at("certificate"))).ok);
    }

    const std::string report = put("d1_report.json", o.report.dump(2));
    const auto v = execute(job("verify", {report}));
    CHECK(v.status == cli::kOk);
    CHECK(v.report.at("verified") == "disintegrate");

    // A standalone certificate is accepted as well.
    const std::string cert = put("cert.json", stages.at(2).at("certificate").dump());
    CHECK(execute(job("verify", {cert})).status == cli::kOk);
}

TEST_CASE("disintegrate job with the dovetail strategy on an oracle presentation") {
    JobSpec j = job("disintegrate",
                    {put("toy.json", R"({"p": "1", "kind": "stepfn", "oracle_only": true,
                       "generators": [{"pieces": [{"lo": "0", "hi": "1/2", "re": "1"}]},
                                      {"pieces": [{"lo": "1/2", "hi": "1", "re": "1"}]}]})")});
    j.budget = 1;
    j.strategy = "dovetail";
    const auto o = execute(j);
    CHECK(o.status == cli::kOk);
    CHECK(o.report.at("stages").at(1).at("form") == "vector");
    const std::string report = put("toy_report.json", o.report.dump());
    CHECK(execute(job("verify", {report})).status == cli::kOk);
}

TEST_CASE("budget exhaustion keeps a partial report") {
    JobSpec j = job("disintegrate",
                    {put("zero.json", R"({"p": "1", "kind": "stepfn",
                       "generators": [{"pieces": []}]})")});
    const auto o = execute(j);
    CHECK(o.status == cli::kBudget);
    CHECK(o.report.at("complete") == false);
    CHECK(o.report.at("stages").empty());
    CHECK(o.report.contains("error"));
}

TEST_CASE("isometry job and verification") {
    JobSpec j = job("isometry", {put("a.json", kDyadic1), put("b.json", kSwapped1)});
    j.budget = 3;
    j.probes = 8;
    const auto o = execute(j);
    REQUIRE(o.status == cli::kOk);
    CHECK(o.report.at("isometry").at("images").size() == 3);
    CHECK(o.report.at("verification").at("probes").size() == 8);

    const std::string report = put("iso_report.json", o.report.dump(2));
    const auto v = execute(job("verify", {report}));
    CHECK(v.status == cli::kOk);
    CHECK(v.report.at("ok") == true);

    // Tampering with an image makes verification fail.
    auto bad = o.report;
    bad["isometry"]["images"][0]["image"] = to_json(RationalVector::unit(0, ComplexRational(2)));
    const auto vb = execute(job("verify", {put("iso_bad.json", bad.dump())}));
    CHECK(vb.status == cli::kFailed);
    CHECK(vb.report.at("ok") == false);
}

TEST_CASE("status codes") {
    CHECK(execute(job("isometry", {put("a1.json", kDyadic1), put("a3.json", kDyadic3)})).status ==
          cli::kPEqualsTwo);
    CHECK(execute(job("isometry", {put("p2a.json", kDyadic2), put("p2b.json", kDyadic2)})).status ==
          cli::kPEqualsTwo);
    CHECK(execute(job("sigma", {put("broken.json", "{ nope")})).status == cli::kParse);
    CHECK(execute(job("sigma", {(workdir() / "missing.json").string()})).status == cli::kParse);
    CHECK(execute(job("sigma", {put("empty.json", R"({"p": "1"})")})).status == cli::kParse);
    CHECK(execute(job("disintegrate", {put("kind.json", R"({"p": "1", "kind": "haar"})")})).status ==
          cli::kParse);
    CHECK(execute(job("isometry", {put("one.json", kDyadic1)})).status == cli::kParse);
    JobSpec neg = job("sigma", {put("disjoint2.json", kDisjoint)});
    neg.precision = -1;
    CHECK(execute(neg).status == cli::kParse);
    const auto o = execute(job("frobnicate", {}));
    CHECK(o.status == cli::kParse);
    CHECK(o.report.at("verb") == "frobnicate");
    CHECK(o.report.at("status") == cli::kParse);
}

TEST_CASE("binary exit codes and deterministic reports") {
    const std::string d1 = put("bin_d1.json", kDyadic1);
    const std::string d3 = put("bin_d3.json", kDyadic3);
    const std::string h1 = put("bin_h1.json", kSwapped1);
    const std::string r1 = (workdir() / "r1.json").string();
    const std::string r2 = (workdir() / "r2.json").string();

    CHECK(shell("sigma " + put("bin_sigma.json", kDisjoint) + " --report " + r1) == 0);
    CHECK(read_json_file(r1).at("pair").at("contains_zero") == true);

    CHECK(shell("isometry " + d1 + " " + h1 + " --budget 2 --seed 5 --precision 8 --report " + r1) == 0);
    CHECK(shell("isometry " + d1 + " " + h1 + " --budget 2 --seed 5 --precision 8 --report " + r2) == 0);
    CHECK(slurp(r1) == slurp(r2));
    CHECK(shell("verify " + r1) == 0);

    CHECK(shell("disintegrate " + d1 + " --budget 2 --strategy whitebox --report " + r1) == 0);
    CHECK(shell("disintegrate " + d1 + " --budget 2 --strategy whitebox --report " + r2) == 0);
    CHECK(slurp(r1) == slurp(r2));
    CHECK(read_json_file(r1).at("certified_level") == 2);

    CHECK(shell("isometry " + d1 + " " + d3) == 4);
    CHECK(shell("disintegrate " + put("bin_zero.json", R"({"p":"1","kind":"stepfn","generators":[]})") +
                " --report " + r1) == 3);
    CHECK(read_json_file(r1).at("status") == 3);
    CHECK(shell("sigma " + put("bin_bad.json", "[")) == 2);
    CHECK(shell("frobnicate " + d1) == 2);
    CHECK(shell("disintegrate " + d1 + " --strategy greedy") == 2);
    CHECK(shell("disintegrate " + d1 + " --budget -1") == 2);
    CHECK(shell("--help") == 0);
}

TEST_CASE("cleanup") { fs::remove_all(workdir()); }
