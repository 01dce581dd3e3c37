#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lpiso::cli {

enum Status : int {
    kOk = 0,
    kFailed = 1,  // verification failed or an unexpected library error
    kParse = 2,
    kBudget = 3,
    kPEqualsTwo = 4,
};

struct JobSpec {
    std::string verb;                 // sigma | disintegrate | isometry | verify
    std::vector<std::string> inputs;
    std::optional<long> precision;    // k; per-verb default when unset
    std::size_t budget = 4;           // stage budget n
    std::string strategy = "whitebox";
    std::uint64_t seed = 0;
    std::size_t probes = 16;
    std::string report;               // empty: report goes to stdout
};

struct Outcome {
    int status = kOk;
    nlohmann::json report;
};

/// Runs a job without touching the filesystem except for reading inputs.
Outcome execute(const JobSpec& job);

/// execute() plus writing the report (to job.report or stdout).
int run(const JobSpec& job);

}  // namespace lpiso::cli
