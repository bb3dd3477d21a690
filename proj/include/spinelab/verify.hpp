#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinelab/spine.hpp"

namespace spinelab {

// Invalid run configuration; maps to exit status 2 like a missing fixture.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitStatus { kExitPass = 0, kExitMismatch = 1, kExitConfig = 2 };

struct RunConfig {
    int p = 3;
    int rank = 4;
    int max_degree = 40;
    EnumerationLimits limits;
    std::size_t max_closure_classes = 100000;
    std::string fixture_dir;  // empty: default_fixture_dir()
    std::string markdown_out;  // empty: not written
    std::string json_out;

    // Throws ConfigError.
    void validate() const;
};

// SPINELAB_MAX_DEGREE if set, else `fallback`; throws ConfigError on junk.
int max_degree_from_env(int fallback);

enum class CheckStatus { Pass, Fail, Skip };

struct CheckResult {
    std::string stage;
    std::string name;
    CheckStatus status = CheckStatus::Fail;
    std::string detail;
};

struct VerifyReport {
    RunConfig config;
    std::vector<CheckResult> checks;
    int exit_status = kExitPass;

    std::string markdown() const;
    nlohmann::ordered_json json() const;
};

// Stages in order: census, tables, components, series, relations, assembly,
// wreath, metacyclic, pipeline, classification, nielsen, expansions. The
// spine and assembly stages need (p, rank) = (3, 4) and are skipped otherwise.
// Fixture and configuration problems are thrown (FixtureError, ConfigError).
VerifyReport verify_all(const RunConfig& config);

const char* status_label(CheckStatus s);

}  // namespace spinelab
