#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace confound {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOptions {
    std::filesystem::path suite_config;
    std::uint64_t seed = 42;
    // Two suite runs are written here for the determinism check.
    std::filesystem::path scratch_dir;
};

/// Runs the ten end-to-end acceptance criteria. Expected values come from
/// closed-form oracles written here, not from the code paths under test.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

std::string format_criterion(const CriterionResult& r);

}  // namespace confound
