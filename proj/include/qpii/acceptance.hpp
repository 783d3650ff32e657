#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qpii::acceptance {

constexpr std::uint64_t kDefaultSeed = 20240601;

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    /// Pinned tolerances, measured values and counts.  Free of timings so the
    /// report is reproducible; time limits enter only through `passed`.
    nlohmann::ordered_json details;

    nlohmann::ordered_json to_json() const;
};

/// Ids evaluated in-process (1..10).  Criterion 11 compares two CLI runs and
/// lives with the acceptance runner.
std::vector<int> in_process_criteria();

std::string title(int id);

/// ConfigurationError for ids outside in_process_criteria().
CriterionResult run_criterion(int id, std::uint64_t seed = kDefaultSeed, unsigned threads = 1);

/// {"seed", "criteria": [...], "passed", "failed"} over in_process_criteria().
nlohmann::ordered_json run_acceptance(std::uint64_t seed = kDefaultSeed, unsigned threads = 1);

}  // namespace qpii::acceptance
