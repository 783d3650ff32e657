#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qpii/acceptance.hpp"

namespace qpii::cli {

enum class Format { Text, Json };

struct Command {
    std::string subcommand;  // derive | quasidet | darboux | selftest
    std::string target;      // derive: qpii | riccati | symmetric
    bool classical = false;  // derive qpii without the ħ term
    std::filesystem::path input;
    std::string carrier = "exact";  // exact | exact-matrix | complex
    std::optional<std::size_t> row;  // 1-based
    std::optional<std::size_t> col;
    std::optional<double> tolerance;
    Format format = Format::Text;
    unsigned threads = 1;
    std::uint64_t seed = acceptance::kDefaultSeed;
};

struct Outcome {
    int exit_code = 0;
    /// {"command", "status", "result"} or {"command", "status", "error"}.
    nlohmann::ordered_json report;
};

/// Exit 0 on success, 1 on a computation error or a failed check.  Never
/// throws for library errors; they become the report's "error" object.
Outcome run(const Command& command);

/// JSON dump (indent 2) or the indented text view of the same document.
std::string render(const nlohmann::ordered_json& report, Format format);

}  // namespace qpii::cli
