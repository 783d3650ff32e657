// Acceptance runner: one PASS/FAIL line per criterion.
//
//     acceptance              all criteria
//     acceptance --criterion 7

#include <array>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <string>

#include "qpii/acceptance.hpp"

#ifndef QPII_CLI_PATH
#error "QPII_CLI_PATH must name the CLI executable"
#endif

namespace {

using qpii::acceptance::CriterionResult;

std::string capture(const std::string& command, int& status) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    status = pclose(pipe);
    return out;
}

// Two selftest runs through the CLI; the exit status is irrelevant here,
// only the bytes of the reports.
CriterionResult determinism() {
    CriterionResult r;
    r.id = 11;
    r.title = qpii::acceptance::title(11);
    const std::string cmd = std::string("\"") + QPII_CLI_PATH + "\" selftest --format json";
    int s1 = 0, s2 = 0;
    const std::string a = capture(cmd, s1);
    const std::string b = capture(cmd, s2);
    const bool same = !a.empty() && a == b;
    r.details = {{"bytes", a.size()}, {"identical", same}};
    r.passed = same;
    return r;
}

std::string summary(const CriterionResult& r) {
    const auto& d = r.details;
    for (const char* key : {"max_deviation", "max_residual", "max_norm", "failures", "value", "classical_limit",
                            "identical"})
        if (d.contains(key)) return std::string(key) + "=" + d[key].dump();
    if (d.contains("refinements")) {
        std::string s = "ratios=";
        for (const auto& row : d["refinements"])
            if (!row["ratio"].is_null()) s += row["ratio"].dump() + " ";
        return s;
    }
    if (d.contains("runs")) return "runs=" + std::to_string(d["runs"].size());
    if (d.contains("error")) return d["error"]["name"].get<std::string>() + ": " + d["error"]["message"].get<std::string>();
    if (d.contains("result")) return "result=" + d["result"].get<std::string>();
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int k = 1; k < argc; ++k) {
        if (std::strcmp(argv[k], "--criterion") == 0 && k + 1 < argc) {
            only = std::stoi(argv[++k]);
        } else {
            std::cerr << "usage: acceptance [--criterion N]\n";
            return 2;
        }
    }
    int failed = 0;
    for (int id = 1; id <= 11; ++id) {
        if (only && id != only) continue;
        const CriterionResult r = id == 11 ? determinism() : qpii::acceptance::run_criterion(id);
        if (!r.passed) ++failed;
        std::cout << "criterion " << (id < 10 ? " " : "") << id << ": " << (r.passed ? "PASS" : "FAIL") << "  "
                  << r.title << "  " << summary(r) << "\n";
        if (!r.passed) std::cout << "  details: " << r.details.dump() << "\n";
    }
    return failed == 0 ? 0 : 1;
}
