#include "qpii/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qpii/darboux.hpp"
#include "qpii/errors.hpp"
#include "qpii/laxderive.hpp"
#include "qpii/ncalg.hpp"
#include "qpii/quasidet.hpp"

namespace qpii::cli {

using json = nlohmann::ordered_json;
namespace ld = qpii::laxderive;
namespace qd = qpii::quasidet;

namespace {

// Thrown when a check ran to completion but did not pass; the result is kept.
struct Failed {
    json result;
};

json command_json(const Command& c) {
    json j;
    j["subcommand"] = c.subcommand;
    if (c.subcommand == "derive") {
        j["target"] = c.target;
        j["classical"] = c.classical;
    }
    if (c.subcommand == "quasidet") {
        j["input"] = c.input.generic_string();
        j["carrier"] = c.carrier;
        j["row"] = c.row ? json(*c.row) : json(nullptr);
        j["col"] = c.col ? json(*c.col) : json(nullptr);
    }
    if (c.subcommand == "darboux") j["config"] = c.input.generic_string();
    if (c.subcommand == "selftest") j["seed"] = c.seed;
    if (c.tolerance) j["tolerance"] = *c.tolerance;
    return j;
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cli.read", "cannot open " + path.generic_string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("cli.read", path.generic_string() + ": " + e.what());
    }
}

json derive(const Command& c) {
    if (c.target == "qpii") return ld::derive_qpii({.quantum = !c.classical}).to_json();
    if (c.target == "riccati") return ld::riccati_derive_report().to_json();
    if (c.target == "symmetric")
        return {{"commutator_f1_minus_f0_f2", ncalg::to_text(ld::verify_symmetric_relations())},
                {"commutator_f0_f2", ncalg::to_text(ld::symmetric_commutator_f0_f2())}};
    throw ConfigurationError("cli.derive", "unknown derive target '" + c.target + "'");
}

template <class C>
json position_json(const qd::BlockMatrix<C>& m, std::size_t i, std::size_t j) {
    const C& k = m.carrier();
    json p = {{"row", i + 1}, {"col", j + 1}};
    std::optional<typename C::value_type> a, b;
    try {
        a = qd::quasideterminant_expand(m, i, j);
        p["expand"] = k.to_json(*a);
    } catch (const Error& e) {
        p["expand"] = nullptr;
        p["expand_error"] = e.name();
    }
    try {
        b = qd::quasideterminant_via_inverse(m, i, j);
        p["via_inverse"] = k.to_json(*b);
    } catch (const Error& e) {
        p["via_inverse"] = nullptr;
        p["via_inverse_error"] = e.name();
    }
    p["agree"] = a && b ? json(k.approx_equal(*a, *b)) : json(nullptr);
    if constexpr (std::is_same_v<C, qd::ExactScalarCarrier>)
        p["commutative_reduction"] = qd::to_string(qd::commutative_reduction_check(m, i, j).status);
    return p;
}

template <class C>
json evaluate(const qd::BlockMatrix<C>& m, const Command& c) {
    const std::size_t n = m.size();
    json positions = json::array();
    if (c.row || c.col) {
        if (!c.row || !c.col) throw ConfigurationError("cli.quasidet", "--row and --col must be given together");
        if (*c.row < 1 || *c.row > n || *c.col < 1 || *c.col > n)
            throw ConfigurationError("cli.quasidet", "position outside the " + std::to_string(n) + "x" +
                                                         std::to_string(n) + " matrix");
        // A single requested position must succeed by the expansion.
        qd::quasideterminant_expand(m, *c.row - 1, *c.col - 1);
        positions.push_back(position_json(m, *c.row - 1, *c.col - 1));
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) positions.push_back(position_json(m, i, j));
    }
    bool all_agree = true;
    for (const auto& p : positions)
        if (p["agree"] == false) all_agree = false;
    json out = {{"n", n}, {"matrix", m.to_json()}, {"positions", positions}, {"all_agree", all_agree}};
    if (!all_agree) throw Failed{out};
    return out;
}

json quasidet(const Command& c) {
    nlohmann::json input = read_json(c.input);
    if (input.is_object() && input.contains("matrix")) input = input["matrix"];
    if (c.carrier == "exact") return evaluate(qd::parse_exact_scalar(input), c);
    if (c.carrier == "exact-matrix") return evaluate(qd::parse_exact_blocks(input), c);
    if (c.carrier == "complex") {
        qd::ComplexBlockMatrix m = qd::parse_complex_blocks(input);
        if (!c.tolerance) return evaluate(m, c);
        qd::ComplexMatrixCarrier k = m.carrier();
        k.tolerance = *c.tolerance;
        qd::ComplexBlockMatrix retuned(k, m.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) retuned(i, j) = m(i, j);
        return evaluate(retuned, c);
    }
    throw ConfigurationError("cli.quasidet", "unknown carrier '" + c.carrier + "'");
}

json darboux_run(const Command& c) {
    darboux::DarbouxConfig config = darboux::DarbouxConfig::from_json(read_json(c.input), c.input.parent_path());
    if (c.tolerance) config.consistency_tolerance = *c.tolerance;
    json report = darboux::run_darboux(config, c.threads);
    if (report["status"] != "ok") throw Failed{report};
    return report;
}

json selftest(const Command& c) {
    json report = acceptance::run_acceptance(c.seed, c.threads);
    if (report["failed"] != 0) throw Failed{report};
    return report;
}

void render_text(std::ostream& os, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    auto scalar_line = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    auto is_leaf = [](const json& v) {
        if (v.is_array())
            return std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
        return !v.is_object();
    };
    if (j.is_object()) {
        for (const auto& [key, v] : j.items()) {
            if (is_leaf(v)) {
                os << pad << key << ": " << scalar_line(v) << '\n';
            } else {
                os << pad << key << ":\n";
                render_text(os, v, indent + 2);
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (is_leaf(v)) {
                os << pad << "- " << scalar_line(v) << '\n';
            } else {
                os << pad << "-\n";
                render_text(os, v, indent + 2);
            }
        }
    } else {
        os << pad << scalar_line(j) << '\n';
    }
}

}  // namespace

Outcome run(const Command& command) {
    Outcome out;
    out.report["command"] = command_json(command);
    try {
        json result;
        if (command.subcommand == "derive") result = derive(command);
        else if (command.subcommand == "quasidet") result = quasidet(command);
        else if (command.subcommand == "darboux") result = darboux_run(command);
        else if (command.subcommand == "selftest") result = selftest(command);
        else throw ConfigurationError("cli.run", "unknown subcommand '" + command.subcommand + "'");
        out.report["status"] = "ok";
        out.report["result"] = std::move(result);
    } catch (Failed& f) {
        out.exit_code = 1;
        out.report["status"] = "failed";
        out.report["result"] = std::move(f.result);
    } catch (const Error& e) {
        out.exit_code = 1;
        out.report["status"] = "error";
        out.report["error"] = e.to_json();
    } catch (const std::exception& e) {
        out.exit_code = 1;
        out.report["status"] = "error";
        out.report["error"] = {{"name", "InternalError"}, {"location", "cli.run"}, {"message", e.what()}};
    }
    return out;
}

std::string render(const json& report, Format format) {
    if (format == Format::Json) return report.dump(2) + "\n";
    std::ostringstream os;
    render_text(os, report, 0);
    return os.str();
}

}  // namespace qpii::cli
