#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qpii/cli.hpp"

int main(int argc, char** argv) {
    using qpii::cli::Command;
    using qpii::cli::Format;

    CLI::App app{"Noncommutative Painleve II toolkit: symbolic derivations, quasideterminants, Darboux dressing."};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Command cmd;
    std::string format = "text";
    std::string output;
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_option("--output", output, "Write the report to this file instead of stdout");
    app.add_option("--threads", cmd.threads, "Worker threads for pointwise grid work")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
    app.add_option("--tolerance", cmd.tolerance,
                   "Override the complex-carrier tolerance (quasidet) or the path-consistency tolerance (darboux)");

    auto* derive = app.add_subcommand("derive", "Symbolic derivations");
    derive->add_option("target", cmd.target, "qpii | riccati | symmetric")
        ->required()
        ->check(CLI::IsMember({"qpii", "riccati", "symmetric"}));
    derive->add_flag("--classical", cmd.classical, "Use the Lax pair without the hbar term");

    auto* quasidet = app.add_subcommand("quasidet", "Evaluate quasideterminants of a JSON matrix");
    quasidet->add_option("--input", cmd.input, "JSON matrix file")->required()->check(CLI::ExistingFile);
    quasidet->add_option("--carrier", cmd.carrier, "Entry type")
        ->check(CLI::IsMember({"exact", "exact-matrix", "complex"}))
        ->capture_default_str();
    quasidet->add_option("--row", cmd.row, "1-based row (with --col); all positions when omitted");
    quasidet->add_option("--col", cmd.col, "1-based column");

    auto* darboux = app.add_subcommand("darboux", "Run a Darboux dressing configuration");
    darboux->add_option("--config", cmd.input, "JSON configuration")->required()->check(CLI::ExistingFile);

    auto* selftest = app.add_subcommand("selftest", "Run the in-process acceptance criteria");
    selftest->add_option("--seed", cmd.seed, "Seed for the randomized criteria")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    cmd.subcommand = app.get_subcommands().front()->get_name();
    cmd.format = format == "json" ? Format::Json : Format::Text;

    const qpii::cli::Outcome outcome = qpii::cli::run(cmd);
    const std::string text = qpii::cli::render(outcome.report, cmd.format);
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out || !(out << text)) {
            std::cerr << "cannot write " << output << "\n";
            return 1;
        }
    }
    return outcome.exit_code;
}
