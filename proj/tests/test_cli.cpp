#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpii/cli.hpp"
#include "qpii/laxderive.hpp"
#include "qpii/ncalg.hpp"

using namespace qpii;
using namespace qpii::cli;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / ("qpii_cli_" + name);
    std::ofstream(p) << text;
    return p;
}

Command make(std::string sub) {
    Command c;
    c.subcommand = std::move(sub);
    return c;
}

struct Spawned {
    int status;
    std::string out;
};

Spawned spawn(const std::string& args) {
    const std::string cmd = std::string("\"") + QPII_CLI_PATH + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

const std::string kConfig = std::string(QPII_SOURCE_DIR) + "/tools/configs/vacuum_n2.json";

}  // namespace

TEST_CASE("derive qpii reports the non-vanishing remainder") {
    Command c = make("derive");
    c.target = "qpii";
    const Outcome o = run(c);
    CHECK(o.exit_code == 1);
    CHECK(o.report["status"] == "error");
    CHECK_FALSE(o.report.contains("result"));
    CHECK(o.report["error"]["name"] == "NonVanishingRemainder");
    CHECK(o.report["error"]["location"].is_string());
    CHECK(o.report["error"]["details"]["remainders"].size() == 6);

    c.classical = true;
    const Outcome ok = run(c);
    CHECK(ok.exit_code == 0);
    CHECK(ok.report["result"]["ode"] == ncalg::to_text(laxderive::qpii_target_ode()));
}

TEST_CASE("derive riccati and symmetric") {
    Command c = make("derive");
    c.target = "riccati";
    const Outcome r = run(c);
    CHECK(r.exit_code == 0);
    CHECK(r.report["result"]["lambda_discrepancy"] == true);
    c.target = "symmetric";
    CHECK(run(c).report["result"]["commutator_f1_minus_f0_f2"] == "(4+0i) h^1 l^1");
}

TEST_CASE("quasidet over exact scalars") {
    Command c = make("quasidet");
    c.input = write_temp("m.json", R"([["1", "2"], ["3", "4"]])");
    const Outcome all = run(c);
    REQUIRE(all.exit_code == 0);
    // |A|_11 = 1 - 2*3/4, |A|_12 = 2 - 1*4/3, |A|_21 = 3 - 4*1/2, |A|_22 = 4 - 3*2/1.
    const char* expected[] = {"(-1/2+0i)", "(2/3+0i)", "(1+0i)", "(-2+0i)"};
    const auto& pos = all.report["result"]["positions"];
    REQUIRE(pos.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(pos[k]["expand"] == expected[k]);
        CHECK(pos[k]["via_inverse"] == expected[k]);
        CHECK(pos[k]["commutative_reduction"] == "holds");
    }

    c.row = 2;
    c.col = 1;
    const Outcome one = run(c);
    REQUIRE(one.report["result"]["positions"].size() == 1);
    CHECK(one.report["result"]["positions"][0]["expand"] == "(1+0i)");
    CHECK(one.report["command"]["row"] == 2);

    c.row = 3;
    CHECK(run(c).report["error"]["name"] == "ConfigurationError");

    c.input = write_temp("s.json", R"([["1", "1"], ["1", "0"]])");
    c.row = 1;
    c.col = 1;
    const Outcome singular = run(c);
    CHECK(singular.exit_code == 1);
    CHECK(singular.report["error"]["name"] == "NonInvertibleMinor");

    c.input = write_temp("bad.json", R"([["1", "2"]])");
    c.row.reset();
    c.col.reset();
    CHECK(run(c).report["error"]["name"] == "ParseError");
    c.input = write_temp("broken.json", "[[");
    CHECK(run(c).report["error"]["name"] == "ParseError");
}

TEST_CASE("quasidet over matrix carriers") {
    Command c = make("quasidet");
    c.carrier = "complex";
    c.input = write_temp("c.json", R"({"matrix": [[[[2, 0], [0, 1]], [[1, 0], [0, 1]]],
                                                  [[[1, 0], [0, 1]], [[1, 0], [0, 2]]]]})");
    const Outcome o = run(c);
    REQUIRE(o.exit_code == 0);
    CHECK(o.report["result"]["all_agree"] == true);
    // diag(2,1) - diag(1,1/2) = diag(1, 1/2)
    const auto& v = o.report["result"]["positions"][0]["expand"];
    CHECK(v[0][0][0].get<double>() == doctest::Approx(1.0));
    CHECK(v[1][1][0].get<double>() == doctest::Approx(0.5));

    c.carrier = "exact-matrix";
    c.input = write_temp("e.json", R"([[[["2","0"],["0","1"]], [["1","0"],["0","1"]]],
                                       [[["1","0"],["0","1"]], [["1","0"],["0","2"]]]])");
    const Outcome e = run(c);
    REQUIRE(e.exit_code == 0);
    CHECK(e.report["result"]["positions"][0]["expand"] ==
          nlohmann::ordered_json::parse(R"j([["(1+0i)","(0+0i)"],["(0+0i)","(1/2+0i)"]])j"));
}

TEST_CASE("darboux subcommand") {
    Command c = make("darboux");
    c.input = kConfig;
    const Outcome o = run(c);
    REQUIRE(o.exit_code == 0);
    CHECK(o.report["result"]["path_consistency"]["max"].get<double>() <= 1e-8);
    c.threads = 3;
    CHECK(run(c).report.dump() == o.report.dump());

    c.input = write_temp("dup.json", R"({"d": 1, "lambdas": [[1, 0], [1, 0]]})");
    const Outcome bad = run(c);
    CHECK(bad.exit_code == 1);
    CHECK(bad.report["status"] == "error");
    CHECK(bad.report["error"]["name"] == "ConfigurationError");
}

TEST_CASE("selftest echoes the seed and reports every in-process criterion") {
    Command c = make("selftest");
    c.seed = 7;
    const Outcome o = run(c);
    CHECK(o.report["result"]["seed"] == 7);
    CHECK(o.report["result"]["criteria"].size() == 10);
    const int failed = o.report["result"]["failed"].get<int>();
    CHECK(o.exit_code == (failed == 0 ? 0 : 1));
    CHECK(o.report["status"] == (failed == 0 ? "ok" : "failed"));
}

TEST_CASE("text view is derived from the json document") {
    const nlohmann::ordered_json j = nlohmann::ordered_json::parse(R"({"a": 1, "b": {"c": "x", "d": [1, 2]}, "e": [{"f": true}]})");
    CHECK(render(j, Format::Text) == "a: 1\nb:\n  c: x\n  d: [1,2]\ne:\n  -\n    f: true\n");
    CHECK(nlohmann::ordered_json::parse(render(j, Format::Json)) == j);
}

TEST_CASE("executable exit codes") {
    CHECK(spawn("frobnicate").status == 2);
    CHECK(spawn("derive qpii --bogus").status == 2);
    CHECK(spawn("quasidet").status == 2);
    CHECK(spawn("--format yaml derive qpii").status == 2);

    const Spawned classical = spawn("derive qpii --classical --format json");
    CHECK(classical.status == 0);
    CHECK(nlohmann::json::parse(classical.out)["status"] == "ok");

    const Spawned quantum = spawn("derive qpii --format json");
    CHECK(quantum.status == 1);
    CHECK(nlohmann::json::parse(quantum.out)["error"]["name"] == "NonVanishingRemainder");

    const fs::path out = fs::temp_directory_path() / "qpii_cli_report.json";
    fs::remove(out);
    const Spawned d = spawn("darboux --config \"" + kConfig + "\" --format json --output \"" + out.string() + "\"");
    CHECK(d.status == 0);
    CHECK(d.out.empty());
    std::ifstream in(out);
    const auto report = nlohmann::json::parse(in);
    CHECK(report["result"]["status"] == "ok");
}
