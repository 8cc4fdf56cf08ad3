#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "strata/parse.hpp"
#include "strata/scenario.hpp"

using namespace strata;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

// Runs the CLI binary; stdin_data is piped in when non-empty.
RunResult run_cli(const std::string& args, const std::string& stdin_data = "") {
    std::string cmd;
    if (stdin_data.empty()) {
        cmd = std::string(STRATA_CLI_PATH) + " " + args + " 2>&1";
    } else {
        std::string tmp = "/tmp/strata_cli_stdin.txt";
        std::ofstream f(tmp);
        f << stdin_data;
        f.close();
        cmd = std::string(STRATA_CLI_PATH) + " " + args + " < " + tmp + " 2>&1";
    }
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string scenario(const std::string& name) {
    return std::string(STRATA_SCENARIO_DIR) + "/" + name;
}

std::string last_line(const std::string& text) {
    std::istringstream is(text);
    std::string line, last;
    while (std::getline(is, line))
        if (!line.empty()) last = line;
    return last;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/" + name;
    std::ofstream f(path);
    f << content;
    return path;
}

// Every polynomial string below a rendered JSON value must re-parse, in the
// ring recorded next to it, to a polynomial with the identical canonical text.
void check_roundtrip(const Json& j) {
    if (j.is_object() && j.contains("ring") && j.contains("gens")) {
        RingSpec ring = ring_from_json(j.at("ring"));
        for (const auto& g : j.at("gens")) {
            std::string text = g.is_object() ? g.at("poly").get<std::string>()
                                             : g.get<std::string>();
            CHECK(poly_to_string(poly_parse(text, ring)) == text);
        }
    }
    if (j.is_object())
        for (const auto& [k, v] : j.items()) check_roundtrip(v);
    if (j.is_array())
        for (const auto& v : j) check_roundtrip(v);
}

} // namespace

TEST_CASE("bundled scenarios pass as golden tests") {
    for (const char* name : {"example_7_4.json", "example_5_22.json", "example_8_5.json",
                             "zariski_cusp.json"}) {
        auto r = run_cli("run " + scenario(name));
        CAPTURE(name);
        CAPTURE(r.output);
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("FAILED") == std::string::npos);
    }
}

TEST_CASE("example_7_4 reports the violation in its final line") {
    auto r = run_cli("run " + scenario("example_7_4.json"));
    CHECK(last_line(r.output) == "strong transversality violated at <t2,y2,z2>");
}

TEST_CASE("example_5_22 reports the emptiness split between the two levels") {
    auto r = run_cli("run " + scenario("example_5_22.json"));
    CHECK(r.output.find("\"ext_nonempty\":false") != std::string::npos);
    CHECK(r.output.find("\"base_nonempty\":true") != std::string::npos);
    CHECK(last_line(r.output).find("extension stratum empty") != std::string::npos);
}

TEST_CASE("determinism: identical scenario runs are byte-identical") {
    auto a = run_cli("run " + scenario("example_7_4.json"));
    auto b = run_cli("run " + scenario("example_7_4.json"));
    CHECK(a.output == b.output);
    auto c = run_cli("--format jsonlines run " + scenario("example_8_5.json"));
    auto d = run_cli("--format jsonlines run " + scenario("example_8_5.json"));
    CHECK(c.output == d.output);
}

TEST_CASE("round-trip: printed objects re-parse to equal canonical text") {
    auto r = run_cli("--format jsonlines run " + scenario("example_7_4.json"));
    std::istringstream lines(r.output);
    std::string line;
    int checked = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] != '{') continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded()) continue;
        check_roundtrip(j);
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("exit codes: empty script, parse error, expectation failure, op errors") {
    {
        std::string p = write_temp("empty.json", R"({"name":"empty","script":[]})");
        auto r = run_cli("run " + p);
        CHECK(r.exit_code == 0);
        CHECK(r.output.empty());
    }
    {
        std::string p = write_temp("broken.json", "{ this is not json");
        auto r = run_cli("run " + p);
        CHECK(r.exit_code == 2);
    }
    {
        std::string p = write_temp("badexp.json", R"({
            "name": "badexp",
            "ring": {"char": 0, "vars": ["x"]},
            "script": [{"op": "parse", "text": "x + 1", "bind": "f"}],
            "expectations": [{"binding": "f", "equals_poly": "x + 2"}]
        })");
        auto r = run_cli("run " + p);
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("FAILED") != std::string::npos);
    }
    {
        // a non-permissible weak transform is an operation error
        std::string p = write_temp("noperm.json", R"({
            "name": "noperm",
            "script": [{"op": "weak_transform",
                        "algebra": {"ring": {"char": 0, "vars": ["x"]},
                                      "gens": [{"poly": "x", "weight": 2}]},
                        "center": ["x"], "chart": "x", "bind": "w"}]
        })");
        auto r = run_cli("run " + p);
        CHECK(r.exit_code == 3);
    }
    {
        // an exhausted Groebner budget is the distinguished exit 4
        std::string p = write_temp("budget.json", R"({
            "name": "budget",
            "ring": {"char": 0, "vars": ["x", "y"]},
            "defaults": {"budget_gb": 1},
            "script": [{"op": "groebner",
                        "ideal": ["y^2 - x^3", "x*y - y", "x^4 - y^3"], "bind": "g"}]
        })");
        auto r = run_cli("run " + p);
        CHECK(r.exit_code == 4);
        CHECK(r.output.find("budget") != std::string::npos);
    }
}

TEST_CASE("probe subcommand exits 3 on violation") {
    auto r = run_cli("probe --file " + scenario("pair_7_4.json"));
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("violated") != std::string::npos);
}

TEST_CASE("integrality subcommand exits 0 when certified") {
    std::string p = write_temp("integ.json", R"({
        "H":  {"ring": {"char": 2, "vars": ["t","x","z","y"]},
                "gens": [{"poly": "x^12", "weight": 3}]},
        "Hp": {"ring": {"char": 2, "vars": ["t","x","z","y"]},
                "gens": [{"poly": "x^4", "weight": 1}]},
        "quotient": ["z^2 - x^5", "y^4 - x^13"],
        "D": 4, "nmax": 6
    })");
    auto r = run_cli("integrality --file " + p);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("integral") != std::string::npos);
}

TEST_CASE("construct subcommand exits 4 when certification fails") {
    std::string p = write_temp("construct_bad.json", R"({
        "base": {"char": 0, "base_vars": ["x"],
                  "steps": [{"var": "y", "relation": "y^3 + x^3*y + x^7"}]},
        "relations": [{"var": "z", "relation": "z - x"}],
        "D": 3, "nmax": 5
    })");
    auto r = run_cli("construct --file " + p);
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("\"certified\": false") != std::string::npos);
}

TEST_CASE("sing and diff-sat subcommands") {
    auto r = run_cli("--char 2 sing --vars x,y --gen x^2:1 --gen \"y^2 - x^3:2\"");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("nonempty") != std::string::npos);

    auto d = run_cli("--format jsonlines diff-sat --vars x,T --gen \"T^3 + x^3*T + x^7:3\"");
    CHECK(d.exit_code == 0);
    ReesAlgebra sat = algebra_from_json(Json::parse(last_line(d.output)));
    RingSpec ring(0, {"x", "T"});
    ReesAlgebra expected(ring, {{poly_parse("T", ring), 1},
                                {poly_parse("x^2", ring), 1},
                                {poly_parse("x^3", ring), 2}});
    CHECK(algebra_equal_up_to(sat, expected, 3));
}

TEST_CASE("mult-oracle subcommand reproduces the cusp") {
    auto r = run_cli("mult-oracle --vars x,y --relations \"y^2 - x^3\" --prime x,y --nrange 6");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"multiplicity\": \"2\"") != std::string::npos);
}

TEST_CASE("session: replay of the example_7_4 command log reproduces the verdict") {
    std::string commands =
        "blowup t,x,z,y t\n"
        "blowup t,z,y t\n"
        "stratum\n"
        "probe t,y\n"
        "quit\n";
    auto r = run_cli("session " + scenario("pair_7_4.json"), commands);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("strong transversality violated at <t2,y2,z2>") != std::string::npos);
}

TEST_CASE("session: undo restores the exact prior serialized state") {
    std::string commands =
        "show ext\n"
        "blowup t,x,z,y t\n"
        "show ext\n"
        "undo\n"
        "show ext\n"
        "quit\n";
    auto r = run_cli("session " + scenario("pair_7_4.json"), commands);
    CHECK(r.exit_code == 0);
    std::vector<std::string> shows;
    std::istringstream is(r.output);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind("Tower(", 0) == 0) shows.push_back(line);
    REQUIRE(shows.size() == 3);
    CHECK(shows[0] == shows[2]);
    CHECK(shows[0] != shows[1]);
}

TEST_CASE("session: probing a prime outside both strata") {
    std::string commands = "probe x\nquit\n";
    auto r = run_cli("session " + scenario("pair_7_4.json"), commands);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("outside both") != std::string::npos);
}
