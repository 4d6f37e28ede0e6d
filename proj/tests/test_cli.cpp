#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "ontolab/cli.hpp"

using namespace ontolab;
namespace {

constexpr double kPi = std::numbers::pi;

ExperimentConfig make(const std::string& sub, std::map<std::string, std::string> params,
                      std::uint64_t seed = 0, const std::string& fmt = "json") {
    ExperimentConfig cfg;
    cfg.subcommand = sub;
    cfg.parameters = std::move(params);
    cfg.seed = seed;
    cfg.output_format = fmt;
    return cfg;
}

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
    for (const auto& e : errors)
        if (e.find(needle) != std::string::npos) return true;
    return false;
}

Json body_without_meta(const std::string& body) {
    Json j = Json::parse(body);
    j.erase("meta");
    return j;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validation collects every error and names the offending keys") {
    const auto missing = validate(make("spectrum", {}));
    CHECK(mentions(missing, "'n'"));

    const auto bad = validate(make("bell", {{"a", "0"},
                                            {"b", "oops"},
                                            {"aprime", "45"},
                                            {"bprime", "67.5"},
                                            {"grid", "4"},
                                            {"method", "magic"}}));
    CHECK(bad.size() >= 3);
    CHECK(mentions(bad, "'b'"));
    CHECK(mentions(bad, "'grid'"));
    CHECK(mentions(bad, "'method'"));

    const auto unknown = validate(make("conserve", {{"dim", "8"}, {"bogus", "1"}}));
    CHECK(mentions(unknown, "'bogus'"));

    const auto ok = validate(make("bell", {{"a", "0"}, {"b", "22.5"}, {"aprime", "45"},
                                           {"bprime", "67.5"}}));
    CHECK(ok.empty());

    CHECK(mentions(validate(make("warp", {})), "warp"));

    auto csvfmt = make("cogwheel", {{"n", "4"}});
    csvfmt.output_format = "yaml";
    CHECK(mentions(validate(csvfmt), "output_format"));

    // Exactly one universe source.
    CHECK(mentions(validate(make("beables", {{"n", "4"}, {"shift", "3"}})), "universe source"));
}

TEST_CASE("invalid config yields exit code 2 and no body") {
    const auto rr = run(make("spectrum", {}));
    CHECK(rr.exit_code == 2);
    CHECK(rr.body.empty());
    CHECK(!rr.errors.empty());
}

TEST_CASE("spectrum run emits the cogwheel eigenphases") {
    const auto rr = run(make("spectrum", {{"n", "12"}, {"dt", "1.0"}, {"branch", "zero2pi"}}));
    REQUIRE(rr.exit_code == 0);
    const Json j = Json::parse(rr.body);
    CHECK(j.at("tool_version") == kToolVersion);
    CHECK(j.at("config_echo").at("subcommand") == "spectrum");
    const auto phases = j.at("eigenphases").get<std::vector<double>>();
    REQUIRE(phases.size() == 12);
    for (std::size_t k = 0; k < 12; ++k)
        CHECK(std::abs(phases[k] - 2.0 * kPi * static_cast<double>(k) / 12.0) <= 1e-9);
    CHECK(j.at("roundtrip_residual").get<double>() <= 1e-9);
    CHECK(j.contains("meta"));
}

TEST_CASE("conserve run passes and exits zero") {
    const auto rr = run(make("conserve", {{"dim", "16"}, {"steps", "50"}, {"trials", "64"}}, 42));
    REQUIRE(rr.exit_code == 0);
    const Json j = Json::parse(rr.body);
    CHECK(j.at("verdict") == "pass");
    CHECK(j.at("max_deviation").get<double>() == 0.0);
    CHECK(j.at("seed") == 42);
}

TEST_CASE("negative-control mode reports broken conservation as its passing outcome") {
    const auto rr = run(make("conserve", {{"dim", "16"}, {"trials", "64"}, {"mode", "negative"}}, 9));
    REQUIRE(rr.exit_code == 0);
    const Json j = Json::parse(rr.body);
    CHECK(j.at("verdict") == "pass");
    CHECK(j.at("broken").get<std::size_t>() == 64);
    CHECK(j.at("min_deviation").get<double>() > 0.1);
}

TEST_CASE("beables run on a written universe file fails for the xz set") {
    const std::string path = "identity2_universe.json";
    {
        std::ofstream out(path);
        out << R"({"dim": 2, "target": [0, 1], "phase": [0.0, 0.0]})";
    }
    const auto rr = run(make("beables", {{"universe", path}, {"set", "xz"}, {"horizon", "3"}}));
    std::remove(path.c_str());
    REQUIRE(rr.exit_code == 1);
    const Json j = Json::parse(rr.body);
    CHECK(j.at("verdict") == "fail");
    CHECK(j.at("witness").at("s") == 0);
    CHECK(j.at("witness").at("t") == 0);
    CHECK(j.at("witness").at("commutator").get<double>() == 2.0);
}

TEST_CASE("beables run with the diagonal set passes") {
    const auto rr = run(make("beables", {{"shift", "3"}, {"set", "diagonal"}}));
    REQUIRE(rr.exit_code == 0);
    CHECK(Json::parse(rr.body).at("verdict") == "pass");
}

TEST_CASE("missing universe file is a usage error naming the path") {
    const auto rr = run(make("spectrum", {{"universe", "no_such_file.json"}}));
    CHECK(rr.exit_code == 2);
    CHECK(mentions(rr.errors, "no_such_file.json"));
}

TEST_CASE("bell run carries the documented output fields") {
    const auto rr = run(make("bell", {{"a", "0"}, {"b", "22.5"}, {"aprime", "45"},
                                      {"bprime", "67.5"}, {"method", "quad"}, {"grid", "512"}}));
    REQUIRE(rr.exit_code == 0);
    const Json j = Json::parse(rr.body);
    for (const char* key : {"S", "E", "std_error", "quantum_reference_S", "classical_bound",
                            "tsirelson_bound"})
        CHECK(j.contains(key));
    CHECK(j.at("classical_bound") == 2.0);
    CHECK(j.at("tsirelson_bound") == 2.8284271247461903);
    for (const char* key : {"ab", "abp", "apb", "apbp"}) CHECK(j.at("E").contains(key));
    // Degrees at the interface: E(0deg, 22.5deg) matches the radian value.
    CHECK(j.at("E").at("ab").get<double>() ==
          doctest::Approx(0.70710678118654752).epsilon(1e-9));
}

TEST_CASE("reruns with the same config are byte-identical apart from meta") {
    const auto cfg = make("bell", {{"a", "0"}, {"b", "22.5"}, {"aprime", "45"}, {"bprime", "67.5"},
                                   {"method", "mc"}, {"samples", "100000"}},
                          20240607);
    const auto r1 = run(cfg);
    const auto r2 = run(cfg);
    REQUIRE(r1.exit_code == 0);
    CHECK(body_without_meta(r1.body).dump() == body_without_meta(r2.body).dump());

    // CSV output carries no timing block at all: bodies match bytewise.
    auto csv_cfg = cfg;
    csv_cfg.output_format = "csv";
    CHECK(run(csv_cfg).body == run(csv_cfg).body);

    // A different seed must change the Monte Carlo body.
    auto other = cfg;
    other.seed = 1;
    CHECK(body_without_meta(r1.body).dump() != body_without_meta(run(other).body).dump());
}

TEST_CASE("cogwheel csv output lists the update table") {
    const auto rr = run(make("cogwheel", {{"n", "3"}}, 0, "csv"));
    REQUIRE(rr.exit_code == 0);
    CHECK(rr.body == "index,target,phase\n0,1,0\n1,2,0\n2,0,0\n");
}

TEST_CASE("lightcone csv has the documented header") {
    const auto rr = run(make("lightcone", {{"sites", "3"}, {"tmax", "2"}}, 0, "csv"));
    REQUIRE(rr.exit_code == 0);
    CHECK(rr.body.rfind("x,xp,t,tp,separation,commutator_norm,probe_a,probe_b,causal_contact\n",
                        0) == 0);
}

TEST_CASE("config round-trips through the structured text form") {
    const Json j = {{"subcommand", "bell"},
                    {"parameters", {{"a", "0"}, {"b", "22.5"}, {"aprime", "45"}, {"bprime", "67.5"}}},
                    {"seed", 7},
                    {"output_format", "json"},
                    {"output_path", ""}};
    const auto cfg = config_from_json(j);
    CHECK(cfg.subcommand == "bell");
    CHECK(cfg.seed == 7);
    CHECK(cfg.parameters.at("b") == "22.5");
    CHECK(validate(cfg).empty());

    CHECK_THROWS_AS(config_from_json(Json{{"subcommand", "bell"}, {"mystery", 1}}),
                    std::invalid_argument);

    // Non-string parameter values are stringified (numbers in config files).
    const auto cfg2 = config_from_json(Json{{"subcommand", "cogwheel"},
                                            {"parameters", {{"n", 5}}}});
    CHECK(cfg2.parameters.at("n") == "5");
    CHECK(validate(cfg2).empty());
}

TEST_CASE("universe json round trip and error paths") {
    const auto p = GeneralizedPermutation({1, 2, 0}, {0.0, 0.5, 0.0});
    const auto back = universe_from_json(universe_to_json(p));
    CHECK(back.targets() == p.targets());
    CHECK(back.phases() == p.phases());

    CHECK_THROWS_AS(universe_from_json(Json{{"dim", 2}}), std::invalid_argument);
    CHECK_THROWS_AS(universe_from_json(Json{{"dim", 2}, {"target", {0, 1}}, {"extra", 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(universe_from_json(Json{{"dim", 3}, {"target", {0, 1}}}),
                    std::invalid_argument);
    // Phase defaults to zero when omitted.
    const auto pure = universe_from_json(Json{{"dim", 2}, {"target", {1, 0}}});
    CHECK(pure.is_pure());
}

TEST_CASE("csv quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_row({"a", "b,c"}) == "a,\"b,c\"\n");
}

TEST_CASE("command-line entry point end to end") {
    const auto invoke = [](std::vector<std::string> args) {
        std::vector<const char*> argv{"ontolab"};
        for (const auto& a : args) argv.push_back(a.c_str());
        return cli_main(static_cast<int>(argv.size()), argv.data());
    };
    const auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };

    const std::string out_path = "cli_e2e_out.json";
    CHECK(invoke({"spectrum", "--n", "4", "--output", out_path}) == 0);
    {
        const Json j = Json::parse(slurp(out_path));
        CHECK(j.at("eigenphases").size() == 4);
        CHECK(j.at("config_echo").at("output_path") == out_path);
    }

    // Config file provides the run; a flag overrides one value.
    const std::string cfg_path = "cli_e2e_cfg.json";
    {
        std::ofstream out(cfg_path);
        out << R"({"subcommand": "spectrum", "parameters": {"n": "4", "dt": "1.0"}, "seed": 3})";
    }
    CHECK(invoke({"spectrum", "--config", cfg_path, "--dt", "2.0", "--output", out_path}) == 0);
    {
        const Json j = Json::parse(slurp(out_path));
        CHECK(j.at("dt") == 2.0);                              // flag wins
        CHECK(j.at("config_echo").at("parameters").at("n") == "4");  // file value kept
        CHECK(j.at("seed") == 3);
    }

    // Config-file-only invocation (no subcommand on the command line).
    CHECK(invoke({"--config", cfg_path}) == 0);

    // Conflicting subcommands between file and command line: usage error.
    CHECK(invoke({"cogwheel", "--n", "4", "--config", cfg_path}) == 2);

    // Missing file, unknown flag, bad values, help.
    CHECK(invoke({"spectrum", "--config", "definitely_missing.json"}) == 2);
    CHECK(invoke({"spectrum", "--n", "4", "--frobnicate", "1"}) == 2);
    CHECK(invoke({"spectrum", "--n", "4", "--seed", "not-a-number"}) == 2);
    CHECK(invoke({"--help"}) == 0);
    CHECK(invoke({}) == 2);

    // Fail verdicts surface as exit code 1 through the real entry point.
    const std::string uni_path = "cli_e2e_universe.json";
    {
        std::ofstream out(uni_path);
        out << R"({"dim": 2, "target": [0, 1]})";
    }
    CHECK(invoke({"beables", "--universe", uni_path, "--set", "xz", "--output", out_path}) == 1);

    std::remove(out_path.c_str());
    std::remove(cfg_path.c_str());
    std::remove(uni_path.c_str());
}

}  // TEST_SUITE
