#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "levybandit/json_io.hpp"

using namespace levybandit;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(LB_CLI_PATH) + " " + args + " 2>&1";
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
        result.output.append(buf.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

const char* kBmJson = R"({"family":"bm","params":{"m":0,"sigma":1.4142135623730951},"orientation":"sn"})";

}  // namespace

TEST_CASE("model json round trip") {
    const LevyModel model = model_from_json(json::parse(kBmJson));
    CHECK(model.family == Family::BrownianDrift);
    CHECK(model.sigma == doctest::Approx(std::sqrt(2.0)));
    const json out = model_to_json(model);
    CHECK(out.at("family") == "bm");
    CHECK(out.at("orientation") == "sn");

    const LevyModel again = model_from_json(out);
    CHECK(again.m == model.m);
    CHECK(again.sigma == model.sigma);

    const auto cl = model_from_json(
        json::parse(R"({"family":"cl","params":{"c":2,"eta":1,"rho":1},"orientation":"sp"})"));
    CHECK(cl.orientation == Orientation::SpectrallyPositive);
    CHECK(model_from_json(model_to_json(cl)).c == 2.0);
}

TEST_CASE("model json errors name the offending field") {
    CHECK_THROWS_AS(model_from_json(json::parse(R"({"params":{}})")), ConfigError);
    CHECK_THROWS_WITH_AS(
        model_from_json(json::parse(R"({"family":"bm","params":{"m":0}})")),
        doctest::Contains("sigma"), ConfigError);
    CHECK_THROWS_AS(model_from_json(json::parse(R"({"family":"levy","params":{}})")),
                    ConfigError);
    CHECK_THROWS_AS(
        model_from_json(json::parse(
            R"({"family":"bm","params":{"m":0,"sigma":1},"orientation":"up"})")),
        ConfigError);
}

TEST_CASE("reward parsing") {
    const Reward affine = reward_from_string("affine:1,2");
    CHECK(affine(1.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(reward_from_string("affine:1"), ConfigError);
    CHECK_THROWS_AS(reward_from_string("affine:1,0"), ConfigError);

    const Reward logi = reward_from_string(
        R"({"family":"bounded_logistic","lo":0,"hi":1,"center":0,"slope":2})");
    CHECK(logi(0.0) == doctest::Approx(0.5));

    const Reward table = reward_from_string(
        R"({"family":"monotone_table","knots":[[0,0],[1,2]]})");
    CHECK(table(0.5) == doctest::Approx(1.0));
    CHECK_THROWS_WITH_AS(
        reward_from_json(json::parse(R"({"family":"affine","a":0})")),
        doctest::Contains("b"), ConfigError);
}

TEST_CASE("arms parsing") {
    const std::string text = R"({
        "arms": [
            {"model": {"family":"bm","params":{"m":0.5,"sigma":1}},
             "reward": {"family":"affine","a":0,"b":1}, "x0": 0.0},
            {"model": {"family":"bm","params":{"m":-0.5,"sigma":1}},
             "reward": {"family":"affine","a":0,"b":1}, "x0": 0.0}
        ], "q": 1.0, "lambda": 3.0})";
    const ArmsFile arms = arms_from_string(text);
    CHECK(arms.arms.size() == 2);
    CHECK(arms.q == 1.0);
    CHECK(arms.lambda == 3.0);
    CHECK(arms.arms[0].model.m == 0.5);

    CHECK_THROWS_WITH_AS(arms_from_string(R"({"arms":[],"q":1})"),
                         doctest::Contains("lambda"), ConfigError);
}

TEST_CASE("format_double survives a parse round trip") {
    for (double v : {0.5, 1.0 / 3.0, 3.893483022102846, 1e-17, -2.75e11}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("cli index command computes the canonical table") {
    const std::string args = std::string("index --model '") + kBmJson +
                             "' --reward affine:0,1 --q 1 --lambda 3 --x -1:1:0.5 "
                             "--problem 1";
    const CliResult result = run_cli(args);
    CHECK(result.exit_code == 0);
    CHECK(result.output.rfind("x,gamma\n", 0) == 0);
    // 5 grid rows plus header.
    int lines = 0;
    for (char ch : result.output)
        if (ch == '\n') ++lines;
    CHECK(lines == 6);
    CHECK(result.output.find("\n0,0.5\n") != std::string::npos);
}

TEST_CASE("cli reports config errors with exit 2") {
    const CliResult missing = run_cli("index --q 1 --lambda 3");
    CHECK(missing.exit_code == 2);

    const CliResult bad_reward = run_cli(
        std::string("index --model '") + kBmJson +
        R"(' --reward '{"family":"affine","a":0}' --q 1 --lambda 3)");
    CHECK(bad_reward.exit_code == 2);
    CHECK(bad_reward.output.find("b") != std::string::npos);
}

TEST_CASE("cli outputs are byte-identical across runs and formats agree") {
    const std::string base = std::string("index --model '") + kBmJson +
                             "' --reward affine:0,1 --q 1 --lambda 3 --x -2:2:0.25";
    const CliResult a = run_cli(base);
    const CliResult b = run_cli(base);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);

    const CliResult j = run_cli(base + " --format json");
    CHECK(j.exit_code == 0);
    const json parsed = json::parse(j.output);
    std::size_t row = 0;
    std::istringstream csv(a.output);
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
        const auto comma = line.find(',');
        REQUIRE(row < parsed.at("rows").size());
        CHECK(std::stod(line.substr(0, comma)) ==
              parsed.at("rows")[row].at("x").get<double>());
        CHECK(std::stod(line.substr(comma + 1)) ==
              parsed.at("rows")[row].at("gamma").get<double>());
        ++row;
    }
    CHECK(row == parsed.at("rows").size());
}

TEST_CASE("cli measure command emits the atom row and a mass footer") {
    const std::string args = std::string("measure --model '") + kBmJson +
                             "' --reward affine:0,1 --q 1 --lambda 3 --x 0.5:2:0.5";
    const CliResult result = run_cli(args);
    CHECK(result.exit_code == 0);
    CHECK(result.output.rfind("y,atom_flag,density\n", 0) == 0);
    CHECK(result.output.find("0,1,0.5\n") != std::string::npos);
    const auto footer_at = result.output.find("# {");
    REQUIRE(footer_at != std::string::npos);
    const json footer = json::parse(result.output.substr(footer_at + 2));
    CHECK(footer.at("total_mass").get<double>() == doctest::Approx(1.0).epsilon(1e-8));

    // P2 tables have no atom row.
    const CliResult p2 = run_cli(args + " --problem 2");
    CHECK(p2.exit_code == 0);
    CHECK(p2.output.find(",1,") == std::string::npos);
}

TEST_CASE("cli converge command emits a decreasing distance column") {
    const std::string args = std::string("converge --model '") + kBmJson +
                             "' --q 1 --lambdas 1,10,100,1000,10000";
    const CliResult result = run_cli(args);
    CHECK(result.exit_code == 0);
    std::istringstream csv(result.output);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "lambda,sup_distance");
    double prev = 1e300;
    double last = 0.0;
    int rows = 0;
    while (std::getline(csv, line)) {
        const auto comma = line.find(',');
        last = std::stod(line.substr(comma + 1));
        CHECK(last < prev);
        prev = last;
        ++rows;
    }
    CHECK(rows == 5);
    CHECK(last < 0.01);

    const CliResult single = run_cli(std::string("converge --model '") + kBmJson +
                                     "' --q 1 --lambdas 5");
    CHECK(single.exit_code == 0);
}
