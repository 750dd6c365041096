#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "restrictlab/cli.hpp"
#include "restrictlab/errors.hpp"

using namespace restrictlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("restrictlab-cli-" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(cli::run({"scan", "--no-such-flag", "1"}) == 2);
    CHECK(cli::run({}) == 2);
    CHECK(cli::run({"frobnicate"}) == 2);
    CHECK(cli::run({"scan", "--d", "two"}) == 2);
    CHECK(cli::run({"--help"}) == 0);
}

TEST_CASE("invalid values are rejected before any work") {
    const auto dir = scratch("invalid");
    CHECK(cli::run({"ck-verify", "--p", "3", "--out-dir", dir.string()}) == 2);
    CHECK(cli::run({"variation-selftest", "--max-len", "20", "--out-dir", dir.string()}) == 2);
    CHECK(cli::run({"scan", "--surface", "torus", "--out-dir", dir.string()}) == 2);
    CHECK(cli::run({"knapp", "--p", "1.5", "--q", "2", "--delta-exp-max", "4", "--out-dir", dir.string()}) == 2);
    CHECK(fs::is_empty(dir));
}

TEST_CASE("config files override flags") {
    const auto dir = scratch("config");
    {
        std::ofstream os(dir / "cfg.json");
        os << R"({"alpha-max": 1.0, "z-points": 3, "z-max": 2.0})";
    }
    REQUIRE(cli::run({"bessel-table", "--z-points", "50", "--config", (dir / "cfg.json").string(), "--out-dir",
                      dir.string()}) == 0);
    const std::string csv = slurp(dir / "bessel-table.csv");
    CHECK(csv.rfind("# config: {", 0) == 0);
    CHECK(csv.find("\"z-points\":3") != std::string::npos);
    // header comment, column names, three orders times three arguments
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
    const auto doc = nlohmann::json::parse(slurp(dir / "bessel-table.json"));
    CHECK(doc["config"]["alpha-max"] == 1.0);
    CHECK(doc["result"]["rows"] == 9);

    {
        std::ofstream os(dir / "bad.json");
        os << R"({"alpha_max": 1.0})";
    }
    CHECK(cli::run({"bessel-table", "--config", (dir / "bad.json").string(), "--out-dir", dir.string()}) == 2);
    {
        std::ofstream os(dir / "broken.json");
        os << "{";
    }
    CHECK(cli::run({"bessel-table", "--config", (dir / "broken.json").string(), "--out-dir", dir.string()}) == 2);
    CHECK(cli::run({"bessel-table", "--config", (dir / "missing.json").string(), "--out-dir", dir.string()}) == 2);
}

TEST_CASE("RunConfig json handling") {
    cli::RunConfig c;
    c.command = "scan";
    CHECK_THROWS_AS(c.apply_json(nlohmann::json{{"d", "three"}}), ConfigError);
    CHECK_THROWS_AS(c.apply_json(nlohmann::json{{"seed", -1}}), ConfigError);
    CHECK_THROWS_AS(c.apply_json(nlohmann::json{{"command", "knapp"}}), ConfigError);
    CHECK_THROWS_AS(c.apply_json(nlohmann::json::array()), ConfigError);
    c.apply_json(nlohmann::json{{"d", 3}, {"surface", "cone"}, {"command", "scan"}});
    CHECK(c.d == 3);
    CHECK(c.surface == "cone");
    cli::RunConfig back;
    back.command = "scan";
    back.apply_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
    c.q = 0.5;
    try {
        c.validate();
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "q");
    }
}

TEST_CASE("verification commands succeed and are byte-reproducible") {
    const auto dir = scratch("runs");
    const std::vector<std::string> ck = {"ck-verify", "--seed", "7", "--instances", "40", "--out-dir", dir.string()};
    REQUIRE(cli::run(ck) == 0);
    const std::string first = slurp(dir / "ck-verify.csv");
    const auto doc = nlohmann::json::parse(slurp(dir / "ck-verify.json"));
    CHECK(doc["result"]["passing"] == 40);
    CHECK(doc["result"]["reports"].size() == 40);
    REQUIRE(cli::run(ck) == 0);
    CHECK(slurp(dir / "ck-verify.csv") == first);

    CHECK(cli::run({"variation-selftest", "--cases", "50", "--out-dir", dir.string()}) == 0);
    CHECK(cli::run({"lebesgue", "--measure", "ball", "--out-dir", dir.string()}) == 0);
    CHECK(cli::run({"knapp", "--p", "1.3333333333333333", "--q", "1.5", "--out-dir", dir.string()}) == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "knapp.json"))["result"]["verdict"] == "unbounded-consistent");
    CHECK_FALSE(fs::exists(dir / "ck-verify-failure.json"));
}

TEST_CASE("failed assertions exit with 1 and leave a reproducer") {
    const auto dir = scratch("fail");
    // A single eps-decade is too coarse for the rate fit at the default point:
    // at eps near 1 the ball average is far from its Taylor regime.
    CHECK(cli::run({"lebesgue", "--measure", "ball", "--eps-min", "0.5", "--eps-max", "1", "--out-dir",
                    dir.string()}) == 1);
    CHECK(fs::exists(dir / "lebesgue-failure.json"));
    CHECK(fs::exists(dir / "lebesgue.json"));
}
