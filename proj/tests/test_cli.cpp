#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string kData = GSING_DATA_DIR;
const fs::path kTmp = fs::temp_directory_path() / "gsing_cli_test";

// Runs the CLI with stdout captured to a file; returns the exit code.
int gsing(const std::string& args, std::string* out = nullptr) {
    fs::create_directories(kTmp);
    auto captured = kTmp / "stdout.txt";
    std::string cmd = std::string(GSING_CLI) + " " + args + " > " + captured.string() + " 2> " +
                      (kTmp / "stderr.txt").string();
    int rc = std::system(cmd.c_str());
    if (out) {
        std::ifstream f(captured);
        std::stringstream ss;
        ss << f.rdbuf();
        *out = ss.str();
    }
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string input(const std::string& name) { return "--input " + kData + "/" + name; }

}  // namespace

TEST_CASE("surface command") {
    std::string out;
    CHECK(gsing("surface " + input("case_study.json"), &out) == 0);
    auto doc = json::parse(out);
    CHECK(doc["status"] == "ok");
    CHECK(doc["result"]["degree"] == 3);
    CHECK(doc["result"]["F"].get<std::string>().rfind("80 * x^3 - 107 * x^2 * y", 0) == 0);
}

TEST_CASE("exit codes") {
    CHECK(gsing("verify " + input("planar.json")) == 1);
    CHECK(gsing("surface --input " + kData + "/missing.json") == 2);
    CHECK(gsing("surface " + input("case_study.json") + " --colour red") == 2);
    CHECK(gsing("draw " + input("case_study.json")) == 2);
    CHECK(gsing("surface") == 2);
    CHECK(gsing("surface " + input("case_study.json") + " --tol -1") == 2);
    CHECK(gsing("mesh " + input("case_study.json") + " --box 1,1,0,1,0,1") == 2);
    CHECK(gsing("--help") == 0);
}

TEST_CASE("output directory") {
    auto dir = kTmp / "out";
    fs::remove_all(dir);
    CHECK(gsing("param " + input("case_study.json") + " --samples 7 --out " + dir.string()) == 0);
    REQUIRE(fs::exists(dir / "param_report.json"));
    REQUIRE(fs::exists(dir / "param_samples.csv"));
    std::ifstream f(dir / "param_samples.csv");
    std::size_t rows = 0;
    for (std::string line; std::getline(f, line);) ++rows;
    CHECK(rows == 8);
    std::ifstream r(dir / "param_report.json");
    auto doc = json::parse(r);
    CHECK(doc["config"]["samples"] == 7);
    fs::remove_all(dir);

    // commands without artifacts still create the directory for the report
    CHECK(gsing("surface " + input("case_study.json") + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "surface_report.json"));
    fs::remove_all(dir);
}

TEST_CASE("random platforms and determinism") {
    std::string a, b;
    CHECK(gsing("verify --random 2", &a) == 0);
    CHECK(gsing("verify --random 2", &b) == 0);
    CHECK(a == b);
    auto doc = json::parse(a);
    CHECK(doc["summary"]["checks"] == doc["summary"]["passed"]);
    CHECK(gsing("surface --random 2 " + input("case_study.json")) == 2);
}
