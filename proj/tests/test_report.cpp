#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "gsing/report.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace gsing;
using fixture::poly;
using json = nlohmann::json;

namespace {

struct Run {
    int status;
    json doc;
};

Run run(const std::string& command, const std::string& options = "{}",
        const PlatformSpec& spec = fixture::case_study()) {
    auto r = run_job(spec, JobConfig::from_json(command, options));
    return {r.status, json::parse(r.report)};
}

const PlatformSpec& planar() {
    static const auto spec = load_platform_spec(fixture::data_path("planar.json"));
    return spec;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("job configuration") {
    auto c = JobConfig::from_json("verify", "{}");
    CHECK(c.command == "verify");
    CHECK(c.tol == 1e-8);
    CHECK(c.seed == 1);
    CHECK(c.samples == 100);
    CHECK_FALSE(c.precision.has_value());

    auto d = JobConfig::from_json("param", R"({"tol": 1e-6, "seed": 9, "samples": 3, "precision": "quad", "box": 2})");
    CHECK(d.tol == 1e-6);
    CHECK(d.seed == 9);
    CHECK(d.samples == 3);
    CHECK(*d.precision == Precision::extended);
    CHECK(d.box == std::array<double, 6>{-2, 2, -2, 2, -2, 2});
    auto opts = json::parse(d.to_json());
    CHECK(opts["command"] == "param");
    opts.erase("command");
    CHECK(JobConfig::from_json("param", opts.dump()).to_json() == d.to_json());

    auto input_error = [](const std::string& opts) {
        try {
            JobConfig::from_json("surface", opts);
            return false;
        } catch (const Error& e) {
            return e.kind() == ErrorKind::input;
        }
    };
    CHECK(input_error(R"({"colour": 1})"));
    CHECK(input_error(R"({"tol": -1})"));
    CHECK(input_error(R"({"tol": 0})"));
    CHECK(input_error(R"({"precision": "single"})"));
    CHECK(input_error("[1, 2]"));
    CHECK(input_error("{"));
}

TEST_CASE("box parsing") {
    CHECK(parse_box("5") == std::array<double, 6>{-5, 5, -5, 5, -5, 5});
    CHECK(parse_box("0,1,-2,2,3,4") == std::array<double, 6>{0, 1, -2, 2, 3, 4});
    CHECK_THROWS_AS(parse_box("1,2,3"), Error);
    CHECK_THROWS_AS(parse_box("a"), Error);
    CHECK_THROWS_AS(parse_box("-1"), Error);
}

TEST_CASE("surface report") {
    auto r = run("surface");
    CHECK(r.status == 0);
    CHECK(r.doc["schema"] == "gsing-report/1");
    CHECK(r.doc["status"] == "ok");
    CHECK(r.doc["config"]["seed"] == 1);
    const auto& res = r.doc["result"];
    CHECK(res["degree"] == 3);
    CHECK(fixture::proportional(poly(res["F"].get<std::string>().c_str()), poly(fixture::kCubic)));
    CHECK(fixture::proportional(poly(res["H3"].get<std::string>().c_str()), poly(fixture::kInfinityCubic)));
    auto Fh = poly(res["F_h"].get<std::string>().c_str());
    CHECK(fixture::proportional(Fh, poly(fixture::kCubic).homogenize(Var::w, 3)));
    CHECK(res["smoothness"]["rank_five"] == 100);
    CHECK(res["degeneracy"].empty());
}

TEST_CASE("frame offsets are reported") {
    auto spec = parse_platform_spec(R"({"base": [[1,2,3],[3,2,3],[1,4,2],[1,3,5],[2,2,4],[7,5,3]],
        "platform": [[0,0,-1],[2,3,-2],[0,1,3],[1,3,0],[1,3,-2],[2,4,-4]], "cayley": {"p": "0", "q": "0", "r": "0"}})");
    auto r = run("surface", "{}", spec);
    CHECK(r.doc["input"]["base_offset"] == json::array({"1", "2", "3"}));
    CHECK(r.doc["input"]["platform_offset"] == json::array({"0", "0", "-1"}));
    // a translated copy of the case study has the same cubic
    CHECK(fixture::proportional(poly(r.doc["result"]["F"].get<std::string>().c_str()), poly(fixture::kCubic)));
}

TEST_CASE("a planar architecture is flagged") {
    auto r = run("surface", "{}", planar());
    CHECK(r.status == 1);
    CHECK(r.doc["status"] == "findings");
    CHECK_FALSE(r.doc["result"]["degeneracy"].empty());
    bool mentioned = false;
    for (const auto& f : r.doc["findings"]) mentioned = mentioned || f.get<std::string>().find("coplanar") != std::string::npos;
    CHECK(mentioned);

    auto v = run("verify", "{}", planar());
    CHECK(v.status == 1);
    CHECK_FALSE(v.doc["findings"].empty());
}

TEST_CASE("parametrization export") {
    auto r = run("param", R"({"samples": 500})");
    CHECK(r.status == 0);
    const auto& smp = r.doc["result"]["samples"];
    CHECK(smp["produced"] == 500);
    CHECK(smp["all_residuals_zero"] == true);
    auto rows = csv_lines(r.doc["artifacts"]["param_samples.csv"].get<std::string>());
    REQUIRE(rows.size() == 501);
    CHECK(rows[0] == "s,t,x,y,z,residual");

    // independent check of a few rows against the published cubic
    auto F = poly(fixture::kCubic);
    for (std::size_t i = 1; i < rows.size(); i += 50) {
        std::vector<std::string> f;
        std::stringstream ss(rows[i]);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        REQUIRE(f.size() == 6);
        CHECK(f[5] == "0");
        CHECK(F.evaluate(position_point(parse_rat(f[2]), parse_rat(f[3]), parse_rat(f[4]))) == 0);
    }

    // exported rational functions reproduce the sampled poses
    const auto& res = r.doc["result"];
    std::array<MultiPoly, 4> fns{poly(res["x"].get<std::string>().c_str()), poly(res["y"].get<std::string>().c_str()),
                                 poly(res["z"].get<std::string>().c_str()),
                                 poly(res["denominator"].get<std::string>().c_str())};
    std::vector<std::string> f;
    std::stringstream ss(rows[1]);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    std::array<Rat, kVarCount> pt{};
    pt[static_cast<std::size_t>(Var::s)] = parse_rat(f[0]);
    pt[static_cast<std::size_t>(Var::t)] = parse_rat(f[1]);
    Rat w = fns[3].evaluate(pt);
    REQUIRE(w != 0);
    for (std::size_t k = 0; k < 3; ++k) CHECK(fns[k].evaluate(pt) / w == parse_rat(f[2 + k]));
}

TEST_CASE("reports are deterministic") {
    auto a = run_job(fixture::case_study(), JobConfig::from_json("param", R"({"samples": 20, "seed": 4})"));
    auto b = run_job(fixture::case_study(), JobConfig::from_json("param", R"({"samples": 20, "seed": 4})"));
    CHECK(a.report == b.report);
    auto c = run_job(fixture::case_study(), JobConfig::from_json("param", R"({"samples": 20, "seed": 5})"));
    CHECK(a.report != c.report);
}

TEST_CASE("zero samples give a header-only CSV") {
    auto r = run("param", R"({"samples": 0})");
    CHECK(r.status == 0);
    CHECK(r.doc["artifacts"]["param_samples.csv"] == "s,t,x,y,z,residual\n");
}

TEST_CASE("numeric parametrization") {
    auto r = run("param", R"({"samples": 500, "precision": "double"})");
    CHECK(r.status == 0);
    CHECK(r.doc["result"]["samples"]["max_relative_residual"].get<double>() <= 1e-9);
}

TEST_CASE("verification of the case study") {
    auto r = run("verify");
    CHECK(r.status == 0);
    CHECK(r.doc["findings"].empty());
    REQUIRE(r.doc["checks"].is_array());
    for (const auto& c : r.doc["checks"]) CHECK_MESSAGE(c["pass"].get<bool>(), c["name"].get<std::string>());
    CHECK(r.doc["summary"]["checks"] == r.doc["summary"]["passed"]);
    const auto& cls = r.doc["result"]["classification"];
    CHECK(cls["F2"]["integer"] == json::array({"-56", "4137", "2796"}));
    CHECK(cls["F5"]["integer"][5] == "14853594");
}

TEST_CASE("twist, quadric, lines and infinity reports") {
    for (const char* cmd : {"twist", "quadric", "lines", "infinity"}) {
        auto r = run(cmd);
        CHECK_MESSAGE(r.status == 0, cmd);
        CHECK(r.doc["command"] == cmd);
    }
}

TEST_CASE("mesh export") {
    auto r = run("mesh", R"({"grid": 64, "box": 10})");
    CHECK(r.status == 0);
    auto vtk = csv_lines(r.doc["artifacts"]["surface_grid.vtk"].get<std::string>());
    REQUIRE(vtk.size() == 10 + 64 * 64 * 64);
    CHECK(vtk[4] == "DIMENSIONS 64 64 64");
    // grid values against the published cubic at a few nodes
    auto F = poly(fixture::kCubic);
    const double step = 20.0 / 63;
    for (std::size_t idx : {std::size_t(0), std::size_t(12345), std::size_t(200000), std::size_t(64 * 64 * 64 - 1)}) {
        std::size_t i = idx % 64, j = (idx / 64) % 64, k = idx / 4096;
        auto pt = position_point(-10 + double(i) * step, -10 + double(j) * step, -10 + double(k) * step);
        double want = F.evaluate(pt);
        CHECK(std::stod(vtk[10 + idx]) == doctest::Approx(want).epsilon(1e-12).scale(F.magnitude(pt)));
    }

    auto lines = json::parse(r.doc["artifacts"]["lines.json"].get<std::string>());
    REQUIRE(lines["lines"].size() == 27);
    std::map<std::string, int> tags;
    for (const auto& l : lines["lines"]) ++tags[l["class"].get<std::string>()];
    CHECK(tags.size() == 4);
    std::vector<int> sizes;
    for (const auto& [k, v] : tags) sizes.push_back(v);
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int>{2, 5, 10, 10});

    auto empty = run("mesh", R"({"box": [1, 1, 0, 1, 0, 1]})");
    CHECK(empty.status == 2);
    CHECK(empty.doc["error"]["kind"] == "input");
}

TEST_CASE("artifacts go to the output directory") {
    auto dir = std::filesystem::temp_directory_path() / "gsing_report_test";
    std::filesystem::remove_all(dir);
    auto r = run("param", json{{"samples", 5}, {"out", dir.string()}}.dump());
    CHECK(r.status == 0);
    CHECK(std::filesystem::exists(dir / "param_samples.csv"));
    CHECK(r.doc["artifacts"]["param_samples.csv"] == (dir / "param_samples.csv").string());
    std::filesystem::remove_all(dir);
}

TEST_CASE("a missing field is named in the error") {
    try {
        parse_platform_spec(R"({"base": [[0,0,0],[2,0,0],[0,2,-1],[0,1,2],[1,0,1],[6,3,0]], "cayley": {"p": "0", "q": "0", "r": "0"}})");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("platform") != std::string::npos);
    }
    CHECK_THROWS_AS(JobConfig::from_json("draw", "{}"), Error);
}
