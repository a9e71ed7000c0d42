#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "gsing/gsing.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

const std::string kData = GSING_DATA_DIR;

struct Handle {
    gsing_platform* p = nullptr;
    ~Handle() { gsing_platform_free(p); }
};

std::string take(char* s) {
    std::string out = s ? s : "";
    gsing_free_string(s);
    return out;
}

double ratio(const std::string& q) {
    auto slash = q.find('/');
    if (slash == std::string::npos) return std::stod(q);
    return std::stod(q.substr(0, slash)) / std::stod(q.substr(slash + 1));
}

}  // namespace

TEST_CASE("loading and describing a platform") {
    CHECK(std::strlen(gsing_version()) > 0);
    Handle h;
    REQUIRE(gsing_platform_load((kData + "/case_study.json").c_str(), &h.p) == GSING_OK);
    int degree = 0;
    CHECK(gsing_cubic_degree(h.p, &degree) == GSING_OK);
    CHECK(degree == 3);
    char* text = nullptr;
    REQUIRE(gsing_cubic_text(h.p, &text) == GSING_OK);
    CHECK(take(text) ==
          "80 * x^3 - 107 * x^2 * y - 47 * x^2 * z - 9 * x * y^2 + 95 * x * y * z - 96 * x * z^2 - 68 * y^3 + 98 * "
          "y^2 * z + 78 * y * z^2 - 24 * z^3 - 376 * x^2 - 301 * x * y + 643 * x * z - 78 * y^2 + 708 * y * z + 234 * "
          "z^2 - 1392 * x + 426 * y + 1410 * z");

    char* doc = nullptr;
    REQUIRE(gsing_platform_json(h.p, &doc) == GSING_OK);
    Handle again;
    CHECK(gsing_platform_parse(take(doc).c_str(), &again.p) == GSING_OK);
    int d2 = 0;
    CHECK(gsing_cubic_degree(again.p, &d2) == GSING_OK);
    CHECK(d2 == 3);
}

TEST_CASE("singularity, Rec and Pos through the C interface") {
    Handle h;
    REQUIRE(gsing_platform_load((kData + "/case_study.json").c_str(), &h.p) == GSING_OK);
    const double origin[3] = {0, 0, 0};
    int singular = 0;
    double residual = 1;
    CHECK(gsing_is_singular(h.p, origin, 1e-8, &singular, &residual) == GSING_OK);
    CHECK(singular == 1);
    CHECK(residual == 0);

    // the published twist at the origin, scaled so the largest entry is 1
    const double want[6] = {736, 732, -266, 1392, -426, -1410};
    double tw[6];
    REQUIRE(gsing_rec(h.p, origin, 1e-8, tw) == GSING_OK);
    for (int i = 0; i < 6; ++i) CHECK(tw[i] == doctest::Approx(want[i] / -1410).epsilon(1e-14));

    char* xyz = nullptr;
    REQUIRE(gsing_param_eval(h.p, "1/2", "-1/3", &xyz) == GSING_OK);
    auto arr = json::parse(take(xyz));
    REQUIRE(arr.size() == 3);
    double P[3];
    for (int k = 0; k < 3; ++k) P[k] = ratio(arr[k].get<std::string>());
    CHECK(gsing_is_singular(h.p, P, 1e-8, &singular, &residual) == GSING_OK);
    CHECK(singular == 1);
    REQUIRE(gsing_rec(h.p, P, 1e-8, tw) == GSING_OK);
    double back[3];
    REQUIRE(gsing_pos(h.p, tw, 1e-8, back) == GSING_OK);
    for (int k = 0; k < 3; ++k) CHECK(back[k] == doctest::Approx(P[k]).epsilon(1e-8));

    const double off[6] = {1, 2, 3, 4, 5, 6};
    CHECK(gsing_pos(h.p, off, 1e-8, back) == GSING_DOMAIN);
    CHECK(std::strlen(gsing_last_error()) > 0);
}

TEST_CASE("running commands") {
    Handle h;
    REQUIRE(gsing_platform_random(3, &h.p) == GSING_OK);
    char* report = nullptr;
    CHECK(gsing_run(h.p, "verify", nullptr, &report) == GSING_OK);
    auto doc = json::parse(take(report));
    CHECK(doc["schema"] == "gsing-report/1");
    CHECK(doc["status"] == "ok");
    CHECK(doc["summary"]["checks"] == doc["summary"]["passed"]);

    CHECK(gsing_run(h.p, "param", R"({"samples": 4})", &report) == GSING_OK);
    doc = json::parse(take(report));
    CHECK(doc["result"]["samples"]["produced"] == 4);
}

TEST_CASE("bad arguments") {
    gsing_platform* p = nullptr;
    CHECK(gsing_platform_load(nullptr, &p) == GSING_INPUT);
    CHECK(std::strlen(gsing_last_error()) > 0);
    CHECK(gsing_platform_load((kData + "/no_such_file.json").c_str(), &p) == GSING_INPUT);
    CHECK(std::string(gsing_last_error()).find("no_such_file") != std::string::npos);
    CHECK(p == nullptr);
    CHECK(gsing_platform_parse("{not json", &p) == GSING_INPUT);
    CHECK(gsing_platform_parse(R"({"base": []})", &p) == GSING_INPUT);

    Handle h;
    REQUIRE(gsing_platform_load((kData + "/case_study.json").c_str(), &h.p) == GSING_OK);
    char* report = nullptr;
    CHECK(gsing_run(h.p, "draw", nullptr, &report) == GSING_INPUT);
    CHECK(gsing_run(h.p, "verify", "{bad", &report) == GSING_INPUT);
    CHECK(gsing_run(h.p, "verify", R"({"colour": 2})", &report) == GSING_INPUT);
    CHECK(gsing_run(nullptr, "verify", nullptr, &report) == GSING_INPUT);
    CHECK(gsing_cubic_degree(h.p, nullptr) == GSING_INPUT);
    CHECK(gsing_rec(h.p, nullptr, 1e-8, nullptr) == GSING_INPUT);
    char* xyz = nullptr;
    CHECK(gsing_param_eval(h.p, "1/0", "2", &xyz) == GSING_INPUT);
    CHECK(gsing_param_eval(h.p, "abc", "2", &xyz) == GSING_INPUT);
    gsing_platform_free(nullptr);
    gsing_free_string(nullptr);
}
