#pragma once

// Fixtures shared by the test programs: the case-study platform, cached
// pipelines, and the published formulas for that platform, transcribed by
// hand as polynomial text.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "gsing/lines.hpp"

namespace fixture {

inline std::string data_path(const std::string& name) { return std::string(GSING_DATA_DIR) + "/" + name; }

inline const gsing::PlatformSpec& case_study() {
    static const gsing::PlatformSpec spec = gsing::load_platform_spec(data_path("case_study.json"));
    return spec;
}

inline std::shared_ptr<const gsing::OrientationPipeline> case_pipeline() {
    static const auto pl = gsing::OrientationPipeline::build(case_study().arch, case_study().orient);
    return pl;
}

inline const gsing::LineSearchResult& case_lines() {
    static const auto res = gsing::find_lines(case_pipeline()->surface.F);
    return res;
}

inline const gsing::LineClassification& case_classification() {
    static const auto cls = gsing::classify(case_lines().lines, gsing::incidence(case_lines().lines));
    return cls;
}

// Published values for the case study (identity orientation).

inline constexpr const char* kCubic =
    "80x^3-107yx^2-47zx^2-376x^2-9y^2x-301yx+95zxy-1392x"
    "-96z^2x+643zx-68y^3+98zy^2-78y^2+426y+708zy"
    "+78z^2y+234z^2-24z^3+1410z";

inline constexpr const char* kInfinityCubic = "80x^3-107yx^2-47zx^2-9y^2x+95zxy-96z^2x-68y^3+98zy^2+78z^2y-24z^3";

// (o1, o2, o3, v1, v2, v3)
inline const std::array<const char*, 6> kTwistFormulas{
    "-53x^2+92xy-108xz+338x+248y-48z+736",
    "-53xy+92y^2-108yz-3x+496y-300z+732",
    "-53xz+92yz-108z^2+127x-212y+370z-266",
    "-80x^2+55xy-109xz+140y^2-14yz-84z^2+376x+774y+20z+1392",
    "52x^2-131xy+164xz+68y^2-62yz+24z^2-473x+78y-130z-426",
    "156x^2-245xy+180xz-36y^2-102yz+24z^2-663x-578y-234z-1410",
};

inline constexpr std::array<int, 6> kTwistAtOrigin{736, 732, -266, 1392, -426, -1410};

inline constexpr const char* kLinear1 = "72o1-42o2+16v1+21v3+35v2";
inline constexpr const char* kLinear2 = "18o3+30o2-26v1-15v3+5v2";
inline constexpr const char* kQuadratic =
    "168o2^2+80o2v1+522o2v3-296v1v3-159v3^2-518o2v2+264v1v2+212v3v2-165v2^2";

// (w : x : y : z) as quadratic forms in the twist
inline const std::array<const char*, 4> kInverseFormulas{
    "60v3^2+83v1v3+42o2v1-20v3v2-35v1v2+72o2v2-120o2v3-16v1^2",
    "162o2v3+54o2v2-48v1v3-48v1v2-213v2^2+63v3^2-42v3v2",
    "-54o2v1+48v1^2+288o2v3-357v1v3-144v3^2+213v1v2-48v3v2",
    "-162o2v1-288o2v2-63v1v3+399v1v2+48v2^2+48v1^2+144v3v2",
};

inline constexpr const char* kL = "-53x+92y-108z";
inline const std::array<const char*, 3> kVInfinity{
    "-80x^2+55xy-109xz+140y^2-14yz-84z^2",
    "52x^2-131xy+164xz+68y^2-62yz+24z^2",
    "156x^2-245xy+180xz-36y^2-102yz+24z^2",
};

inline constexpr const char* kFallbackFactor = "-x^2+7yx-12zx-6z^2+7y^2-7zy";
inline const std::array<const char*, 3> kFallbackV{
    "-4yx^2-12zx^2+17y^2x+zxy-18z^2x+4y^3+7zy^2-5z^2y-6z^3",
    "4x^3-17yx^2+14zx^2-4y^2x+11zxy+6z^2x+2zy^2+4z^2y",
    "12x^3-15yx^2+18zx^2-18y^2x-zxy+6z^2x-2y^3-4zy^2",
};

// orbit polynomials of the chart-x slope d, low to high
inline const std::vector<long long> kF2{-56, 4137, 2796};
inline const std::vector<long long> kF5{-515006656, 1491086416, -1145865348, -6870509, 160133255, 14853594};

inline gsing::MultiPoly poly(const char* text) { return gsing::MultiPoly::parse(text); }

/// a = c b for one nonzero rational c.
inline bool proportional(const gsing::MultiPoly& a, const gsing::MultiPoly& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a * b.leading_coeff() == b * a.leading_coeff();
}

/// a_k = c b_k for all k with one common nonzero rational c.
template <std::size_t N>
bool proportional(const std::array<gsing::MultiPoly, N>& a, const std::array<gsing::MultiPoly, N>& b) {
    std::size_t k = 0;
    while (k < N && b[k].is_zero()) ++k;
    if (k == N || a[k].is_zero()) return false;
    gsing::Rat c = a[k].leading_coeff() / b[k].leading_coeff();
    for (std::size_t i = 0; i < N; ++i)
        if (!(a[i] == b[i] * c)) return false;
    return true;
}

}  // namespace fixture
