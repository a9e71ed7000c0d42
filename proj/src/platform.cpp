#include "gsing/platform.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gsing/numeric.hpp"
#include "json.hpp"

namespace gsing {

using nlohmann::json;

Architecture normalize_architecture(const std::array<Vec3Q, 6>& raw_base, const std::array<Vec3Q, 6>& raw_platform) {
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) {
            if (raw_base[i] == raw_base[j])
                fail(ErrorKind::degenerate, "degenerate architecture: base joints " + std::to_string(i + 1) + " and " +
                                                std::to_string(j + 1) + " coincide");
            if (raw_platform[i] == raw_platform[j])
                fail(ErrorKind::degenerate, "degenerate architecture: platform joints " + std::to_string(i + 1) +
                                                " and " + std::to_string(j + 1) + " coincide");
        }
    Architecture arch;
    arch.base_offset = raw_base[0];
    arch.platform_offset = raw_platform[0];
    for (std::size_t i = 0; i < 6; ++i) {
        arch.base[i] = raw_base[i] - arch.base_offset;
        arch.platform[i] = raw_platform[i] - arch.platform_offset;
    }
    QMatrix m(5, 3);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t k = 0; k < 3; ++k) m(i, k) = arch.base[i + 1][k];
    arch.base_rank = static_cast<int>(m.rank());
    return arch;
}

Orientation cayley_rotation(const Rat& p, const Rat& q, const Rat& r) {
    Orientation o;
    o.p = p;
    o.q = q;
    o.r = r;
    o.delta = 1 + p * p + q * q + r * r;
    const Rat& d = o.delta;
    o.R(0, 0) = (1 + p * p - q * q - r * r) / d;
    o.R(0, 1) = 2 * (p * q - r) / d;
    o.R(0, 2) = 2 * (p * r + q) / d;
    o.R(1, 0) = 2 * (p * q + r) / d;
    o.R(1, 1) = (1 - p * p + q * q - r * r) / d;
    o.R(1, 2) = 2 * (q * r - p) / d;
    o.R(2, 0) = 2 * (p * r - q) / d;
    o.R(2, 1) = 2 * (q * r + p) / d;
    o.R(2, 2) = (1 - p * p - q * q + r * r) / d;
    return o;
}

std::array<Rat, 3> cayley_params(const Mat3Q& R) {
    Rat den = 1 + R.trace();
    if (den == 0) fail(ErrorKind::domain, "half-turn not representable in Cayley parameters");
    return {(R(2, 1) - R(1, 2)) / den, (R(0, 2) - R(2, 0)) / den, (R(1, 0) - R(0, 1)) / den};
}

Orientation orientation_from_matrix(const Mat3Q& R) {
    if (!(R * R.transpose() == Mat3Q::identity()) || R.determinant() != 1)
        fail(ErrorKind::input, "rotation matrix is not exactly orthogonal with determinant 1");
    auto [p, q, r] = cayley_params(R);
    return cayley_rotation(p, q, r);
}

namespace {

template <class T>
std::array<Screw<T>, 6> numeric_limb_screws(const Architecture& arch, const Orientation& orient, const Vec3<T>& P) {
    std::array<Screw<T>, 6> out;
    auto C = limb_offsets(arch, orient);
    for (std::size_t i = 0; i < 6; ++i) {
        Vec3<T> dir{T(C[i][0].get_d()) + P[0], T(C[i][1].get_d()) + P[1], T(C[i][2].get_d()) + P[2]};
        Vec3<T> a{T(arch.base[i][0].get_d()), T(arch.base[i][1].get_d()), T(arch.base[i][2].get_d())};
        out[i] = {dir, cross(a, dir)};
    }
    return out;
}

}  // namespace

template <>
std::array<Screw<double>, 6> limb_screws(const Architecture& arch, const Orientation& orient, const Vec3d& P) {
    return numeric_limb_screws(arch, orient, P);
}

template <>
std::array<Screw<std::complex<double>>, 6> limb_screws(const Architecture& arch, const Orientation& orient,
                                                       const Vec3c& P) {
    return numeric_limb_screws(arch, orient, P);
}

std::array<Vec3Q, 6> rotated_platform(const Architecture& arch, const Orientation& orient) {
    std::array<Vec3Q, 6> B;
    for (std::size_t i = 0; i < 6; ++i) B[i] = orient.R * arch.platform[i];
    return B;
}

std::array<Vec3Q, 6> limb_offsets(const Architecture& arch, const Orientation& orient) {
    std::array<Vec3Q, 6> C = rotated_platform(arch, orient);
    for (std::size_t i = 0; i < 6; ++i) C[i] -= arch.base[i];
    return C;
}

Vec3Q to_normalized_position(const Architecture& arch, const Orientation& orient, const Vec3Q& user_position) {
    return user_position + orient.R * arch.platform_offset - arch.base_offset;
}

Vec3Q to_user_position(const Architecture& arch, const Orientation& orient, const Vec3Q& normalized_position) {
    return normalized_position - orient.R * arch.platform_offset + arch.base_offset;
}

// ---------------------------------------------------------------- input schema

namespace {

Rat json_rat(const json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return parse_rat(j.get<std::string>());
        } catch (const Error& e) {
            fail(ErrorKind::input, "field '" + where + "': " + e.what());
        }
    }
    if (j.is_number_integer()) return Rat(BigInt(j.dump()));
    fail(ErrorKind::input, "field '" + where + "' must be an exact rational string \"num/den\"");
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) fail(ErrorKind::input, "missing field '" + where + key + "'");
    return obj.at(key);
}

std::array<Vec3Q, 6> json_points(const json& doc, const std::string& key) {
    const json& arr = require(doc, key, "");
    if (!arr.is_array() || arr.size() != 6)
        fail(ErrorKind::input, "field '" + key + "' must be an array of 6 points");
    std::array<Vec3Q, 6> pts;
    for (std::size_t i = 0; i < 6; ++i) {
        const json& p = arr[i];
        std::string where = key + "[" + std::to_string(i) + "]";
        if (!p.is_array() || p.size() != 3) fail(ErrorKind::input, "field '" + where + "' must have 3 coordinates");
        for (std::size_t k = 0; k < 3; ++k) pts[i][k] = json_rat(p[k], where + "[" + std::to_string(k) + "]");
    }
    return pts;
}

}  // namespace

PlatformSpec parse_platform_spec(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::input, std::string("input parse error at byte ") + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) fail(ErrorKind::input, "input document must be a JSON object");
    if (doc.contains("schema") && doc["schema"] != "gsing-platform/1")
        fail(ErrorKind::input, "unsupported schema '" + doc["schema"].dump() + "'");
    auto base = json_points(doc, "base");
    auto platform = json_points(doc, "platform");
    const json& cay = require(doc, "cayley", "");
    Rat p = json_rat(require(cay, "p", "cayley."), "cayley.p");
    Rat q = json_rat(require(cay, "q", "cayley."), "cayley.q");
    Rat r = json_rat(require(cay, "r", "cayley."), "cayley.r");
    return {normalize_architecture(base, platform), cayley_rotation(p, q, r)};
}

PlatformSpec load_platform_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::input, "cannot open input file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_platform_spec(ss.str());
}

std::string dump_platform_spec(const PlatformSpec& spec) {
    json doc;
    doc["schema"] = "gsing-platform/1";
    for (const char* key : {"base", "platform"}) {
        bool is_base = std::string(key) == "base";
        json arr = json::array();
        for (std::size_t i = 0; i < 6; ++i) {
            Vec3Q raw = is_base ? spec.arch.base[i] + spec.arch.base_offset
                                : spec.arch.platform[i] + spec.arch.platform_offset;
            arr.push_back({to_string(raw[0]), to_string(raw[1]), to_string(raw[2])});
        }
        doc[key] = arr;
    }
    doc["cayley"] = {{"p", to_string(spec.orient.p)}, {"q", to_string(spec.orient.q)}, {"r", to_string(spec.orient.r)}};
    return doc.dump(2);
}

std::string platform_hash(const PlatformSpec& spec) {
    // FNV-1a over the canonical serialization.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump_platform_spec(spec)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double characteristic_length(const Architecture& arch) {
    double L = 1;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            L = std::max(L, std::abs(arch.base[i][k].get_d()));
            L = std::max(L, std::abs(arch.platform[i][k].get_d()));
        }
    return L;
}

PlatformSpec random_platform_spec(std::uint64_t seed, int range) {
    Rng rng(seed, 7);
    for (;;) {
        std::array<Vec3Q, 6> base, plat;
        for (auto* set : {&base, &plat})
            for (auto& v : *set)
                for (std::size_t k = 0; k < 3; ++k) v[k] = Rat(rng.integer(-range, range));
        try {
            PlatformSpec spec;
            spec.arch = normalize_architecture(base, plat);
            if (spec.arch.base_rank < 3) continue;
            spec.orient = cayley_rotation(rng.rational(2, 2), rng.rational(2, 2), rng.rational(2, 2));
            return spec;
        } catch (const Error&) {
        }
    }
}

}  // namespace gsing
