#pragma once

// Platform geometry: joint centers, Cayley orientations, limb Plücker lines.

#include <array>
#include <string>

#include "gsing/vec3.hpp"

namespace gsing {

/// Joint centers of a Gough-Stewart platform, translated so that the first
/// base joint and the first platform joint sit at their frame origins.
struct Architecture {
    std::array<Vec3Q, 6> base;      ///< A_i in the fixed frame
    std::array<Vec3Q, 6> platform;  ///< b_i in the platform frame
    Vec3Q base_offset;              ///< raw A_1, subtracted from every A_i
    Vec3Q platform_offset;          ///< raw b_1, subtracted from every b_i
    int base_rank = 0;              ///< rank of {A_2, ..., A_6}

    bool operator==(const Architecture&) const = default;
};

/// Shifts A_1 and b_1 to the origin. Throws ErrorKind::degenerate when two
/// joint centers of the same set coincide.
Architecture normalize_architecture(const std::array<Vec3Q, 6>& raw_base, const std::array<Vec3Q, 6>& raw_platform);

struct Orientation {
    Rat p, q, r;
    Rat delta;  ///< 1 + p^2 + q^2 + r^2
    Mat3Q R;

    bool operator==(const Orientation&) const = default;
};

/// R = (I + U)(I - U)^{-1} for the skew matrix U of (p, q, r), written out
/// over the common denominator delta. Exact; never fails.
Orientation cayley_rotation(const Rat& p, const Rat& q, const Rat& r);

/// Inverse of cayley_rotation. Throws ErrorKind::domain on half-turns
/// (1 + tr R = 0).
std::array<Rat, 3> cayley_params(const Mat3Q& R);

/// Accepts an exactly orthogonal rational rotation and routes it through
/// cayley_params.
Orientation orientation_from_matrix(const Mat3Q& R);

/// Line (or force) as direction F and moment M about the origin.
template <class T>
struct Screw {
    Vec3<T> direction;
    Vec3<T> moment;
};

/// Plücker lines of the six limbs at position P: with B_i = R b_i and
/// C_i = B_i - A_i, limb i is (C_i + P | A_i x (C_i + P)).
template <class T>
std::array<Screw<T>, 6> limb_screws(const Architecture& arch, const Orientation& orient, const Vec3<T>& P) {
    std::array<Screw<T>, 6> out;
    for (std::size_t i = 0; i < 6; ++i) {
        Vec3Q c = orient.R * arch.platform[i] - arch.base[i];
        Vec3<T> dir{T(c[0]) + P[0], T(c[1]) + P[1], T(c[2]) + P[2]};
        Vec3<T> a{T(arch.base[i][0]), T(arch.base[i][1]), T(arch.base[i][2])};
        out[i] = {dir, cross(a, dir)};
    }
    return out;
}

template <>
std::array<Screw<double>, 6> limb_screws(const Architecture&, const Orientation&, const Vec3d&);
template <>
std::array<Screw<std::complex<double>>, 6> limb_screws(const Architecture&, const Orientation&, const Vec3c&);

/// B_i = R b_i and C_i = B_i - A_i for all six limbs.
std::array<Vec3Q, 6> rotated_platform(const Architecture& arch, const Orientation& orient);
std::array<Vec3Q, 6> limb_offsets(const Architecture& arch, const Orientation& orient);

/// Converts a platform position given in the raw (user) frames into the
/// normalized frames: P_norm = P_user + R b1_offset - A1_offset.
Vec3Q to_normalized_position(const Architecture& arch, const Orientation& orient, const Vec3Q& user_position);
Vec3Q to_user_position(const Architecture& arch, const Orientation& orient, const Vec3Q& normalized_position);

/// Architecture plus orientation, as read from an input document.
struct PlatformSpec {
    Architecture arch;
    Orientation orient;
};

/// Parses the input schema:
///   { "schema": "gsing-platform/1",
///     "base":     [["num/den","num/den","num/den"], ... 6 entries],
///     "platform": [[...], ... 6 entries],
///     "cayley":   {"p": "num/den", "q": "...", "r": "..."} }
/// Integers may be given as JSON integers; floating-point numbers are rejected.
PlatformSpec parse_platform_spec(const std::string& json_text);
PlatformSpec load_platform_spec(const std::string& path);
/// Serializes back into the input schema (raw, un-normalized coordinates).
std::string dump_platform_spec(const PlatformSpec& spec);

/// Random integer joint centers in [-range, range] and a small-height
/// rational Cayley orientation, retried until the architecture normalizes.
PlatformSpec random_platform_spec(std::uint64_t seed, int range = 4);

/// Stable short hash of the exact input data, for report provenance.
std::string platform_hash(const PlatformSpec& spec);

/// Characteristic length of the architecture (largest joint coordinate
/// magnitude, at least 1), used to size sampling boxes.
double characteristic_length(const Architecture& arch);

}  // namespace gsing
