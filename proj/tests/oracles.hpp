#pragma once

// Independent reference implementations the tests check the library against.
// Each deliberately uses a different formulation than the code under test:
// rotation matrices instead of direct quaternion formulas, a table-driven
// CRC instead of the bit-shift version, textbook map-projection formulas.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>

#include "mrsim/quaternion.hpp"
#include "mrsim/vec3.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Rotations
// ---------------------------------------------------------------------------

struct Mat3 {
    double m[3][3];

    mrsim::Vec3 apply(const mrsim::Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Mat3 times(const Mat3& o) const {
        Mat3 r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
        return r;
    }
};

/// Direction-cosine matrix of a unit quaternion (textbook expansion).
inline Mat3 rotation_matrix(const mrsim::Quat& q) {
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

/// Hamilton product computed through the left-multiplication matrix, not the
/// componentwise product formula.
inline std::array<double, 4> quat_product_wxyz(const mrsim::Quat& a, const mrsim::Quat& b) {
    // Rows act on (w, x, y, z).
    const double L[4][4] = {
        {a.w, -a.x, -a.y, -a.z},
        {a.x, a.w, -a.z, a.y},
        {a.y, a.z, a.w, -a.x},
        {a.z, -a.y, a.x, a.w},
    };
    const double bv[4] = {b.w, b.x, b.y, b.z};
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += L[i][j] * bv[j];
    return out;
}

/// East-north-up to north-east-down change of basis, as an explicit matrix.
inline Mat3 enu_to_ned_matrix() {
    return {{{0, 1, 0}, {1, 0, 0}, {0, 0, -1}}};
}

/// Front-right-down to front-left-up change of basis.
inline Mat3 frd_to_flu_matrix() {
    return {{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};
}

// ---------------------------------------------------------------------------
// Map projection
// ---------------------------------------------------------------------------

/// Forward azimuthal equidistant projection on a sphere: geodetic point to
/// local tangent-plane meters (x east, y north) about the given center.
inline std::pair<double, double> azeq_forward(double lat_deg, double lon_deg,
                                              double center_lat_deg, double center_lon_deg,
                                              double radius_m) {
    const double d2r = std::numbers::pi / 180.0;
    const double phi = lat_deg * d2r;
    const double phi0 = center_lat_deg * d2r;
    const double dlam = (lon_deg - center_lon_deg) * d2r;

    const double cos_c = std::sin(phi0) * std::sin(phi) +
                         std::cos(phi0) * std::cos(phi) * std::cos(dlam);
    const double c = std::acos(std::clamp(cos_c, -1.0, 1.0));
    const double k = (c < 1e-12) ? 1.0 : c / std::sin(c);

    const double x = radius_m * k * std::cos(phi) * std::sin(dlam);
    const double y = radius_m * k *
                     (std::cos(phi0) * std::sin(phi) -
                      std::sin(phi0) * std::cos(phi) * std::cos(dlam));
    return {x, y};
}

// ---------------------------------------------------------------------------
// Checksums
// ---------------------------------------------------------------------------

/// Table-driven CRC-16/MCRF4XX (reflected polynomial 0x8408, init 0xFFFF,
/// no final xor).
inline std::uint16_t crc16_table(std::span<const std::uint8_t> bytes) {
    static const auto table = [] {
        std::array<std::uint16_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint16_t c = static_cast<std::uint16_t>(i);
            for (int k = 0; k < 8; ++k) {
                c = (c & 1) ? static_cast<std::uint16_t>((c >> 1) ^ 0x8408)
                            : static_cast<std::uint16_t>(c >> 1);
            }
            t[i] = c;
        }
        return t;
    }();
    std::uint16_t crc = 0xFFFF;
    for (std::uint8_t b : bytes) {
        crc = static_cast<std::uint16_t>((crc >> 8) ^ table[(crc ^ b) & 0xFF]);
    }
    return crc;
}

} // namespace oracle
