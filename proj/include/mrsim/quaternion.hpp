#pragma once

#include <array>
#include <cmath>

#include "mrsim/error.hpp"
#include "mrsim/vec3.hpp"

namespace mrsim {

/// Row-major 4x4 matrix, only needed for the quaternion rate map.
struct Matrix4 {
    std::array<std::array<double, 4>, 4> m{};

    double operator()(int r, int c) const { return m[r][c]; }
    double& operator()(int r, int c) { return m[r][c]; }

    std::array<double, 4> apply(const std::array<double, 4>& v) const {
        std::array<double, 4> out{};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                out[r] += m[r][c] * v[c];
        return out;
    }
};

/// Unit quaternion, Hamilton convention, stored as [qx qy qz qw].
/// Rotates body-frame vectors into the inertial frame.
struct Quat {
    double x{0.0}, y{0.0}, z{0.0}, w{1.0};

    constexpr Quat() = default;
    constexpr Quat(double x_, double y_, double z_, double w_)
        : x(x_), y(y_), z(z_), w(w_) {}

    constexpr bool operator==(const Quat&) const = default;

    static constexpr Quat identity() { return {0.0, 0.0, 0.0, 1.0}; }

    static Quat from_axis_angle(const Vec3& axis, double angle) {
        const double n = axis.norm();
        if (n == 0.0) return identity();
        const double half = 0.5 * angle;
        const double s = std::sin(half) / n;
        return {axis.x * s, axis.y * s, axis.z * s, std::cos(half)};
    }

    double norm() const { return std::sqrt(x * x + y * y + z * z + w * w); }

    Quat normalized() const {
        const double n = norm();
        if (n == 0.0) throw_invalid("cannot normalize zero quaternion");
        return {x / n, y / n, z / n, w / n};
    }

    constexpr Quat conjugate() const { return {-x, -y, -z, w}; }

    /// Hamilton product this * rhs.
    constexpr Quat operator*(const Quat& q) const {
        return {w * q.x + x * q.w + y * q.z - z * q.y,
                w * q.y - x * q.z + y * q.w + z * q.x,
                w * q.z + x * q.y - y * q.x + z * q.w,
                w * q.w - x * q.x - y * q.y - z * q.z};
    }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) &&
               std::isfinite(w);
    }

    /// Yaw (Z), for an intrinsic Z-Y-X decomposition.
    double yaw() const {
        return std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
    }
};

/// Rotate v by q (body to inertial for an attitude quaternion).
inline Vec3 quat_rotate(const Quat& q, const Vec3& v) {
    if (!q.finite() || !v.finite()) throw_invalid("quat_rotate: non-finite input");
    // v' = v + 2 w (u x v) + 2 u x (u x v), u = vector part
    const Vec3 u{q.x, q.y, q.z};
    const Vec3 uv = u.cross(v);
    return v + 2.0 * (q.w * uv + u.cross(uv));
}

/// Rotate v by the inverse of q (inertial to body).
inline Vec3 quat_rotate_inverse(const Quat& q, const Vec3& v) {
    return quat_rotate(q.conjugate(), v);
}

/// Kinematic matrix Sk(w) with q_dot = 1/2 Sk(w) q for body rates w,
/// rows and columns ordered [x y z w]. Satisfies Sk^T = -Sk.
inline Matrix4 skew4(const Vec3& w) {
    if (!w.finite()) throw_invalid("skew4: non-finite input");
    Matrix4 s;
    s.m = {{{0.0, w.z, -w.y, w.x},
            {-w.z, 0.0, w.x, w.y},
            {w.y, -w.x, 0.0, w.z},
            {-w.x, -w.y, -w.z, 0.0}}};
    return s;
}

/// Quaternion rate for body angular velocity w: 1/2 Sk(w) q.
inline Quat quat_derivative(const Quat& q, const Vec3& w) {
    return {0.5 * (q.w * w.x + q.y * w.z - q.z * w.y),
            0.5 * (q.w * w.y + q.z * w.x - q.x * w.z),
            0.5 * (q.w * w.z + q.x * w.y - q.y * w.x),
            0.5 * (-q.x * w.x - q.y * w.y - q.z * w.z)};
}

} // namespace mrsim
