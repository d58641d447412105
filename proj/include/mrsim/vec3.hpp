#pragma once

#include <cmath>

namespace mrsim {

/// 3-element double vector. Units depend on context (m, m/s, rad/s, N, N*m).
struct Vec3 {
    double x{0.0}, y{0.0}, z{0.0};

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    double operator[](int i) const { return (&x)[i]; }
    double& operator[](int i) { return (&x)[i]; }

    constexpr Vec3 operator+(const Vec3& v) const { return {x + v.x, y + v.y, z + v.z}; }
    constexpr Vec3 operator-(const Vec3& v) const { return {x - v.x, y - v.y, z - v.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }

    Vec3& operator+=(const Vec3& v) { x += v.x; y += v.y; z += v.z; return *this; }
    Vec3& operator-=(const Vec3& v) { x -= v.x; y -= v.y; z -= v.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    constexpr bool operator==(const Vec3&) const = default;

    constexpr double dot(const Vec3& v) const { return x * v.x + y * v.y + z * v.z; }
    constexpr double norm_squared() const { return dot(*this); }
    double norm() const { return std::sqrt(norm_squared()); }

    constexpr Vec3 cross(const Vec3& v) const {
        return {y * v.z - z * v.y,
                z * v.x - x * v.z,
                x * v.y - y * v.x};
    }

    /// Component-wise product, used for diagonal-matrix application.
    constexpr Vec3 cwise(const Vec3& v) const { return {x * v.x, y * v.y, z * v.z}; }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    static constexpr Vec3 zero() { return {0.0, 0.0, 0.0}; }
    static constexpr Vec3 unit_z() { return {0.0, 0.0, 1.0}; }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

} // namespace mrsim
