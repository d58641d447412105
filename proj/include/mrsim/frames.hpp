#pragma once

#include "mrsim/error.hpp"
#include "mrsim/quaternion.hpp"
#include "mrsim/vec3.hpp"

namespace mrsim {

enum class InertialFrame { Enu, Ned };
enum class BodyFrame { Flu, Frd };

/// Frame pair an attitude quaternion or state is expressed in.
struct FrameTag {
    InertialFrame inertial{InertialFrame::Enu};
    BodyFrame body{BodyFrame::Flu};

    constexpr bool operator==(const FrameTag&) const = default;
};

// The two swaps below are 180-degree rotations, hence self-inverse:
// ENU<->NED is a half turn about (1,1,0)/sqrt(2), FLU<->FRD about the body x axis.

/// Convert an inertial-frame vector between ENU and NED, (e,n,u) <-> (n,e,-u).
inline Vec3 convert_inertial(const Vec3& v, InertialFrame from, InertialFrame to) {
    if (!v.finite()) throw_invalid("convert_inertial: non-finite input");
    if (from == to) return v;
    return {v.y, v.x, -v.z};
}

/// Convert a body-frame vector between FLU and FRD, (f,l,u) <-> (f,-l,-u).
inline Vec3 convert_body(const Vec3& v, BodyFrame from, BodyFrame to) {
    if (!v.finite()) throw_invalid("convert_body: non-finite input");
    if (from == to) return v;
    return {v.x, -v.y, -v.z};
}

/// Convert an attitude quaternion (body -> inertial) between frame pairs so
/// that rotation commutes with the vector conversions above.
inline Quat convert_attitude(const Quat& q, const FrameTag& from, const FrameTag& to) {
    if (!q.finite()) throw_invalid("convert_attitude: non-finite input");
    static const double h = std::sqrt(0.5);
    Quat out = q;
    if (from.body != to.body) {
        out = out * Quat{1.0, 0.0, 0.0, 0.0};
    }
    if (from.inertial != to.inertial) {
        out = Quat{h, h, 0.0, 0.0} * out;
    }
    return out;
}

} // namespace mrsim
