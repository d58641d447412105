#pragma once

#include <memory>

#include "mrsim/vec3.hpp"

namespace mrsim {

/// Position-and-yaw reference with derivatives, sampled from a smooth path.
struct FlatReference {
    Vec3 position;
    Vec3 velocity;
    Vec3 acceleration;
    Vec3 jerk;
    double yaw{0.0};
    double yaw_rate{0.0};
};

class Trajectory {
public:
    virtual ~Trajectory() = default;
    virtual FlatReference at(double time) const = 0;
};

/// Constant hover setpoint.
class HoverTrajectory : public Trajectory {
public:
    HoverTrajectory(const Vec3& point, double yaw = 0.0) : point_(point), yaw_(yaw) {}

    FlatReference at(double) const override {
        FlatReference r;
        r.position = point_;
        r.yaw = yaw_;
        return r;
    }

private:
    Vec3 point_;
    double yaw_;
};

/// Relay maneuver path: constant-speed travel along x with a Gaussian lateral
/// and vertical excursion,
///     x(t) = t,  y(t) = (1/s) exp(-0.5 (t/s)^2),  z(t) = 1 + y(t),
/// where smaller s makes the excursion more aggressive. The parametric time
/// is sim time plus a configurable offset; the y excursion can be mirrored
/// and the whole path shifted, which is how the second vehicle of a pair is
/// set up.
class RelayTrajectory : public Trajectory {
public:
    /// Throws Error(InvalidArgument) unless aggressiveness > 0.
    RelayTrajectory(double aggressiveness, double time_offset = 0.0, bool mirror_y = false,
                    const Vec3& position_offset = Vec3::zero());

    FlatReference at(double time) const override;

private:
    double s_;
    double time_offset_;
    double mirror_;
    Vec3 position_offset_;
};

} // namespace mrsim
