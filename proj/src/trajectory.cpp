#include "mrsim/trajectory.hpp"

#include <cmath>

#include "mrsim/error.hpp"

namespace mrsim {

RelayTrajectory::RelayTrajectory(double aggressiveness, double time_offset, bool mirror_y,
                                 const Vec3& position_offset)
    : s_(aggressiveness),
      time_offset_(time_offset),
      mirror_(mirror_y ? -1.0 : 1.0),
      position_offset_(position_offset) {
    if (!(aggressiveness > 0.0))
        throw_invalid("relay trajectory aggressiveness must be positive");
}

FlatReference RelayTrajectory::at(double time) const {
    const double t = time + time_offset_;
    const double s2 = s_ * s_;
    const double g = std::exp(-0.5 * t * t / s2);

    // Gaussian pulse and its first three derivatives
    const double p = g / s_;
    const double p1 = -(t / (s_ * s2)) * g;
    const double p2 = (g / (s_ * s2)) * (t * t / s2 - 1.0);
    const double p3 = (g * t / (s_ * s2 * s2)) * (3.0 - t * t / s2);

    FlatReference r;
    r.position = position_offset_ + Vec3{t, mirror_ * p, 1.0 + p};
    r.velocity = {1.0, mirror_ * p1, p1};
    r.acceleration = {0.0, mirror_ * p2, p2};
    r.jerk = {0.0, mirror_ * p3, p3};
    return r;
}

} // namespace mrsim
