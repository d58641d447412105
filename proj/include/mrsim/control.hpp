#pragma once

#include "mrsim/dynamics.hpp"
#include "mrsim/trajectory.hpp"
#include "mrsim/vec3.hpp"

namespace mrsim {

/// Per-axis gains of the geometric tracking controller.
struct ControllerGains {
    Vec3 position{11.0, 11.0, 14.0};    // N/m
    Vec3 velocity{6.6, 6.6, 8.0};       // N s/m
    Vec3 attitude{11.6, 11.6, 2.2};     // N m/rad
    Vec3 rate{1.05, 1.05, 0.55};        // N m s/rad

    void validate() const;
};

/// Rotor command produced by the allocation, with saturation reporting.
struct AllocationResult {
    RotorCommand command;
    bool saturated{false};      // a force was clamped at 0 or a speed at max
};

/// Output of one controller update.
struct ControlOutput {
    Wrench wrench;              // pre-allocation desired wrench
    RotorCommand command;
    bool saturated{false};
    bool thrust_clamped{false}; // desired collective thrust was <= 0
};

/// Maps a desired wrench to rotor speeds by inverting the force-to-wrench
/// allocation and the quadratic thrust curve. Negative per-rotor forces clamp
/// to zero and speeds clamp to the rotor limit, both reported as saturation.
AllocationResult allocation_inverse(const Wrench& wrench, const MultirotorParams& params);

/// Geometric trajectory-tracking update: position/velocity feedback plus
/// acceleration feedforward give a desired force; its direction and the
/// reference yaw give a desired attitude; attitude and rate errors give the
/// torque. Body rate feedforward is recovered from the reference jerk.
ControlOutput geometric_control_update(const RigidBodyState& state, const FlatReference& ref,
                                       const ControllerGains& gains,
                                       const MultirotorParams& params);

} // namespace mrsim
