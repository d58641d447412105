#pragma once

#include <vector>

#include "mrsim/quaternion.hpp"
#include "mrsim/vec3.hpp"

namespace mrsim {

/// Full rigid-body state. Position and velocity are inertial ENU, angular
/// velocity is body FLU, the quaternion rotates body FLU into inertial ENU.
struct RigidBodyState {
    Vec3 position;            // m
    Vec3 velocity;            // m/s
    Quat attitude;            // unit
    Vec3 angular_velocity;    // rad/s
    double time{0.0};         // s

    bool finite() const {
        return position.finite() && velocity.finite() && attitude.finite() &&
               angular_velocity.finite() && std::isfinite(time);
    }
};

struct StateDerivative {
    Vec3 position_dot;
    Vec3 velocity_dot;
    Quat attitude_dot;        // componentwise rate, not a unit quaternion
    Vec3 angular_velocity_dot;
};

/// Physical description of a multirotor. Rotor positions are body FLU and the
/// spin signs follow the alternating yaw-torque sign pattern, first rotor
/// positive.
struct MultirotorParams {
    double mass{1.5};                       // kg
    Vec3 inertia{0.029, 0.029, 0.055};      // kg m^2, diagonal
    Vec3 drag{0.26, 0.26, 0.0};             // 1/s, diagonal linear drag
    std::vector<Vec3> rotor_positions;      // m
    std::vector<int> spin_signs;            // +1 / -1, alternating
    double thrust_coefficient{8.55e-6};     // N s^2 / rad^2
    double torque_coefficient{0.06};        // m
    double max_rotor_speed{1100.0};         // rad/s
    double gravity{9.81};                   // m/s^2

    int rotor_count() const { return static_cast<int>(rotor_positions.size()); }

    /// Quad-X layout with 0.25 m arms and Iris-like constants.
    static MultirotorParams default_quad();

    /// Throws Error(Config) on violated parameter invariants.
    void validate() const;
};

/// Target rotor angular velocities, one per rotor, clamped to [0, max].
struct RotorCommand {
    std::vector<double> speeds;   // rad/s

    static RotorCommand zero(int n) { return {std::vector<double>(n, 0.0)}; }
};

/// Collective thrust along body z plus body torque.
struct Wrench {
    double thrust{0.0};   // N, >= 0
    Vec3 torque;          // N m, body FLU
};

/// Quadratic rotor thrust, F = c * speed^2. Negative speed is rejected.
double rotor_thrust(double speed, double thrust_coefficient);

/// Per-rotor forces to collective thrust and body torque. Roll/pitch torque
/// comes from r_i x (F_i e3); yaw torque alternates sign with rotor index
/// scaled by the reaction torque coefficient.
Wrench wrench_from_forces(const std::vector<double>& forces, const MultirotorParams& params);

Wrench wrench_from_command(const RotorCommand& cmd, const MultirotorParams& params);

/// Continuous-time derivative of the double-integrator rigid-body model with
/// linear body-frame drag.
StateDerivative state_derivative(const RigidBodyState& state, const Wrench& wrench,
                                 const MultirotorParams& params);

/// One fixed RK4 step, rotor speeds held constant over the step. The attitude
/// quaternion is renormalized once at the end. Requires 0 < dt <= 0.02 s.
RigidBodyState step(const RigidBodyState& state, const RotorCommand& cmd, double dt,
                    const MultirotorParams& params);

} // namespace mrsim
