#include "mrsim/control.hpp"

#include <array>
#include <cmath>

#include "mrsim/error.hpp"
#include "mrsim/quaternion.hpp"

namespace mrsim {

namespace {

constexpr double kMinThrustN = 1e-6;

/// Solves a 4x4 system in place by Gaussian elimination with partial pivoting.
std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-12)
            throw_invalid("allocation matrix is singular");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 4> x{};
    for (int r = 3; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < 4; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

} // namespace

void ControllerGains::validate() const {
    const Vec3* all[] = {&position, &velocity, &attitude, &rate};
    for (const Vec3* g : all)
        if (!(g->x > 0.0 && g->y > 0.0 && g->z > 0.0))
            throw_config("controller gains must be positive");
}

AllocationResult allocation_inverse(const Wrench& wrench, const MultirotorParams& params) {
    const int n = params.rotor_count();

    // Allocation rows: collective thrust, then the three torque components.
    // Minimum-norm force solution via A^T (A A^T)^{-1}; exact for a quad.
    auto row = [&](int r, int i) -> double {
        const Vec3& pos = params.rotor_positions[i];
        switch (r) {
        case 0: return 1.0;
        case 1: return pos.y;
        case 2: return -pos.x;
        default: return params.torque_coefficient * params.spin_signs[i];
        }
    };

    std::array<std::array<double, 4>, 4> gram{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            for (int i = 0; i < n; ++i)
                gram[r][c] += row(r, i) * row(c, i);

    const std::array<double, 4> target{wrench.thrust, wrench.torque.x, wrench.torque.y,
                                       wrench.torque.z};
    const std::array<double, 4> multipliers = solve4(gram, target);

    AllocationResult out;
    out.command.speeds.resize(n);
    for (int i = 0; i < n; ++i) {
        double force = 0.0;
        for (int r = 0; r < 4; ++r) force += row(r, i) * multipliers[r];
        if (force < 0.0) {
            force = 0.0;
            out.saturated = true;
        }
        double speed = std::sqrt(force / params.thrust_coefficient);
        if (speed > params.max_rotor_speed) {
            speed = params.max_rotor_speed;
            out.saturated = true;
        }
        out.command.speeds[i] = speed;
    }
    return out;
}

ControlOutput geometric_control_update(const RigidBodyState& state, const FlatReference& ref,
                                       const ControllerGains& gains,
                                       const MultirotorParams& params) {
    if (!state.finite()) throw_invalid("controller: non-finite state");

    const Vec3 e_p = state.position - ref.position;
    const Vec3 e_v = state.velocity - ref.velocity;

    Vec3 force_des = -gains.position.cwise(e_p) - gains.velocity.cwise(e_v) +
                     params.mass * (ref.acceleration + Vec3{0.0, 0.0, params.gravity});

    ControlOutput out;

    // Collective thrust is the desired force projected on the current body z.
    const Vec3 body_z = quat_rotate(state.attitude, Vec3::unit_z());
    double thrust = force_des.dot(body_z);
    if (thrust <= 0.0) {
        thrust = kMinThrustN;
        out.thrust_clamped = true;
    }

    // Desired attitude from the force direction and the reference yaw.
    const double force_norm = force_des.norm();
    Vec3 z_des = force_norm > kMinThrustN ? force_des / force_norm : Vec3::unit_z();
    const Vec3 yaw_dir{std::cos(ref.yaw), std::sin(ref.yaw), 0.0};
    Vec3 y_des = z_des.cross(yaw_dir);
    const double y_norm = y_des.norm();
    if (y_norm < 1e-6) {
        // thrust axis parallel to the yaw direction; keep lateral axis stable
        y_des = z_des.cross(Vec3{-std::sin(ref.yaw), std::cos(ref.yaw), 0.0});
    } else {
        y_des = y_des / y_norm;
    }
    const Vec3 x_des = y_des.cross(z_des);

    // Attitude error on SO(3): 1/2 vee(Rd^T R - R^T Rd).
    const Quat& q = state.attitude;
    const Vec3 r_x = quat_rotate(q, Vec3{1.0, 0.0, 0.0});
    const Vec3 r_y = quat_rotate(q, Vec3{0.0, 1.0, 0.0});
    const Vec3 r_z = body_z;
    const Vec3 e_att{z_des.dot(r_y) - y_des.dot(r_z),
                     x_des.dot(r_z) - z_des.dot(r_x),
                     y_des.dot(r_x) - x_des.dot(r_y)};
    const Vec3 e_r = 0.5 * e_att;

    // Body-rate feedforward from the reference jerk (differential flatness).
    Vec3 rate_des_world = Vec3::zero();
    if (force_norm > kMinThrustN) {
        const Vec3 h = (params.mass / force_norm) *
                       (ref.jerk - z_des.dot(ref.jerk) * z_des);
        const Vec3 rate_des_body{-h.dot(y_des), h.dot(x_des), ref.yaw_rate * z_des.z};
        rate_des_world = x_des * rate_des_body.x + y_des * rate_des_body.y +
                         z_des * rate_des_body.z;
    }
    const Vec3 e_w = state.angular_velocity - quat_rotate_inverse(q, rate_des_world);

    const Vec3& w = state.angular_velocity;
    out.wrench.thrust = thrust;
    out.wrench.torque = -gains.attitude.cwise(e_r) - gains.rate.cwise(e_w) +
                        w.cross(params.inertia.cwise(w));

    AllocationResult alloc = allocation_inverse(out.wrench, params);
    out.command = std::move(alloc.command);
    out.saturated = alloc.saturated;
    return out;
}

} // namespace mrsim
