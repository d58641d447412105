#include "mrsim/dynamics.hpp"

#include <cmath>
#include <string>

#include "mrsim/error.hpp"

namespace mrsim {

MultirotorParams MultirotorParams::default_quad() {
    MultirotorParams p;
    const double h = 0.25 / std::sqrt(2.0);
    // X layout, rotors listed so yaw-torque signs alternate: front-left,
    // front-right, back-right, back-left. Diagonal pairs spin together.
    p.rotor_positions = {{h, h, 0.0}, {h, -h, 0.0}, {-h, -h, 0.0}, {-h, h, 0.0}};
    p.spin_signs = {+1, -1, +1, -1};
    return p;
}

void MultirotorParams::validate() const {
    if (!(mass > 0.0)) throw_config("vehicle mass must be positive");
    if (!(inertia.x > 0.0 && inertia.y > 0.0 && inertia.z > 0.0))
        throw_config("inertia components must be positive");
    if (!(drag.x >= 0.0 && drag.y >= 0.0 && drag.z >= 0.0))
        throw_config("drag coefficients must be non-negative");
    const int n = rotor_count();
    if (n < 4 || n % 2 != 0)
        throw_config("rotor count must be even and at least 4");
    if (static_cast<int>(spin_signs.size()) != n)
        throw_config("spin_signs length must match rotor count");
    for (int i = 0; i < n; ++i) {
        const int expected = (i % 2 == 0) ? +1 : -1;
        if (spin_signs[i] != expected)
            throw_config("spin_signs must alternate starting +1 (rotor " +
                         std::to_string(i) + ")");
        if (!rotor_positions[i].finite())
            throw_config("rotor position must be finite");
    }
    if (!(thrust_coefficient > 0.0)) throw_config("thrust coefficient must be positive");
    if (!(max_rotor_speed > 0.0)) throw_config("max rotor speed must be positive");
    if (!(gravity > 0.0)) throw_config("gravity must be positive");
}

double rotor_thrust(double speed, double thrust_coefficient) {
    if (!std::isfinite(speed) || speed < 0.0)
        throw_invalid("rotor speed must be finite and non-negative");
    return thrust_coefficient * speed * speed;
}

Wrench wrench_from_forces(const std::vector<double>& forces, const MultirotorParams& params) {
    const int n = params.rotor_count();
    if (static_cast<int>(forces.size()) != n)
        throw_invalid("force vector length does not match rotor count");

    Wrench w;
    for (int i = 0; i < n; ++i) {
        const double f = forces[i];
        const Vec3& r = params.rotor_positions[i];
        w.thrust += f;
        // r x (F e3) = (ry F, -rx F, 0)
        w.torque.x += r.y * f;
        w.torque.y -= r.x * f;
        w.torque.z += params.torque_coefficient * params.spin_signs[i] * f;
    }
    return w;
}

Wrench wrench_from_command(const RotorCommand& cmd, const MultirotorParams& params) {
    const int n = params.rotor_count();
    if (static_cast<int>(cmd.speeds.size()) != n)
        throw_invalid("rotor command length does not match rotor count");
    std::vector<double> forces(n);
    for (int i = 0; i < n; ++i)
        forces[i] = rotor_thrust(cmd.speeds[i], params.thrust_coefficient);
    return wrench_from_forces(forces, params);
}

StateDerivative state_derivative(const RigidBodyState& state, const Wrench& wrench,
                                 const MultirotorParams& params) {
    if (!state.finite()) throw_invalid("state_derivative: non-finite state");
    if (wrench.thrust < 0.0) throw_invalid("state_derivative: negative thrust");

    StateDerivative d;
    d.position_dot = state.velocity;

    const Quat& q = state.attitude;
    const Vec3 thrust_accel =
        quat_rotate(q, Vec3{0.0, 0.0, wrench.thrust / params.mass});
    const Vec3 body_velocity = quat_rotate_inverse(q, state.velocity);
    const Vec3 drag_accel = quat_rotate(q, params.drag.cwise(body_velocity));
    d.velocity_dot = Vec3{0.0, 0.0, -params.gravity} + thrust_accel - drag_accel;

    const Vec3& w = state.angular_velocity;
    const Vec3 coriolis = w.cross(params.inertia.cwise(w));
    const Vec3 net = wrench.torque - coriolis;
    d.angular_velocity_dot = {net.x / params.inertia.x,
                              net.y / params.inertia.y,
                              net.z / params.inertia.z};

    d.attitude_dot = quat_derivative(q, w);
    return d;
}

namespace {

RigidBodyState advance(const RigidBodyState& s, const StateDerivative& d, double dt) {
    RigidBodyState out = s;
    out.position += d.position_dot * dt;
    out.velocity += d.velocity_dot * dt;
    out.attitude.x += d.attitude_dot.x * dt;
    out.attitude.y += d.attitude_dot.y * dt;
    out.attitude.z += d.attitude_dot.z * dt;
    out.attitude.w += d.attitude_dot.w * dt;
    out.angular_velocity += d.angular_velocity_dot * dt;
    return out;
}

} // namespace

RigidBodyState step(const RigidBodyState& state, const RotorCommand& cmd, double dt,
                    const MultirotorParams& params) {
    if (!(dt > 0.0 && dt <= 0.02))
        throw_invalid("step: dt must be in (0, 0.02] s");

    const Wrench w = wrench_from_command(cmd, params);

    const StateDerivative k1 = state_derivative(state, w, params);
    const StateDerivative k2 = state_derivative(advance(state, k1, 0.5 * dt), w, params);
    const StateDerivative k3 = state_derivative(advance(state, k2, 0.5 * dt), w, params);
    const StateDerivative k4 = state_derivative(advance(state, k3, dt), w, params);

    RigidBodyState out = state;
    const double c = dt / 6.0;
    auto combine = [c](const Vec3& a, const Vec3& b, const Vec3& d2, const Vec3& e) {
        return c * (a + 2.0 * b + 2.0 * d2 + e);
    };
    out.position += combine(k1.position_dot, k2.position_dot, k3.position_dot, k4.position_dot);
    out.velocity += combine(k1.velocity_dot, k2.velocity_dot, k3.velocity_dot, k4.velocity_dot);
    out.angular_velocity += combine(k1.angular_velocity_dot, k2.angular_velocity_dot,
                                    k3.angular_velocity_dot, k4.angular_velocity_dot);
    out.attitude.x += c * (k1.attitude_dot.x + 2.0 * k2.attitude_dot.x + 2.0 * k3.attitude_dot.x + k4.attitude_dot.x);
    out.attitude.y += c * (k1.attitude_dot.y + 2.0 * k2.attitude_dot.y + 2.0 * k3.attitude_dot.y + k4.attitude_dot.y);
    out.attitude.z += c * (k1.attitude_dot.z + 2.0 * k2.attitude_dot.z + 2.0 * k3.attitude_dot.z + k4.attitude_dot.z);
    out.attitude.w += c * (k1.attitude_dot.w + 2.0 * k2.attitude_dot.w + 2.0 * k3.attitude_dot.w + k4.attitude_dot.w);

    out.attitude = out.attitude.normalized();
    out.time = state.time + dt;
    return out;
}

} // namespace mrsim
