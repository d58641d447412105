#include "mrsim/backend.hpp"

#include <algorithm>

#include "mrsim/error.hpp"

namespace mrsim {

ScriptBackend::ScriptBackend(std::vector<double> speeds, const MultirotorParams& params) {
    if (static_cast<int>(speeds.size()) != params.rotor_count())
        throw_config("scripted rotor speeds must match the rotor count");
    for (double& s : speeds) s = std::clamp(s, 0.0, params.max_rotor_speed);
    command_.speeds = std::move(speeds);
}

GeometricBackend::GeometricBackend(std::shared_ptr<const Trajectory> trajectory,
                                   ControllerGains gains, MultirotorParams params)
    : trajectory_(std::move(trajectory)), gains_(gains), params_(std::move(params)) {
    if (!trajectory_) throw_config("geometric backend requires a trajectory");
    gains_.validate();
}

RotorCommand GeometricBackend::rotor_command() {
    const FlatReference ref = trajectory_->at(state_.time);
    return geometric_control_update(state_, ref, gains_, params_).command;
}

} // namespace mrsim
