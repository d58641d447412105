#include "mrsim/vehicle.hpp"

#include <algorithm>
#include <cmath>

#include "mrsim/control.hpp"
#include "mrsim/error.hpp"
#include "mrsim/mavlink/hil.hpp"
#include "mrsim/noise.hpp"
#include "mrsim/trajectory.hpp"

namespace mrsim {

namespace {

std::shared_ptr<const Trajectory> build_trajectory(const TrajectoryConfig& config) {
    if (const auto* hover = std::get_if<HoverTrajectoryConfig>(&config)) {
        return std::make_shared<HoverTrajectory>(hover->position, hover->yaw);
    }
    const auto& relay = std::get<RelayTrajectoryConfig>(config);
    return std::make_shared<RelayTrajectory>(relay.aggressiveness, relay.time_offset,
                                             relay.mirror_y, relay.position_offset);
}

std::unique_ptr<ControlBackend> build_backend(const VehicleSpec& spec) {
    if (const auto* geo = std::get_if<GeometricBackendConfig>(&spec.backend)) {
        return std::make_unique<GeometricBackend>(build_trajectory(geo->trajectory),
                                                  geo->gains, spec.params);
    }
    if (const auto* mav_cfg = std::get_if<MavlinkBackendConfig>(&spec.backend)) {
        mav::HilConfig hil;
        hil.remote_host = mav_cfg->remote_host;
        hil.remote_port = mav_cfg->remote_port;
        hil.local_port = mav_cfg->local_port;
        hil.lockstep = mav_cfg->lockstep;
        hil.actuator_timeout_s = mav_cfg->actuator_timeout_s;
        return std::make_unique<mav::MavlinkBackend>(hil, spec.params);
    }
    const auto& script = std::get<ScriptBackendConfig>(spec.backend);
    return std::make_unique<ScriptBackend>(script.speeds, spec.params);
}

RigidBodyState initial_state(const VehicleSpec& spec) {
    RigidBodyState state;
    state.position = spec.initial.position;
    state.velocity = spec.initial.velocity;
    state.attitude = Quat::from_axis_angle(Vec3::unit_z(), spec.initial.yaw);
    state.time = 0.0;

    if (spec.initial.on_trajectory) {
        const auto* geo = std::get_if<GeometricBackendConfig>(&spec.backend);
        if (geo == nullptr) {
            throw_config("initial.on_trajectory requires a geometric backend");
        }
        const FlatReference ref = build_trajectory(geo->trajectory)->at(0.0);
        state.position = ref.position;
        state.velocity = ref.velocity;
        state.attitude = Quat::from_axis_angle(Vec3::unit_z(), ref.yaw);
    }
    return state;
}

} // namespace

Vehicle::Vehicle(const VehicleSpec& spec, const GeoOrigin& origin, std::uint64_t scenario_seed,
                 int index)
    : spec_(spec),
      state_(initial_state(spec)),
      suite_(spec.sensors, origin, spec.params.gravity,
             derive_seed(scenario_seed, static_cast<std::uint64_t>(index))),
      backend_(build_backend(spec)) {
    spec_.params.validate();
}

void Vehicle::attach_writer(std::unique_ptr<TelemetryWriter> writer) {
    writer_ = std::move(writer);
}

void Vehicle::prime() {
    backend_->receive_state(state_);
    // Hover-equilibrium specific force before the first step.
    suite_.prime(state_, Vec3::zero());
    if (suite_.baro()) backend_->receive_baro(*suite_.baro());
    if (suite_.mag()) backend_->receive_mag(*suite_.mag());
    if (suite_.imu()) backend_->receive_imu(*suite_.imu());
    if (suite_.gps()) backend_->receive_gps(*suite_.gps());
}

void Vehicle::tick(double dt) {
    const RotorCommand cmd = backend_->rotor_command();
    state_ = step(state_, cmd, dt, spec_.params);
    ++steps_;

    // True acceleration at the new state under the held command, for the
    // accelerometer.
    const Wrench wrench = wrench_from_command(cmd, spec_.params);
    const Vec3 accel_true = state_derivative(state_, wrench, spec_.params).velocity_dot;

    const std::vector<SensorKind> sampled = suite_.sample_due(state_, accel_true, state_.time);

    backend_->receive_state(state_);
    for (SensorKind kind : sampled) {
        switch (kind) {
            case SensorKind::Baro: backend_->receive_baro(*suite_.baro()); break;
            case SensorKind::Mag: backend_->receive_mag(*suite_.mag()); break;
            case SensorKind::Imu: backend_->receive_imu(*suite_.imu()); break;
            case SensorKind::Gps: backend_->receive_gps(*suite_.gps()); break;
        }
    }

    const std::optional<Vec3> reference = backend_->reference_position();
    if (reference) {
        const double err = (state_.position - *reference).norm();
        err_max_ = std::max(err_max_, err);
        err_sum_sq_ += err * err;
        ++err_count_;
    }

    if (writer_ != nullptr &&
        steps_ % static_cast<std::uint64_t>(spec_.telemetry_decimation) == 0) {
        TelemetryRecord record;
        record.t = state_.time;
        record.state = state_;
        record.reference = reference;
        record.rotor_speeds = cmd.speeds;
        record.baro = suite_.baro();
        record.mag = suite_.mag();
        record.imu = suite_.imu();
        record.gps = suite_.gps();
        writer_->append(record);
    }
}

void Vehicle::shutdown() {
    backend_->shutdown();
    if (writer_ != nullptr) writer_->flush();
}

double Vehicle::rms_tracking_error() const {
    return err_count_ == 0 ? 0.0
                           : std::sqrt(err_sum_sq_ / static_cast<double>(err_count_));
}

// ---------------------------------------------------------------------------
// VehicleManager
// ---------------------------------------------------------------------------

Vehicle& VehicleManager::add(std::unique_ptr<Vehicle> vehicle) {
    if (contains(vehicle->name())) {
        throw_config("duplicate vehicle name '" + vehicle->name() + "'");
    }
    vehicles_.push_back(std::move(vehicle));
    return *vehicles_.back();
}

Vehicle& VehicleManager::get(const std::string& name) {
    for (auto& v : vehicles_) {
        if (v->name() == name) return *v;
    }
    throw_invalid("unknown vehicle '" + name + "'");
}

const Vehicle& VehicleManager::get(const std::string& name) const {
    for (const auto& v : vehicles_) {
        if (v->name() == name) return *v;
    }
    throw_invalid("unknown vehicle '" + name + "'");
}

bool VehicleManager::contains(const std::string& name) const {
    return std::any_of(vehicles_.begin(), vehicles_.end(),
                       [&](const auto& v) { return v->name() == name; });
}

void VehicleManager::remove(const std::string& name) {
    const auto it = std::find_if(vehicles_.begin(), vehicles_.end(),
                                 [&](const auto& v) { return v->name() == name; });
    if (it == vehicles_.end()) throw_invalid("unknown vehicle '" + name + "'");
    (*it)->shutdown();
    vehicles_.erase(it);
}

std::vector<std::string> VehicleManager::names() const {
    std::vector<std::string> out;
    out.reserve(vehicles_.size());
    for (const auto& v : vehicles_) out.push_back(v->name());
    return out;
}

} // namespace mrsim
