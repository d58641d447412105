#pragma once

#include <memory>
#include <optional>

#include "mrsim/control.hpp"
#include "mrsim/dynamics.hpp"
#include "mrsim/sensors.hpp"
#include "mrsim/trajectory.hpp"

namespace mrsim {

/// Consumer of vehicle state and sensor data that produces per-rotor target
/// angular velocities. One backend instance belongs to exactly one vehicle;
/// all callbacks run sequentially inside that vehicle's step loop.
class ControlBackend {
public:
    virtual ~ControlBackend() = default;

    virtual void receive_state(const RigidBodyState&) {}
    virtual void receive_baro(const BaroReading&) {}
    virtual void receive_mag(const MagReading&) {}
    virtual void receive_imu(const ImuReading&) {}
    virtual void receive_gps(const GpsReading&) {}

    /// Called exactly once per physics step; the returned speeds apply for
    /// the next step and must lie in [0, max rotor speed].
    virtual RotorCommand rotor_command() = 0;

    /// Position reference used for the last command, when the backend tracks
    /// one. Telemetry records it for tracking-error evaluation.
    virtual std::optional<Vec3> reference_position() const { return std::nullopt; }

    virtual void shutdown() {}
};

/// Emits a fixed rotor command, clamped to the vehicle's speed range.
class ScriptBackend : public ControlBackend {
public:
    ScriptBackend(std::vector<double> speeds, const MultirotorParams& params);

    RotorCommand rotor_command() override { return command_; }

private:
    RotorCommand command_;
};

/// Ground-truth state feedback through the geometric tracking controller.
class GeometricBackend : public ControlBackend {
public:
    GeometricBackend(std::shared_ptr<const Trajectory> trajectory, ControllerGains gains,
                     MultirotorParams params);

    void receive_state(const RigidBodyState& state) override { state_ = state; }
    RotorCommand rotor_command() override;

    /// Reference evaluated at the last received state's time, so telemetry
    /// pairs state and reference at the same instant.
    std::optional<Vec3> reference_position() const override {
        return trajectory_->at(state_.time).position;
    }

private:
    std::shared_ptr<const Trajectory> trajectory_;
    ControllerGains gains_;
    MultirotorParams params_;
    RigidBodyState state_;
};

} // namespace mrsim
