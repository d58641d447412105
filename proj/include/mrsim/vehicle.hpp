#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mrsim/backend.hpp"
#include "mrsim/dynamics.hpp"
#include "mrsim/scenario.hpp"
#include "mrsim/sensors.hpp"
#include "mrsim/telemetry.hpp"

namespace mrsim {

/// One simulated multirotor: parameters, rigid-body state, sensor suite,
/// control backend, and (optionally) a telemetry writer. All of a vehicle's
/// work happens inside tick(), which is free of shared mutable state so
/// vehicles can tick on separate threads.
class Vehicle {
public:
    /// Builds the vehicle from its spec. Sensor randomness is an independent
    /// stream derived from the scenario seed and the vehicle's index, so
    /// per-vehicle results do not depend on stepping order.
    Vehicle(const VehicleSpec& spec, const GeoOrigin& origin, std::uint64_t scenario_seed,
            int index);

    const std::string& name() const { return spec_.name; }
    const VehicleSpec& spec() const { return spec_; }
    const RigidBodyState& state() const { return state_; }
    std::uint64_t steps() const { return steps_; }

    SensorSuite& sensors() { return suite_; }
    const SensorSuite& sensors() const { return suite_; }
    ControlBackend& backend() { return *backend_; }

    /// Attaches a CSV sink; without one, records are dropped.
    void attach_writer(std::unique_ptr<TelemetryWriter> writer);
    TelemetryWriter* writer() { return writer_.get(); }
    const TelemetryWriter* writer() const { return writer_.get(); }

    /// Sends the initial state and a noiseless sensor snapshot to the
    /// backend so its first command has data to work from.
    void prime();

    /// One physics step: ask the backend for a command, integrate, sample
    /// due sensors, feed the backend, record telemetry.
    void tick(double dt);

    /// Stops the backend (closing any protocol session) and flushes
    /// telemetry.
    void shutdown();

    double max_tracking_error() const { return err_max_; }
    double rms_tracking_error() const;

private:
    VehicleSpec spec_;
    RigidBodyState state_;
    SensorSuite suite_;
    std::unique_ptr<ControlBackend> backend_;
    std::unique_ptr<TelemetryWriter> writer_;
    std::uint64_t steps_{0};
    double err_max_{0.0};
    double err_sum_sq_{0.0};
    std::uint64_t err_count_{0};
};

/// Registry of the simulation's vehicles, keyed by unique name.
class VehicleManager {
public:
    /// Throws Error(Config) when the name is already taken.
    Vehicle& add(std::unique_ptr<Vehicle> vehicle);

    /// Throws Error(InvalidArgument) for an unknown name.
    Vehicle& get(const std::string& name);
    const Vehicle& get(const std::string& name) const;

    bool contains(const std::string& name) const;

    /// Shuts the vehicle's backend down and drops it. Throws
    /// Error(InvalidArgument) for an unknown name.
    void remove(const std::string& name);

    std::vector<std::string> names() const;
    std::size_t size() const { return vehicles_.size(); }

    std::vector<std::unique_ptr<Vehicle>>& all() { return vehicles_; }
    const std::vector<std::unique_ptr<Vehicle>>& all() const { return vehicles_; }

private:
    std::vector<std::unique_ptr<Vehicle>> vehicles_;
};

} // namespace mrsim
