#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mrsim/control.hpp"
#include "mrsim/dynamics.hpp"
#include "mrsim/geodetic.hpp"
#include "mrsim/sensors.hpp"
#include "mrsim/vec3.hpp"

namespace mrsim {

// Declarative experiment description, loaded from versioned JSON. Parsing is
// strict: unknown fields, missing required fields, and invariant violations
// all fail with the offending field path.

struct HoverTrajectoryConfig {
    Vec3 position{0.0, 0.0, 1.0};
    double yaw{0.0};              // rad
};

struct RelayTrajectoryConfig {
    double aggressiveness{0.6};   // s, smaller = sharper excursion
    double time_offset{0.0};      // s, added to sim time
    bool mirror_y{false};
    Vec3 position_offset;
};

using TrajectoryConfig = std::variant<HoverTrajectoryConfig, RelayTrajectoryConfig>;

struct GeometricBackendConfig {
    TrajectoryConfig trajectory{HoverTrajectoryConfig{}};
    ControllerGains gains;
};

struct MavlinkBackendConfig {
    std::string remote_host{"127.0.0.1"};
    std::uint16_t remote_port{14560};
    std::uint16_t local_port{0};      // 0 = ephemeral
    bool lockstep{true};
    double actuator_timeout_s{1.0};
};

struct ScriptBackendConfig {
    std::vector<double> speeds;       // rad/s, one per rotor
};

using BackendConfig = std::variant<GeometricBackendConfig, MavlinkBackendConfig,
                                   ScriptBackendConfig>;

struct InitialState {
    Vec3 position;
    Vec3 velocity;
    double yaw{0.0};                  // rad
    bool on_trajectory{false};        // overrides position/velocity from the
                                      // backend trajectory at t = 0
};

struct VehicleSpec {
    std::string name;
    MultirotorParams params{MultirotorParams::default_quad()};
    InitialState initial;
    SensorSuiteConfig sensors;
    BackendConfig backend{GeometricBackendConfig{}};
    int telemetry_decimation{1};      // record every n-th physics step
};

struct Scenario {
    int version{1};
    double duration{10.0};            // s
    double physics_dt{1.0 / 250.0};   // s
    std::uint64_t seed{0};
    GeoOrigin origin;
    std::vector<VehicleSpec> vehicles;
    std::string out_dir{"."};

    double physics_rate_hz() const { return 1.0 / physics_dt; }

    /// Cross-field invariants: positive duration and dt, unique vehicle
    /// names, per-vehicle parameter/gain/sensor validity. Throws
    /// Error(Config) naming the field.
    void validate() const;
};

/// Parses and validates scenario JSON. Throws Error(Parse) on malformed JSON
/// and Error(Config) on schema or invariant violations.
Scenario parse_scenario(const std::string& text);

/// parse_scenario over a file's contents; Error(Io) if unreadable.
Scenario load_scenario_file(const std::string& path);

/// Splits "udp:HOST:PORT" into host and port. Throws Error(InvalidArgument)
/// on any other shape.
void parse_udp_endpoint(const std::string& endpoint, std::string& host, std::uint16_t& port);

} // namespace mrsim
