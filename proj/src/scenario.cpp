#include "mrsim/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>
#include <sstream>

#include "mrsim/error.hpp"

namespace mrsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw_config(path + ": " + what);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

/// Strict schema: every present key must be in the allowlist.
void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) {
            return item.key() == k;
        });
        if (!known) fail(path + "." + item.key(), "unknown field");
    }
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, const char* key) {
    const json* j = find(obj, key);
    if (j == nullptr) fail(path + "." + key, "missing required field");
    return *j;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
    const json* j = find(obj, key);
    return j == nullptr ? fallback : as_number(*j, path + "." + key);
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
    const json* j = find(obj, key);
    if (j == nullptr) return fallback;
    if (!j->is_boolean()) fail(path + "." + key, "expected a boolean");
    return j->get<bool>();
}

std::uint64_t get_uint(const json& obj, const std::string& path, const char* key,
                       std::uint64_t fallback) {
    const json* j = find(obj, key);
    if (j == nullptr) return fallback;
    if (!j->is_number_unsigned()) fail(path + "." + key, "expected a non-negative integer");
    return j->get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
    const json* j = find(obj, key);
    if (j == nullptr) return fallback;
    if (!j->is_string()) fail(path + "." + key, "expected a string");
    return j->get<std::string>();
}

Vec3 as_vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected an array of 3 numbers");
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]"),
            as_number(j[2], path + "[2]")};
}

Vec3 get_vec3(const json& obj, const std::string& path, const char* key, const Vec3& fallback) {
    const json* j = find(obj, key);
    return j == nullptr ? fallback : as_vec3(*j, path + "." + key);
}

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

GeoOrigin parse_origin(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path,
               {"latitude_deg", "longitude_deg", "altitude_m", "declination_deg",
                "inclination_deg", "strength_gauss"});
    GeoOrigin origin;
    origin.latitude_deg = get_number(j, path, "latitude_deg", origin.latitude_deg);
    origin.longitude_deg = get_number(j, path, "longitude_deg", origin.longitude_deg);
    origin.altitude_m = get_number(j, path, "altitude_m", origin.altitude_m);
    origin.declination_rad =
        deg_to_rad(get_number(j, path, "declination_deg", origin.declination_rad * 180.0 / std::numbers::pi));
    origin.inclination_rad =
        deg_to_rad(get_number(j, path, "inclination_deg", origin.inclination_rad * 180.0 / std::numbers::pi));
    origin.strength_gauss = get_number(j, path, "strength_gauss", origin.strength_gauss);
    return origin;
}

MultirotorParams parse_params(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path,
               {"mass_kg", "inertia", "drag", "rotor_positions", "spin_signs",
                "thrust_coefficient", "torque_coefficient", "max_rotor_speed_rad_s",
                "gravity_m_s2"});
    MultirotorParams p = MultirotorParams::default_quad();
    p.mass = get_number(j, path, "mass_kg", p.mass);
    p.inertia = get_vec3(j, path, "inertia", p.inertia);
    p.drag = get_vec3(j, path, "drag", p.drag);
    p.thrust_coefficient = get_number(j, path, "thrust_coefficient", p.thrust_coefficient);
    p.torque_coefficient = get_number(j, path, "torque_coefficient", p.torque_coefficient);
    p.max_rotor_speed = get_number(j, path, "max_rotor_speed_rad_s", p.max_rotor_speed);
    p.gravity = get_number(j, path, "gravity_m_s2", p.gravity);

    if (const json* rp = find(j, "rotor_positions")) {
        const std::string rp_path = path + ".rotor_positions";
        if (!rp->is_array() || rp->empty()) fail(rp_path, "expected a non-empty array");
        p.rotor_positions.clear();
        for (std::size_t i = 0; i < rp->size(); ++i) {
            p.rotor_positions.push_back(as_vec3((*rp)[i], rp_path + "[" + std::to_string(i) + "]"));
        }
    }
    if (const json* ss = find(j, "spin_signs")) {
        const std::string ss_path = path + ".spin_signs";
        if (!ss->is_array()) fail(ss_path, "expected an array");
        p.spin_signs.clear();
        for (std::size_t i = 0; i < ss->size(); ++i) {
            const json& v = (*ss)[i];
            if (!v.is_number_integer()) fail(ss_path + "[" + std::to_string(i) + "]", "expected +1 or -1");
            p.spin_signs.push_back(v.get<int>());
        }
    }
    return p;
}

InitialState parse_initial(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path, {"position", "velocity", "yaw_deg", "on_trajectory"});
    InitialState init;
    init.position = get_vec3(j, path, "position", init.position);
    init.velocity = get_vec3(j, path, "velocity", init.velocity);
    init.yaw = deg_to_rad(get_number(j, path, "yaw_deg", 0.0));
    init.on_trajectory = get_bool(j, path, "on_trajectory", false);
    return init;
}

SensorSuiteConfig parse_sensors(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path, {"rates_hz", "noise", "mag_mapping"});
    SensorSuiteConfig cfg;

    if (const json* rates = find(j, "rates_hz")) {
        const std::string rp = path + ".rates_hz";
        expect_object(*rates, rp);
        check_keys(*rates, rp, {"baro", "mag", "imu", "gps"});
        cfg.rates.baro_hz = get_number(*rates, rp, "baro", cfg.rates.baro_hz);
        cfg.rates.mag_hz = get_number(*rates, rp, "mag", cfg.rates.mag_hz);
        cfg.rates.imu_hz = get_number(*rates, rp, "imu", cfg.rates.imu_hz);
        cfg.rates.gps_hz = get_number(*rates, rp, "gps", cfg.rates.gps_hz);
    }

    if (const json* noise = find(j, "noise")) {
        const std::string np = path + ".noise";
        expect_object(*noise, np);
        check_keys(*noise, np,
                   {"enabled", "baro_pressure_sigma_pa", "baro_drift_sigma_pa",
                    "mag_sigma_gauss", "mag_drift_sigma_gauss", "gyro_sigma_rad_s",
                    "gyro_drift_sigma", "accel_sigma_m_s2", "accel_drift_sigma",
                    "gps_xy_sigma_m", "gps_z_sigma_m", "gps_drift_sigma_m"});
        SensorNoiseConfig& n = cfg.noise;
        n.enabled = get_bool(*noise, np, "enabled", n.enabled);
        n.baro_pressure_sigma_pa = get_number(*noise, np, "baro_pressure_sigma_pa", n.baro_pressure_sigma_pa);
        n.baro_drift_sigma_pa = get_number(*noise, np, "baro_drift_sigma_pa", n.baro_drift_sigma_pa);
        n.mag_sigma_gauss = get_number(*noise, np, "mag_sigma_gauss", n.mag_sigma_gauss);
        n.mag_drift_sigma_gauss = get_number(*noise, np, "mag_drift_sigma_gauss", n.mag_drift_sigma_gauss);
        n.gyro_sigma_rad_s = get_number(*noise, np, "gyro_sigma_rad_s", n.gyro_sigma_rad_s);
        n.gyro_drift_sigma = get_number(*noise, np, "gyro_drift_sigma", n.gyro_drift_sigma);
        n.accel_sigma_m_s2 = get_number(*noise, np, "accel_sigma_m_s2", n.accel_sigma_m_s2);
        n.accel_drift_sigma = get_number(*noise, np, "accel_drift_sigma", n.accel_drift_sigma);
        n.gps_xy_sigma_m = get_number(*noise, np, "gps_xy_sigma_m", n.gps_xy_sigma_m);
        n.gps_z_sigma_m = get_number(*noise, np, "gps_z_sigma_m", n.gps_z_sigma_m);
        n.gps_drift_sigma_m = get_number(*noise, np, "gps_drift_sigma_m", n.gps_drift_sigma_m);
    }

    const std::string mapping = get_string(j, path, "mag_mapping", "ned_components");
    if (mapping == "ned_components") {
        cfg.mag_mapping = MagFrameMapping::NedComponents;
    } else if (mapping == "enu_components") {
        cfg.mag_mapping = MagFrameMapping::EnuComponents;
    } else {
        fail(path + ".mag_mapping", "expected \"ned_components\" or \"enu_components\"");
    }
    return cfg;
}

TrajectoryConfig parse_trajectory(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string type = get_string(j, path, "type", "");
    if (type == "hover") {
        check_keys(j, path, {"type", "position", "yaw_deg"});
        HoverTrajectoryConfig cfg;
        cfg.position = get_vec3(j, path, "position", cfg.position);
        cfg.yaw = deg_to_rad(get_number(j, path, "yaw_deg", 0.0));
        return cfg;
    }
    if (type == "relay") {
        check_keys(j, path, {"type", "aggressiveness", "time_offset_s", "mirror_y",
                             "position_offset"});
        RelayTrajectoryConfig cfg;
        cfg.aggressiveness = get_number(j, path, "aggressiveness", cfg.aggressiveness);
        cfg.time_offset = get_number(j, path, "time_offset_s", cfg.time_offset);
        cfg.mirror_y = get_bool(j, path, "mirror_y", cfg.mirror_y);
        cfg.position_offset = get_vec3(j, path, "position_offset", cfg.position_offset);
        return cfg;
    }
    fail(path + ".type", "expected \"hover\" or \"relay\"");
}

ControllerGains parse_gains(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path, {"position", "velocity", "attitude", "rate"});
    ControllerGains g;
    g.position = get_vec3(j, path, "position", g.position);
    g.velocity = get_vec3(j, path, "velocity", g.velocity);
    g.attitude = get_vec3(j, path, "attitude", g.attitude);
    g.rate = get_vec3(j, path, "rate", g.rate);
    return g;
}

BackendConfig parse_backend(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string type = get_string(j, path, "type", "");
    if (type == "geometric") {
        check_keys(j, path, {"type", "trajectory", "gains"});
        GeometricBackendConfig cfg;
        if (const json* traj = find(j, "trajectory")) {
            cfg.trajectory = parse_trajectory(*traj, path + ".trajectory");
        }
        if (const json* gains = find(j, "gains")) {
            cfg.gains = parse_gains(*gains, path + ".gains");
        }
        return cfg;
    }
    if (type == "mavlink") {
        check_keys(j, path, {"type", "remote_host", "remote_port", "local_port", "lockstep",
                             "actuator_timeout_s"});
        MavlinkBackendConfig cfg;
        cfg.remote_host = get_string(j, path, "remote_host", cfg.remote_host);
        cfg.remote_port = static_cast<std::uint16_t>(
            get_uint(j, path, "remote_port", cfg.remote_port));
        cfg.local_port = static_cast<std::uint16_t>(
            get_uint(j, path, "local_port", cfg.local_port));
        cfg.lockstep = get_bool(j, path, "lockstep", cfg.lockstep);
        cfg.actuator_timeout_s = get_number(j, path, "actuator_timeout_s", cfg.actuator_timeout_s);
        return cfg;
    }
    if (type == "script") {
        check_keys(j, path, {"type", "speeds"});
        ScriptBackendConfig cfg;
        const json& speeds = require(j, path, "speeds");
        const std::string sp = path + ".speeds";
        if (!speeds.is_array() || speeds.empty()) fail(sp, "expected a non-empty array");
        for (std::size_t i = 0; i < speeds.size(); ++i) {
            cfg.speeds.push_back(as_number(speeds[i], sp + "[" + std::to_string(i) + "]"));
        }
        return cfg;
    }
    fail(path + ".type", "expected \"geometric\", \"mavlink\", or \"script\"");
}

VehicleSpec parse_vehicle(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path, {"name", "params", "initial", "sensors", "backend",
                         "telemetry_decimation"});
    VehicleSpec spec;
    const json& name = require(j, path, "name");
    if (!name.is_string()) fail(path + ".name", "expected a string");
    spec.name = name.get<std::string>();
    spec.params = MultirotorParams::default_quad();

    if (const json* params = find(j, "params")) {
        spec.params = parse_params(*params, path + ".params");
    }
    if (const json* initial = find(j, "initial")) {
        spec.initial = parse_initial(*initial, path + ".initial");
    }
    if (const json* sensors = find(j, "sensors")) {
        spec.sensors = parse_sensors(*sensors, path + ".sensors");
    }
    if (const json* backend = find(j, "backend")) {
        spec.backend = parse_backend(*backend, path + ".backend");
    }
    const double decim = get_number(j, path, "telemetry_decimation", 1.0);
    if (decim < 1.0 || decim != std::floor(decim)) {
        fail(path + ".telemetry_decimation", "expected a positive integer");
    }
    spec.telemetry_decimation = static_cast<int>(decim);
    return spec;
}

} // namespace

void Scenario::validate() const {
    if (version != 1) throw_config("scenario.version: unsupported version (expected 1)");
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw_config("scenario.duration_s: must be positive");
    }
    if (!(physics_dt > 0.0) || physics_dt > 0.02) {
        throw_config("scenario.physics_dt_s: must be in (0, 0.02]");
    }
    try {
        origin.validate();
    } catch (const Error& e) {
        throw_config(std::string("scenario.origin: ") + e.what());
    }
    if (vehicles.empty()) throw_config("scenario.vehicles: at least one vehicle required");

    std::set<std::string> names;
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        const VehicleSpec& v = vehicles[i];
        const std::string path = "scenario.vehicles[" + std::to_string(i) + "]";
        if (v.name.empty()) throw_config(path + ".name: must not be empty");
        if (!names.insert(v.name).second) {
            throw_config(path + ".name: duplicate vehicle name '" + v.name + "'");
        }
        try {
            v.params.validate();
        } catch (const Error& e) {
            throw_config(path + ".params: " + std::string(e.what()));
        }
        try {
            v.sensors.rates.validate(physics_rate_hz());
        } catch (const Error& e) {
            throw_config(path + ".sensors.rates_hz: " + std::string(e.what()));
        }
        if (!v.initial.position.finite() || !v.initial.velocity.finite() ||
            !std::isfinite(v.initial.yaw)) {
            throw_config(path + ".initial: values must be finite");
        }

        if (const auto* geo = std::get_if<GeometricBackendConfig>(&v.backend)) {
            try {
                geo->gains.validate();
            } catch (const Error& e) {
                throw_config(path + ".backend.gains: " + std::string(e.what()));
            }
            if (const auto* relay = std::get_if<RelayTrajectoryConfig>(&geo->trajectory)) {
                if (!(relay->aggressiveness > 0.0)) {
                    throw_config(path + ".backend.trajectory.aggressiveness: must be positive");
                }
            }
        } else if (const auto* mav = std::get_if<MavlinkBackendConfig>(&v.backend)) {
            if (mav->remote_port == 0) {
                throw_config(path + ".backend.remote_port: must be nonzero");
            }
            if (!(mav->actuator_timeout_s > 0.0)) {
                throw_config(path + ".backend.actuator_timeout_s: must be positive");
            }
            if (v.initial.on_trajectory) {
                throw_config(path + ".initial.on_trajectory: requires a geometric backend");
            }
        } else if (const auto* script = std::get_if<ScriptBackendConfig>(&v.backend)) {
            if (static_cast<int>(script->speeds.size()) != v.params.rotor_count()) {
                throw_config(path + ".backend.speeds: expected one speed per rotor (" +
                             std::to_string(v.params.rotor_count()) + ")");
            }
            for (double s : script->speeds) {
                if (!(s >= 0.0) || s > v.params.max_rotor_speed) {
                    throw_config(path + ".backend.speeds: values must lie in [0, max rotor speed]");
                }
            }
            if (v.initial.on_trajectory) {
                throw_config(path + ".initial.on_trajectory: requires a geometric backend");
            }
        }
    }
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, std::string("scenario JSON: ") + e.what());
    }
    expect_object(j, "scenario");
    check_keys(j, "scenario",
               {"version", "duration_s", "physics_dt_s", "seed", "origin", "vehicles",
                "out_dir"});

    Scenario scenario;
    const json& version = require(j, "scenario", "version");
    if (!version.is_number_integer()) fail("scenario.version", "expected an integer");
    scenario.version = version.get<int>();

    scenario.duration = get_number(j, "scenario", "duration_s", scenario.duration);
    scenario.physics_dt = get_number(j, "scenario", "physics_dt_s", scenario.physics_dt);
    scenario.seed = get_uint(j, "scenario", "seed", scenario.seed);
    scenario.out_dir = get_string(j, "scenario", "out_dir", scenario.out_dir);

    if (const json* origin = find(j, "origin")) {
        scenario.origin = parse_origin(*origin, "scenario.origin");
    }

    const json& vehicles = require(j, "scenario", "vehicles");
    if (!vehicles.is_array()) fail("scenario.vehicles", "expected an array");
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        scenario.vehicles.push_back(
            parse_vehicle(vehicles[i], "scenario.vehicles[" + std::to_string(i) + "]"));
    }

    scenario.validate();
    return scenario;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

void parse_udp_endpoint(const std::string& endpoint, std::string& host, std::uint16_t& port) {
    const std::string prefix = "udp:";
    if (endpoint.rfind(prefix, 0) != 0) {
        throw_invalid("endpoint must look like udp:HOST:PORT, got '" + endpoint + "'");
    }
    const std::string rest = endpoint.substr(prefix.size());
    const std::size_t colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == rest.size()) {
        throw_invalid("endpoint must look like udp:HOST:PORT, got '" + endpoint + "'");
    }
    host = rest.substr(0, colon);
    const std::string port_text = rest.substr(colon + 1);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(port_text.data(),
                                           port_text.data() + port_text.size(), value);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || value == 0 ||
        value > 65535) {
        throw_invalid("endpoint port must be 1..65535, got '" + port_text + "'");
    }
    port = static_cast<std::uint16_t>(value);
}

} // namespace mrsim
