#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mrsim/dynamics.hpp"
#include "mrsim/geodetic.hpp"
#include "mrsim/noise.hpp"
#include "mrsim/quaternion.hpp"
#include "mrsim/vec3.hpp"

namespace mrsim {

struct BaroReading {
    double temperature_k{0.0};
    double pressure_pa{0.0};
    double pressure_altitude_m{0.0};
    double time{0.0};
};

struct MagReading {
    Vec3 field_gauss;   // body frame
    double time{0.0};
};

struct ImuReading {
    Vec3 gyro_rad_s;    // body frame
    Vec3 accel_m_s2;    // body frame specific force
    double time{0.0};
};

struct GpsReading {
    double latitude_deg{0.0};
    double longitude_deg{0.0};
    double altitude_m{0.0};     // MSL
    Vec3 velocity_m_s;          // inertial ENU
    double time{0.0};
};

/// Per-sensor standard deviations. White sigmas are per sample, walk sigmas
/// are random-walk diffusion per sqrt(second).
struct SensorNoiseConfig {
    double baro_pressure_sigma_pa{1.0};
    double baro_drift_sigma_pa{0.1};
    double mag_sigma_gauss{0.002};
    double mag_drift_sigma_gauss{2e-4};
    double gyro_sigma_rad_s{3e-4};
    double gyro_drift_sigma{3e-5};
    double accel_sigma_m_s2{0.02};
    double accel_drift_sigma{2e-3};
    double gps_xy_sigma_m{0.3};
    double gps_z_sigma_m{0.3};
    double gps_drift_sigma_m{0.01};
    bool enabled{true};   // false zeroes every sigma (ideal sensors)

    SensorNoiseConfig scaled() const {
        if (enabled) return *this;
        return SensorNoiseConfig{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, true};
    }
};

/// How the magnetic field components (from declination/inclination/strength)
/// relate to the simulation's ENU axes. The component formulas produce
/// north/east/down values; NedComponents maps them onto ENU accordingly,
/// EnuComponents takes them as ENU directly.
enum class MagFrameMapping { NedComponents, EnuComponents };

/// ISA barometer: deterministic temperature/pressure profile plus white
/// pressure noise and a slow drift bias. Valid up to 11 km.
class Barometer {
public:
    Barometer(const SensorNoiseConfig& noise, double gravity, std::uint64_t seed);

    BaroReading sample(const RigidBodyState& state, const GeoOrigin& origin, double dt);

private:
    NoiseProcess white_;
    NoiseProcess drift_;
    double gravity_;
};

/// Field-component magnetometer with per-axis white noise and random walks,
/// rotated into the body frame through the inverse attitude.
class Magnetometer {
public:
    Magnetometer(const SensorNoiseConfig& noise, MagFrameMapping mapping, std::uint64_t seed);

    MagReading sample(const RigidBodyState& state, const GeoOrigin& origin, double dt);

private:
    std::array<NoiseProcess, 3> axis_;
    MagFrameMapping mapping_;
};

/// Gyroscope + accelerometer. The accelerometer reports body-frame specific
/// force (gravity-compensated true acceleration rotated into the body frame).
class Imu {
public:
    Imu(const SensorNoiseConfig& noise, double gravity, std::uint64_t seed);

    ImuReading sample(const RigidBodyState& state, const Vec3& accel_true, double dt);

private:
    std::array<NoiseProcess, 3> gyro_;
    std::array<NoiseProcess, 3> accel_;
    double gravity_;
};

/// GPS: perturbs the local position (white + walk per axis), then projects to
/// latitude/longitude via the azimuthal equidistant inverse.
class Gps {
public:
    Gps(const SensorNoiseConfig& noise, std::uint64_t seed);

    GpsReading sample(const RigidBodyState& state, const GeoOrigin& origin, double dt);

private:
    std::array<NoiseProcess, 3> axis_;
};

enum class SensorKind { Baro = 0, Mag = 1, Imu = 2, Gps = 3 };
inline constexpr int kSensorKindCount = 4;

struct SensorRates {
    double baro_hz{250.0};
    double mag_hz{250.0};
    double imu_hz{250.0};
    double gps_hz{1.0};

    double rate(SensorKind k) const;
    void validate(double physics_rate_hz) const;
};

/// Emits each sensor at its own rate with the first sample one period after
/// t = 0. Ties resolve in the fixed order baro, mag, imu, gps.
class SensorScheduler {
public:
    explicit SensorScheduler(const SensorRates& rates);

    /// Sensors whose next sampling instant is at or before t. Each due sensor
    /// is reported once; later calls continue where this one left off.
    std::vector<SensorKind> collect(double t);

    /// Interval covered by the n-th sample of a sensor (its period).
    double period(SensorKind k) const;

private:
    struct Entry {
        double rate;
        std::uint64_t next{1};
    };
    std::array<Entry, kSensorKindCount> entries_;
};

struct SensorSuiteConfig {
    SensorRates rates;
    SensorNoiseConfig noise;
    MagFrameMapping mag_mapping{MagFrameMapping::NedComponents};
};

/// One vehicle's sensors plus their schedule and latest readings.
class SensorSuite {
public:
    SensorSuite(const SensorSuiteConfig& config, const GeoOrigin& origin, double gravity,
                std::uint64_t seed);

    /// Samples every sensor due at time t against the given state and true
    /// acceleration. Returns the kinds sampled, in tie-break order.
    std::vector<SensorKind> sample_due(const RigidBodyState& state, const Vec3& accel_true,
                                       double t);

    /// Noiseless snapshot of all four sensors at the current state; does not
    /// advance any noise or schedule state. Used to prime protocol backends
    /// before the first scheduled sample.
    void prime(const RigidBodyState& state, const Vec3& accel_true);

    const std::optional<BaroReading>& baro() const { return latest_baro_; }
    const std::optional<MagReading>& mag() const { return latest_mag_; }
    const std::optional<ImuReading>& imu() const { return latest_imu_; }
    const std::optional<GpsReading>& gps() const { return latest_gps_; }

    std::uint64_t count(SensorKind k) const { return counts_[static_cast<int>(k)]; }

private:
    GeoOrigin origin_;
    double gravity_;
    MagFrameMapping mag_mapping_;
    SensorScheduler scheduler_;
    Barometer baro_model_;
    Magnetometer mag_model_;
    Imu imu_model_;
    Gps gps_model_;
    std::optional<BaroReading> latest_baro_;
    std::optional<MagReading> latest_mag_;
    std::optional<ImuReading> latest_imu_;
    std::optional<GpsReading> latest_gps_;
    std::array<std::uint64_t, kSensorKindCount> counts_{};
};

} // namespace mrsim
