#include "mrsim/sensors.hpp"

#include <cmath>

#include "mrsim/error.hpp"

namespace mrsim {

namespace {

// International Standard Atmosphere, troposphere segment.
constexpr double kSeaLevelTemperatureK = 288.15;
constexpr double kSeaLevelPressurePa = 101325.0;
constexpr double kTemperatureLapseKPerM = 0.0065;
constexpr double kPressureExponent = 5.2561;
constexpr double kAirDensityKgM3 = 1.293;
constexpr double kMaxValidAltitudeM = 11000.0;

double isa_temperature(double altitude_m) {
    return kSeaLevelTemperatureK - kTemperatureLapseKPerM * altitude_m;
}

double isa_pressure(double altitude_m) {
    const double t = isa_temperature(altitude_m);
    return kSeaLevelPressurePa / std::pow(kSeaLevelTemperatureK / t, kPressureExponent);
}

Vec3 field_components(const GeoOrigin& origin) {
    const double h = origin.strength_gauss * std::cos(origin.inclination_rad);
    return {h * std::cos(origin.declination_rad),
            h * std::sin(origin.declination_rad),
            h * std::tan(origin.inclination_rad)};
}

Vec3 components_to_enu(const Vec3& raw, MagFrameMapping mapping) {
    if (mapping == MagFrameMapping::EnuComponents) return raw;
    // components are (north, east, down)
    return {raw.y, raw.x, -raw.z};
}

} // namespace

// ---------------------------------------------------------------------------
// Barometer
// ---------------------------------------------------------------------------

Barometer::Barometer(const SensorNoiseConfig& noise, double gravity, std::uint64_t seed)
    : white_(noise.baro_pressure_sigma_pa, 0.0, derive_seed(seed, 0)),
      drift_(0.0, noise.baro_drift_sigma_pa, derive_seed(seed, 1)),
      gravity_(gravity) {}

BaroReading Barometer::sample(const RigidBodyState& state, const GeoOrigin& origin,
                              double dt) {
    const double h = state.position.z + origin.altitude_m;
    if (h > kMaxValidAltitudeM)
        throw_invalid("barometer model invalid above 11 km");

    const double w = white_.white();
    drift_.advance_bias(dt);

    BaroReading r;
    r.temperature_k = isa_temperature(h);
    r.pressure_pa = isa_pressure(h) + w + drift_.bias();
    // the same white draw shifts the inferred altitude
    r.pressure_altitude_m = h - w / (gravity_ * kAirDensityKgM3);
    r.time = state.time;
    return r;
}

// ---------------------------------------------------------------------------
// Magnetometer
// ---------------------------------------------------------------------------

Magnetometer::Magnetometer(const SensorNoiseConfig& noise, MagFrameMapping mapping,
                           std::uint64_t seed)
    : mapping_(mapping) {
    for (int i = 0; i < 3; ++i)
        axis_[i] = NoiseProcess(noise.mag_sigma_gauss, noise.mag_drift_sigma_gauss,
                                derive_seed(seed, static_cast<std::uint64_t>(i)));
}

MagReading Magnetometer::sample(const RigidBodyState& state, const GeoOrigin& origin,
                                double dt) {
    Vec3 raw = field_components(origin);
    raw.x += axis_[0].sample(dt);
    raw.y += axis_[1].sample(dt);
    raw.z += axis_[2].sample(dt);

    MagReading r;
    r.field_gauss = quat_rotate_inverse(state.attitude, components_to_enu(raw, mapping_));
    r.time = state.time;
    return r;
}

// ---------------------------------------------------------------------------
// IMU
// ---------------------------------------------------------------------------

Imu::Imu(const SensorNoiseConfig& noise, double gravity, std::uint64_t seed)
    : gravity_(gravity) {
    for (int i = 0; i < 3; ++i) {
        gyro_[i] = NoiseProcess(noise.gyro_sigma_rad_s, noise.gyro_drift_sigma,
                                derive_seed(seed, static_cast<std::uint64_t>(i)));
        accel_[i] = NoiseProcess(noise.accel_sigma_m_s2, noise.accel_drift_sigma,
                                 derive_seed(seed, static_cast<std::uint64_t>(3 + i)));
    }
}

ImuReading Imu::sample(const RigidBodyState& state, const Vec3& accel_true, double dt) {
    ImuReading r;
    r.gyro_rad_s = state.angular_velocity +
                   Vec3{gyro_[0].sample(dt), gyro_[1].sample(dt), gyro_[2].sample(dt)};
    // body-frame specific force: gravity does not appear in free fall
    const Vec3 specific = quat_rotate_inverse(
        state.attitude, accel_true + Vec3{0.0, 0.0, gravity_});
    r.accel_m_s2 = specific +
                   Vec3{accel_[0].sample(dt), accel_[1].sample(dt), accel_[2].sample(dt)};
    r.time = state.time;
    return r;
}

// ---------------------------------------------------------------------------
// GPS
// ---------------------------------------------------------------------------

Gps::Gps(const SensorNoiseConfig& noise, std::uint64_t seed) {
    axis_[0] = NoiseProcess(noise.gps_xy_sigma_m, noise.gps_drift_sigma_m, derive_seed(seed, 0));
    axis_[1] = NoiseProcess(noise.gps_xy_sigma_m, noise.gps_drift_sigma_m, derive_seed(seed, 1));
    axis_[2] = NoiseProcess(noise.gps_z_sigma_m, noise.gps_drift_sigma_m, derive_seed(seed, 2));
}

GpsReading Gps::sample(const RigidBodyState& state, const GeoOrigin& origin, double dt) {
    const Vec3 perturbed = state.position + Vec3{axis_[0].sample(dt),
                                                 axis_[1].sample(dt),
                                                 axis_[2].sample(dt)};
    const auto [lat, lon] = local_to_geodetic(perturbed.x, perturbed.y, origin);

    GpsReading r;
    r.latitude_deg = lat;
    r.longitude_deg = lon;
    r.altitude_m = perturbed.z + origin.altitude_m;
    r.velocity_m_s = state.velocity;
    r.time = state.time;
    return r;
}

// ---------------------------------------------------------------------------
// Scheduling
// ---------------------------------------------------------------------------

double SensorRates::rate(SensorKind k) const {
    switch (k) {
    case SensorKind::Baro: return baro_hz;
    case SensorKind::Mag: return mag_hz;
    case SensorKind::Imu: return imu_hz;
    case SensorKind::Gps: return gps_hz;
    }
    throw_invalid("unknown sensor kind");
}

void SensorRates::validate(double physics_rate_hz) const {
    for (int i = 0; i < kSensorKindCount; ++i) {
        const double r = rate(static_cast<SensorKind>(i));
        if (!(r > 0.0))
            throw_config("sensor rates must be positive");
        if (r > physics_rate_hz * (1.0 + 1e-9))
            throw_config("sensor rate exceeds the physics rate");
    }
}

SensorScheduler::SensorScheduler(const SensorRates& rates) {
    for (int i = 0; i < kSensorKindCount; ++i) {
        const double r = rates.rate(static_cast<SensorKind>(i));
        if (!(r > 0.0)) throw_config("sensor rates must be positive");
        entries_[i] = Entry{r};
    }
}

std::vector<SensorKind> SensorScheduler::collect(double t) {
    std::vector<SensorKind> due;
    for (int i = 0; i < kSensorKindCount; ++i) {
        Entry& e = entries_[i];
        const double due_time = static_cast<double>(e.next) / e.rate;
        if (due_time <= t + 1e-9) {
            due.push_back(static_cast<SensorKind>(i));
            ++e.next;
        }
    }
    return due;
}

double SensorScheduler::period(SensorKind k) const {
    return 1.0 / entries_[static_cast<int>(k)].rate;
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

SensorSuite::SensorSuite(const SensorSuiteConfig& config, const GeoOrigin& origin,
                         double gravity, std::uint64_t seed)
    : origin_(origin),
      gravity_(gravity),
      mag_mapping_(config.mag_mapping),
      scheduler_(config.rates),
      baro_model_(config.noise.scaled(), gravity, derive_seed(seed, 100)),
      mag_model_(config.noise.scaled(), config.mag_mapping, derive_seed(seed, 200)),
      imu_model_(config.noise.scaled(), gravity, derive_seed(seed, 300)),
      gps_model_(config.noise.scaled(), derive_seed(seed, 400)) {
    origin_.validate();
}

std::vector<SensorKind> SensorSuite::sample_due(const RigidBodyState& state,
                                                const Vec3& accel_true, double t) {
    const std::vector<SensorKind> due = scheduler_.collect(t);
    for (SensorKind k : due) {
        const double dt = scheduler_.period(k);
        switch (k) {
        case SensorKind::Baro: latest_baro_ = baro_model_.sample(state, origin_, dt); break;
        case SensorKind::Mag: latest_mag_ = mag_model_.sample(state, origin_, dt); break;
        case SensorKind::Imu: latest_imu_ = imu_model_.sample(state, accel_true, dt); break;
        case SensorKind::Gps: latest_gps_ = gps_model_.sample(state, origin_, dt); break;
        }
        ++counts_[static_cast<int>(k)];
    }
    return due;
}

void SensorSuite::prime(const RigidBodyState& state, const Vec3& accel_true) {
    const double h = state.position.z + origin_.altitude_m;
    BaroReading baro;
    baro.temperature_k = isa_temperature(h);
    baro.pressure_pa = isa_pressure(h);
    baro.pressure_altitude_m = h;
    baro.time = state.time;
    latest_baro_ = baro;

    MagReading mag;
    mag.field_gauss = quat_rotate_inverse(
        state.attitude, components_to_enu(field_components(origin_), mag_mapping_));
    mag.time = state.time;
    latest_mag_ = mag;

    ImuReading imu;
    imu.gyro_rad_s = state.angular_velocity;
    imu.accel_m_s2 = quat_rotate_inverse(state.attitude,
                                         accel_true + Vec3{0.0, 0.0, gravity_});
    imu.time = state.time;
    latest_imu_ = imu;

    GpsReading gps;
    const auto [lat, lon] = local_to_geodetic(state.position.x, state.position.y, origin_);
    gps.latitude_deg = lat;
    gps.longitude_deg = lon;
    gps.altitude_m = state.position.z + origin_.altitude_m;
    gps.velocity_m_s = state.velocity;
    gps.time = state.time;
    latest_gps_ = gps;
}

} // namespace mrsim
