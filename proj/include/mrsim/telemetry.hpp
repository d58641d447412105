#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/dynamics.hpp"
#include "mrsim/sensors.hpp"
#include "mrsim/vec3.hpp"

namespace mrsim {

/// One telemetry row: simulation time, full state, the backend's position
/// reference (if any), the applied rotor speeds, and the latest reading of
/// each sensor. Missing values (no reference, sensor not yet sampled) are
/// recorded as nan.
struct TelemetryRecord {
    double t{0.0};
    RigidBodyState state;
    std::optional<Vec3> reference;
    std::vector<double> rotor_speeds;
    std::optional<BaroReading> baro;
    std::optional<MagReading> mag;
    std::optional<ImuReading> imu;
    std::optional<GpsReading> gps;
};

/// Streams one vehicle's records to CSV. Columns, in order:
///   vehicle, t,
///   px, py, pz, vx, vy, vz            (inertial ENU)
///   qw, qx, qy, qz                    (body-to-inertial attitude)
///   wx, wy, wz                        (body rates)
///   ref_px, ref_py, ref_pz, tracking_error_m
///   rotor0 .. rotor{n-1}              (applied speeds, rad/s)
///   baro_pressure_pa, baro_pressure_alt_m,
///   mag_bx, mag_by, mag_bz,
///   gyro_x, gyro_y, gyro_z, accel_x, accel_y, accel_z,
///   gps_lat_deg, gps_lon_deg, gps_alt_m
/// Floats are written with 17 significant digits so equal runs produce
/// byte-identical files.
class TelemetryWriter {
public:
    TelemetryWriter(const std::string& path, const std::string& vehicle, int rotor_count);

    void append(const TelemetryRecord& record);
    void flush();
    std::uint64_t rows() const { return rows_; }
    const std::string& path() const { return path_; }

private:
    std::ofstream out_;
    std::string path_;
    std::string vehicle_;
    int rotor_count_;
    std::uint64_t rows_{0};
};

/// Formats a double like the telemetry writer does (17 significant digits).
std::string format_telemetry_value(double v);

/// Time/error pairs pulled from a telemetry CSV's t and tracking_error_m
/// columns. Rows with nan error (no reference) are kept; consumers decide.
struct TrackingErrorSeries {
    std::string vehicle;
    std::vector<double> t;
    std::vector<double> error_m;

    double max_error() const;   // over non-nan entries, 0 if none
    double rms_error() const;   // over non-nan entries, 0 if none
};

/// Reads a telemetry CSV produced by TelemetryWriter. Throws Error(Io) on an
/// unreadable file and Error(Parse) on missing columns or malformed rows.
TrackingErrorSeries read_tracking_error_series(const std::string& path);

/// Writes the series as a two-column CSV (t, tracking_error_m).
void write_tracking_error_csv(const TrackingErrorSeries& series, const std::string& path);

/// Renders the series as a standalone SVG line plot.
void write_tracking_error_svg(const TrackingErrorSeries& series, const std::string& path);

} // namespace mrsim
