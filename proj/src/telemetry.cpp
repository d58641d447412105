#include "mrsim/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "mrsim/error.hpp"

namespace mrsim {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void append_value(std::string& line, double v) {
    line += ',';
    line += format_telemetry_value(v);
}

void append_vec3(std::string& line, const Vec3& v) {
    append_value(line, v.x);
    append_value(line, v.y);
    append_value(line, v.z);
}

} // namespace

std::string format_telemetry_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

TelemetryWriter::TelemetryWriter(const std::string& path, const std::string& vehicle,
                                 int rotor_count)
    : out_(path, std::ios::trunc), path_(path), vehicle_(vehicle), rotor_count_(rotor_count) {
    if (!out_) throw Error(ErrorCode::Io, "cannot open telemetry file for writing: " + path);

    std::string header =
        "vehicle,t,px,py,pz,vx,vy,vz,qw,qx,qy,qz,wx,wy,wz,"
        "ref_px,ref_py,ref_pz,tracking_error_m";
    for (int i = 0; i < rotor_count_; ++i) header += ",rotor" + std::to_string(i);
    header +=
        ",baro_pressure_pa,baro_pressure_alt_m,mag_bx,mag_by,mag_bz,"
        "gyro_x,gyro_y,gyro_z,accel_x,accel_y,accel_z,"
        "gps_lat_deg,gps_lon_deg,gps_alt_m";
    out_ << header << '\n';
}

void TelemetryWriter::append(const TelemetryRecord& record) {
    std::string line = vehicle_;
    append_value(line, record.t);
    append_vec3(line, record.state.position);
    append_vec3(line, record.state.velocity);
    append_value(line, record.state.attitude.w);
    append_value(line, record.state.attitude.x);
    append_value(line, record.state.attitude.y);
    append_value(line, record.state.attitude.z);
    append_vec3(line, record.state.angular_velocity);

    if (record.reference) {
        append_vec3(line, *record.reference);
        append_value(line, (record.state.position - *record.reference).norm());
    } else {
        append_vec3(line, {kNan, kNan, kNan});
        append_value(line, kNan);
    }

    for (int i = 0; i < rotor_count_; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        append_value(line, idx < record.rotor_speeds.size() ? record.rotor_speeds[idx] : kNan);
    }

    if (record.baro) {
        append_value(line, record.baro->pressure_pa);
        append_value(line, record.baro->pressure_altitude_m);
    } else {
        append_value(line, kNan);
        append_value(line, kNan);
    }
    if (record.mag) {
        append_vec3(line, record.mag->field_gauss);
    } else {
        append_vec3(line, {kNan, kNan, kNan});
    }
    if (record.imu) {
        append_vec3(line, record.imu->gyro_rad_s);
        append_vec3(line, record.imu->accel_m_s2);
    } else {
        append_vec3(line, {kNan, kNan, kNan});
        append_vec3(line, {kNan, kNan, kNan});
    }
    if (record.gps) {
        append_value(line, record.gps->latitude_deg);
        append_value(line, record.gps->longitude_deg);
        append_value(line, record.gps->altitude_m);
    } else {
        append_value(line, kNan);
        append_value(line, kNan);
        append_value(line, kNan);
    }

    out_ << line << '\n';
    if (!out_) throw Error(ErrorCode::Io, "telemetry write failed: " + path_);
    ++rows_;
}

void TelemetryWriter::flush() { out_.flush(); }

// ---------------------------------------------------------------------------
// Tracking-error series
// ---------------------------------------------------------------------------

double TrackingErrorSeries::max_error() const {
    double m = 0.0;
    for (double e : error_m) {
        if (std::isfinite(e)) m = std::max(m, e);
    }
    return m;
}

double TrackingErrorSeries::rms_error() const {
    double sum = 0.0;
    std::uint64_t n = 0;
    for (double e : error_m) {
        if (std::isfinite(e)) {
            sum += e * e;
            ++n;
        }
    }
    return n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         const std::string& path) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw Error(ErrorCode::Parse, path + ": missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, path + ":" + std::to_string(line_no) +
                                          ": not a number: '" + cell + "'");
    }
}

} // namespace

TrackingErrorSeries read_tracking_error_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open telemetry file: " + path);

    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::Parse, path + ": empty file (expected a CSV header)");
    }
    const std::vector<std::string> header = split_csv_line(line);
    const std::size_t vehicle_col = column_index(header, "vehicle", path);
    const std::size_t t_col = column_index(header, "t", path);
    const std::size_t err_col = column_index(header, "tracking_error_m", path);

    TrackingErrorSeries series;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        const std::size_t needed = std::max({vehicle_col, t_col, err_col});
        if (cells.size() <= needed) {
            throw Error(ErrorCode::Parse,
                        path + ":" + std::to_string(line_no) + ": too few columns");
        }
        if (series.vehicle.empty()) series.vehicle = cells[vehicle_col];
        series.t.push_back(parse_cell(cells[t_col], path, line_no));
        series.error_m.push_back(parse_cell(cells[err_col], path, line_no));
    }
    return series;
}

void write_tracking_error_csv(const TrackingErrorSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open output file: " + path);
    out << "t,tracking_error_m\n";
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        out << format_telemetry_value(series.t[i]) << ','
            << format_telemetry_value(series.error_m[i]) << '\n';
    }
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

void write_tracking_error_svg(const TrackingErrorSeries& series, const std::string& path) {
    constexpr double width = 800.0;
    constexpr double height = 400.0;
    constexpr double margin = 60.0;

    double t_min = 0.0;
    double t_max = 1.0;
    double e_max = 1e-9;
    bool any = false;
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        if (!std::isfinite(series.error_m[i])) continue;
        if (!any) {
            t_min = series.t[i];
            t_max = series.t[i];
            any = true;
        }
        t_min = std::min(t_min, series.t[i]);
        t_max = std::max(t_max, series.t[i]);
        e_max = std::max(e_max, series.error_m[i]);
    }
    if (t_max <= t_min) t_max = t_min + 1.0;

    const auto x_of = [&](double t) {
        return margin + (t - t_min) / (t_max - t_min) * (width - 2 * margin);
    };
    const auto y_of = [&](double e) {
        return height - margin - e / e_max * (height - 2 * margin);
    };

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open output file: " + path);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes
    out << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // Axis labels and extents
    out << "  <text x=\"" << width / 2 << "\" y=\"" << height - margin / 3
        << "\" text-anchor=\"middle\" font-size=\"14\">time [s]</text>\n";
    out << "  <text x=\"" << margin / 3 << "\" y=\"" << height / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 " << margin / 3
        << ' ' << height / 2 << ")\">position tracking error [m]</text>\n";
    out << "  <text x=\"" << margin << "\" y=\"" << height - margin + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << format_telemetry_value(t_min)
        << "</text>\n";
    out << "  <text x=\"" << width - margin << "\" y=\"" << height - margin + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << format_telemetry_value(t_max)
        << "</text>\n";
    out << "  <text x=\"" << margin - 8 << "\" y=\"" << margin + 4
        << "\" text-anchor=\"end\" font-size=\"12\">" << format_telemetry_value(e_max)
        << "</text>\n";
    out << "  <text x=\"" << margin - 8 << "\" y=\"" << height - margin + 4
        << "\" text-anchor=\"end\" font-size=\"12\">0</text>\n";
    if (!series.vehicle.empty()) {
        out << "  <text x=\"" << width / 2 << "\" y=\"" << margin / 2
            << "\" text-anchor=\"middle\" font-size=\"16\">" << series.vehicle << "</text>\n";
    }

    // Error trace; nan entries break the polyline into segments.
    std::string points;
    const auto flush_segment = [&]() {
        if (points.empty()) return;
        out << "  <polyline fill=\"none\" stroke=\"#1f67b1\" stroke-width=\"1.5\" points=\""
            << points << "\"/>\n";
        points.clear();
    };
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        if (!std::isfinite(series.error_m[i])) {
            flush_segment();
            continue;
        }
        points += std::to_string(x_of(series.t[i])) + ',' + std::to_string(y_of(series.error_m[i])) + ' ';
    }
    flush_segment();

    out << "</svg>\n";
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

} // namespace mrsim
