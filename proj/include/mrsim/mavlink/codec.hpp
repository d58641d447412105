#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mrsim/sensors.hpp"

namespace mrsim::mav {

// ---------------------------------------------------------------------------
// Checksums
// ---------------------------------------------------------------------------

/// CRC-16/MCRF4XX over bytes, starting from crc (0xFFFF for a fresh sum).
std::uint16_t crc16_mcrf4xx(std::span<const std::uint8_t> bytes,
                            std::uint16_t crc = 0xFFFF);

/// Folds one byte into a running CRC-16/MCRF4XX.
std::uint16_t crc16_accumulate(std::uint8_t byte, std::uint16_t crc);

// ---------------------------------------------------------------------------
// Message definitions
// ---------------------------------------------------------------------------

struct FieldDef {
    const char* type;     // wire type name, e.g. "uint64_t", "float"
    const char* name;
    std::uint8_t array_len{0};   // 0 for scalar
    bool extension{false};
};

/// Wire description of one message: id, name, and fields in declaration
/// order. Wire order sorts non-extension fields by element size (descending,
/// stable) and appends extension fields unsorted.
struct MessageDef {
    std::uint32_t id;
    const char* name;
    std::vector<FieldDef> fields;

    std::vector<FieldDef> wire_order() const;
    std::size_t payload_size() const;     // full size including extensions

    /// Checksum seed byte: CRC over "NAME " then, per non-extension wire
    /// field, "type " and "name " (plus the array length byte), folded to
    /// one byte.
    std::uint8_t crc_extra() const;
};

const MessageDef& heartbeat_def();
const MessageDef& hil_sensor_def();
const MessageDef& hil_gps_def();
const MessageDef& hil_actuator_controls_def();

inline constexpr std::uint32_t kHeartbeatId = 0;
inline constexpr std::uint32_t kHilActuatorControlsId = 93;
inline constexpr std::uint32_t kHilSensorId = 107;
inline constexpr std::uint32_t kHilGpsId = 113;

// ---------------------------------------------------------------------------
// Message payloads
// ---------------------------------------------------------------------------

struct Heartbeat {
    std::uint8_t type{2};            // quadrotor
    std::uint8_t autopilot{12};
    std::uint8_t base_mode{0};
    std::uint32_t custom_mode{0};
    std::uint8_t system_status{4};
    std::uint8_t mavlink_version{3};

    bool operator==(const Heartbeat&) const = default;
};

struct HilSensor {
    std::uint64_t time_usec{0};
    float xacc{0}, yacc{0}, zacc{0};          // m/s^2, body FRD
    float xgyro{0}, ygyro{0}, zgyro{0};       // rad/s, body FRD
    float xmag{0}, ymag{0}, zmag{0};          // gauss, body FRD
    float abs_pressure{0};                    // hPa
    float diff_pressure{0};                   // hPa
    float pressure_alt{0};                    // m
    float temperature{0};                     // degC
    std::uint32_t fields_updated{0};
    std::uint8_t id{0};

    bool operator==(const HilSensor&) const = default;
};

struct HilGps {
    std::uint64_t time_usec{0};
    std::uint8_t fix_type{3};
    std::int32_t lat{0};                      // degE7
    std::int32_t lon{0};                      // degE7
    std::int32_t alt{0};                      // mm MSL
    std::uint16_t eph{100}, epv{100};         // cm
    std::uint16_t vel{0};                     // cm/s ground speed
    std::int16_t vn{0}, ve{0}, vd{0};         // cm/s NED
    std::uint16_t cog{0};                     // cdeg
    std::uint8_t satellites_visible{10};
    std::uint8_t id{0};
    std::uint16_t yaw{0};                     // cdeg, 0 = not available

    bool operator==(const HilGps&) const = default;
};

struct HilActuatorControls {
    std::uint64_t time_usec{0};
    std::array<float, 16> controls{};
    std::uint8_t mode{0};
    std::uint64_t flags{0};

    bool operator==(const HilActuatorControls&) const = default;
};

using HilMessage = std::variant<Heartbeat, HilSensor, HilGps, HilActuatorControls>;

std::uint32_t message_id(const HilMessage& msg);

// ---------------------------------------------------------------------------
// Framing
// ---------------------------------------------------------------------------

inline constexpr std::uint8_t kMagicV2 = 0xFD;
inline constexpr std::size_t kHeaderLen = 10;   // magic .. msgid, before payload

/// Parsed v2 frame header plus the truncated payload bytes.
struct MavlinkFrame {
    std::uint8_t payload_len{0};
    std::uint8_t incompat_flags{0};
    std::uint8_t compat_flags{0};
    std::uint8_t seq{0};
    std::uint8_t sysid{0};
    std::uint8_t compid{0};
    std::uint32_t msgid{0};
    std::vector<std::uint8_t> payload;
    std::uint16_t checksum{0};
};

enum class DecodeStatus {
    Ok,
    BadMagic,
    Truncated,
    CrcMismatch,
    UnknownMessage,
    UnsupportedFlags,   // signing or other incompatible flags
};

const char* decode_status_name(DecodeStatus status);

struct Decoded {
    MavlinkFrame frame;
    HilMessage message;
};

/// Serializes a message into one unsigned v2 frame, truncating trailing zero
/// payload bytes.
std::vector<std::uint8_t> encode_frame(const HilMessage& msg, std::uint8_t seq,
                                       std::uint8_t sysid, std::uint8_t compid);

/// Parses one frame from the front of the buffer. On success, out holds the
/// message and bytes_consumed the frame length.
DecodeStatus decode_frame(std::span<const std::uint8_t> bytes, Decoded& out,
                          std::size_t& bytes_consumed);

// ---------------------------------------------------------------------------
// Sensor packing
// ---------------------------------------------------------------------------

/// Packs one sensor batch into a HIL_SENSOR message: body axes flip from FLU
/// to FRD, pressure converts to hPa, temperature to degC. All data bits of
/// fields_updated are set.
HilSensor build_hil_sensor(const BaroReading& baro, const ImuReading& imu,
                           const MagReading& mag);

/// Packs a GPS reading: geodetic position in scaled integers, velocity
/// rotated from ENU into NED in cm/s, course over ground from the horizontal
/// velocity.
HilGps build_hil_gps(const GpsReading& gps);

} // namespace mrsim::mav
