#include "mrsim/mavlink/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>

#include "mrsim/error.hpp"
#include "mrsim/frames.hpp"

namespace mrsim::mav {

// ---------------------------------------------------------------------------
// Checksums
// ---------------------------------------------------------------------------

std::uint16_t crc16_accumulate(std::uint8_t byte, std::uint16_t crc) {
    std::uint8_t tmp = byte ^ static_cast<std::uint8_t>(crc & 0xFF);
    tmp ^= static_cast<std::uint8_t>(tmp << 4);
    return static_cast<std::uint16_t>((crc >> 8) ^ (static_cast<std::uint16_t>(tmp) << 8) ^
                                      (static_cast<std::uint16_t>(tmp) << 3) ^ (tmp >> 4));
}

std::uint16_t crc16_mcrf4xx(std::span<const std::uint8_t> bytes, std::uint16_t crc) {
    for (std::uint8_t b : bytes) crc = crc16_accumulate(b, crc);
    return crc;
}

namespace {

std::uint16_t crc_accumulate_str(const char* s, std::uint16_t crc) {
    for (; *s != '\0'; ++s) crc = crc16_accumulate(static_cast<std::uint8_t>(*s), crc);
    return crc;
}

std::size_t element_size(const char* type) {
    const std::string_view t{type};
    if (t == "uint64_t" || t == "int64_t" || t == "double") return 8;
    if (t == "uint32_t" || t == "int32_t" || t == "float") return 4;
    if (t == "uint16_t" || t == "int16_t") return 2;
    if (t == "uint8_t" || t == "int8_t" || t == "char") return 1;
    throw_invalid("unknown wire type: " + std::string(t));
}

std::size_t field_size(const FieldDef& f) {
    return element_size(f.type) * std::max<std::size_t>(1, f.array_len);
}

} // namespace

// ---------------------------------------------------------------------------
// Message definitions
// ---------------------------------------------------------------------------

std::vector<FieldDef> MessageDef::wire_order() const {
    std::vector<FieldDef> main;
    std::vector<FieldDef> ext;
    for (const FieldDef& f : fields) (f.extension ? ext : main).push_back(f);
    std::stable_sort(main.begin(), main.end(), [](const FieldDef& a, const FieldDef& b) {
        return element_size(a.type) > element_size(b.type);
    });
    main.insert(main.end(), ext.begin(), ext.end());
    return main;
}

std::size_t MessageDef::payload_size() const {
    std::size_t n = 0;
    for (const FieldDef& f : fields) n += field_size(f);
    return n;
}

std::uint8_t MessageDef::crc_extra() const {
    std::uint16_t crc = 0xFFFF;
    crc = crc_accumulate_str(name, crc);
    crc = crc16_accumulate(' ', crc);
    for (const FieldDef& f : wire_order()) {
        if (f.extension) continue;
        crc = crc_accumulate_str(f.type, crc);
        crc = crc16_accumulate(' ', crc);
        crc = crc_accumulate_str(f.name, crc);
        crc = crc16_accumulate(' ', crc);
        if (f.array_len != 0) crc = crc16_accumulate(f.array_len, crc);
    }
    return static_cast<std::uint8_t>((crc & 0xFF) ^ (crc >> 8));
}

const MessageDef& heartbeat_def() {
    static const MessageDef def{
        kHeartbeatId,
        "HEARTBEAT",
        {
            {"uint8_t", "type"},
            {"uint8_t", "autopilot"},
            {"uint8_t", "base_mode"},
            {"uint32_t", "custom_mode"},
            {"uint8_t", "system_status"},
            {"uint8_t", "mavlink_version"},
        },
    };
    return def;
}

const MessageDef& hil_sensor_def() {
    static const MessageDef def{
        kHilSensorId,
        "HIL_SENSOR",
        {
            {"uint64_t", "time_usec"},
            {"float", "xacc"},
            {"float", "yacc"},
            {"float", "zacc"},
            {"float", "xgyro"},
            {"float", "ygyro"},
            {"float", "zgyro"},
            {"float", "xmag"},
            {"float", "ymag"},
            {"float", "zmag"},
            {"float", "abs_pressure"},
            {"float", "diff_pressure"},
            {"float", "pressure_alt"},
            {"float", "temperature"},
            {"uint32_t", "fields_updated"},
            {"uint8_t", "id", 0, true},
        },
    };
    return def;
}

const MessageDef& hil_gps_def() {
    static const MessageDef def{
        kHilGpsId,
        "HIL_GPS",
        {
            {"uint64_t", "time_usec"},
            {"uint8_t", "fix_type"},
            {"int32_t", "lat"},
            {"int32_t", "lon"},
            {"int32_t", "alt"},
            {"uint16_t", "eph"},
            {"uint16_t", "epv"},
            {"uint16_t", "vel"},
            {"int16_t", "vn"},
            {"int16_t", "ve"},
            {"int16_t", "vd"},
            {"uint16_t", "cog"},
            {"uint8_t", "satellites_visible"},
            {"uint8_t", "id", 0, true},
            {"uint16_t", "yaw", 0, true},
        },
    };
    return def;
}

const MessageDef& hil_actuator_controls_def() {
    static const MessageDef def{
        kHilActuatorControlsId,
        "HIL_ACTUATOR_CONTROLS",
        {
            {"uint64_t", "time_usec"},
            {"float", "controls", 16},
            {"uint8_t", "mode"},
            {"uint64_t", "flags"},
        },
    };
    return def;
}

std::uint32_t message_id(const HilMessage& msg) {
    return std::visit(
        [](const auto& m) -> std::uint32_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Heartbeat>) return kHeartbeatId;
            else if constexpr (std::is_same_v<T, HilSensor>) return kHilSensorId;
            else if constexpr (std::is_same_v<T, HilGps>) return kHilGpsId;
            else return kHilActuatorControlsId;
        },
        msg);
}

// ---------------------------------------------------------------------------
// Little-endian payload IO
// ---------------------------------------------------------------------------

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_i16(std::vector<std::uint8_t>& out, std::int16_t v) {
    put_u16(out, static_cast<std::uint16_t>(v));
}

void put_i32(std::vector<std::uint8_t>& out, std::int32_t v) {
    put_u32(out, static_cast<std::uint32_t>(v));
}

void put_float(std::vector<std::uint8_t>& out, float v) {
    put_u32(out, std::bit_cast<std::uint32_t>(v));
}

/// Sequential reader over a zero-extended payload buffer.
struct Reader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos{0};

    std::uint8_t u8() { return bytes[pos++]; }

    std::uint16_t u16() {
        std::uint16_t v = static_cast<std::uint16_t>(bytes[pos]) |
                          static_cast<std::uint16_t>(bytes[pos + 1]) << 8;
        pos += 2;
        return v;
    }

    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }

    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }

    std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    float f32() { return std::bit_cast<float>(u32()); }
};

// Payload packers, laid out in wire order (largest element size first,
// extension fields last).

std::vector<std::uint8_t> pack(const Heartbeat& m) {
    std::vector<std::uint8_t> p;
    p.reserve(heartbeat_def().payload_size());
    put_u32(p, m.custom_mode);
    put_u8(p, m.type);
    put_u8(p, m.autopilot);
    put_u8(p, m.base_mode);
    put_u8(p, m.system_status);
    put_u8(p, m.mavlink_version);
    return p;
}

std::vector<std::uint8_t> pack(const HilSensor& m) {
    std::vector<std::uint8_t> p;
    p.reserve(hil_sensor_def().payload_size());
    put_u64(p, m.time_usec);
    put_float(p, m.xacc);
    put_float(p, m.yacc);
    put_float(p, m.zacc);
    put_float(p, m.xgyro);
    put_float(p, m.ygyro);
    put_float(p, m.zgyro);
    put_float(p, m.xmag);
    put_float(p, m.ymag);
    put_float(p, m.zmag);
    put_float(p, m.abs_pressure);
    put_float(p, m.diff_pressure);
    put_float(p, m.pressure_alt);
    put_float(p, m.temperature);
    put_u32(p, m.fields_updated);
    put_u8(p, m.id);
    return p;
}

std::vector<std::uint8_t> pack(const HilGps& m) {
    std::vector<std::uint8_t> p;
    p.reserve(hil_gps_def().payload_size());
    put_u64(p, m.time_usec);
    put_i32(p, m.lat);
    put_i32(p, m.lon);
    put_i32(p, m.alt);
    put_u16(p, m.eph);
    put_u16(p, m.epv);
    put_u16(p, m.vel);
    put_i16(p, m.vn);
    put_i16(p, m.ve);
    put_i16(p, m.vd);
    put_u16(p, m.cog);
    put_u8(p, m.fix_type);
    put_u8(p, m.satellites_visible);
    put_u8(p, m.id);
    put_u16(p, m.yaw);
    return p;
}

std::vector<std::uint8_t> pack(const HilActuatorControls& m) {
    std::vector<std::uint8_t> p;
    p.reserve(hil_actuator_controls_def().payload_size());
    put_u64(p, m.time_usec);
    put_u64(p, m.flags);
    for (float c : m.controls) put_float(p, c);
    put_u8(p, m.mode);
    return p;
}

HilMessage unpack(std::uint32_t msgid, std::span<const std::uint8_t> payload) {
    Reader r{payload};
    switch (msgid) {
        case kHeartbeatId: {
            Heartbeat m;
            m.custom_mode = r.u32();
            m.type = r.u8();
            m.autopilot = r.u8();
            m.base_mode = r.u8();
            m.system_status = r.u8();
            m.mavlink_version = r.u8();
            return m;
        }
        case kHilSensorId: {
            HilSensor m;
            m.time_usec = r.u64();
            m.xacc = r.f32();
            m.yacc = r.f32();
            m.zacc = r.f32();
            m.xgyro = r.f32();
            m.ygyro = r.f32();
            m.zgyro = r.f32();
            m.xmag = r.f32();
            m.ymag = r.f32();
            m.zmag = r.f32();
            m.abs_pressure = r.f32();
            m.diff_pressure = r.f32();
            m.pressure_alt = r.f32();
            m.temperature = r.f32();
            m.fields_updated = r.u32();
            m.id = r.u8();
            return m;
        }
        case kHilGpsId: {
            HilGps m;
            m.time_usec = r.u64();
            m.lat = r.i32();
            m.lon = r.i32();
            m.alt = r.i32();
            m.eph = r.u16();
            m.epv = r.u16();
            m.vel = r.u16();
            m.vn = r.i16();
            m.ve = r.i16();
            m.vd = r.i16();
            m.cog = r.u16();
            m.fix_type = r.u8();
            m.satellites_visible = r.u8();
            m.id = r.u8();
            m.yaw = r.u16();
            return m;
        }
        case kHilActuatorControlsId: {
            HilActuatorControls m;
            m.time_usec = r.u64();
            m.flags = r.u64();
            for (float& c : m.controls) c = r.f32();
            m.mode = r.u8();
            return m;
        }
        default:
            throw_invalid("unpack: unknown message id " + std::to_string(msgid));
    }
}

const MessageDef* find_def(std::uint32_t msgid) {
    switch (msgid) {
        case kHeartbeatId: return &heartbeat_def();
        case kHilSensorId: return &hil_sensor_def();
        case kHilGpsId: return &hil_gps_def();
        case kHilActuatorControlsId: return &hil_actuator_controls_def();
        default: return nullptr;
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Framing
// ---------------------------------------------------------------------------

const char* decode_status_name(DecodeStatus status) {
    switch (status) {
        case DecodeStatus::Ok: return "ok";
        case DecodeStatus::BadMagic: return "bad magic";
        case DecodeStatus::Truncated: return "truncated frame";
        case DecodeStatus::CrcMismatch: return "crc mismatch";
        case DecodeStatus::UnknownMessage: return "unknown message id";
        case DecodeStatus::UnsupportedFlags: return "unsupported incompat flags";
    }
    return "invalid status";
}

std::vector<std::uint8_t> encode_frame(const HilMessage& msg, std::uint8_t seq,
                                       std::uint8_t sysid, std::uint8_t compid) {
    const std::uint32_t msgid = message_id(msg);
    const MessageDef& def = *find_def(msgid);

    std::vector<std::uint8_t> payload =
        std::visit([](const auto& m) { return pack(m); }, msg);

    // v2 zero-truncation: drop trailing zero bytes but keep at least one.
    std::size_t n = payload.size();
    while (n > 1 && payload[n - 1] == 0) --n;

    std::vector<std::uint8_t> frame;
    frame.reserve(kHeaderLen + n + 2);
    frame.push_back(kMagicV2);
    frame.push_back(static_cast<std::uint8_t>(n));
    frame.push_back(0);   // incompat_flags
    frame.push_back(0);   // compat_flags
    frame.push_back(seq);
    frame.push_back(sysid);
    frame.push_back(compid);
    frame.push_back(static_cast<std::uint8_t>(msgid));
    frame.push_back(static_cast<std::uint8_t>(msgid >> 8));
    frame.push_back(static_cast<std::uint8_t>(msgid >> 16));
    frame.insert(frame.end(), payload.begin(), payload.begin() + static_cast<long>(n));

    std::uint16_t crc = crc16_mcrf4xx({frame.data() + 1, frame.size() - 1});
    crc = crc16_accumulate(def.crc_extra(), crc);
    put_u16(frame, crc);
    return frame;
}

DecodeStatus decode_frame(std::span<const std::uint8_t> bytes, Decoded& out,
                          std::size_t& bytes_consumed) {
    bytes_consumed = 0;
    if (bytes.empty()) return DecodeStatus::Truncated;
    if (bytes[0] != kMagicV2) return DecodeStatus::BadMagic;
    if (bytes.size() < kHeaderLen) return DecodeStatus::Truncated;

    const std::uint8_t payload_len = bytes[1];
    const std::size_t total = kHeaderLen + payload_len + 2;
    if (bytes.size() < total) return DecodeStatus::Truncated;

    const std::uint8_t incompat = bytes[2];
    if (incompat != 0) return DecodeStatus::UnsupportedFlags;

    const std::uint32_t msgid = static_cast<std::uint32_t>(bytes[7]) |
                                static_cast<std::uint32_t>(bytes[8]) << 8 |
                                static_cast<std::uint32_t>(bytes[9]) << 16;
    const MessageDef* def = find_def(msgid);
    if (def == nullptr) return DecodeStatus::UnknownMessage;

    std::uint16_t crc = crc16_mcrf4xx(bytes.subspan(1, total - 3));
    crc = crc16_accumulate(def->crc_extra(), crc);
    const std::uint16_t stored = static_cast<std::uint16_t>(bytes[total - 2]) |
                                 static_cast<std::uint16_t>(bytes[total - 1]) << 8;
    if (crc != stored) return DecodeStatus::CrcMismatch;

    MavlinkFrame& frame = out.frame;
    frame.payload_len = payload_len;
    frame.incompat_flags = incompat;
    frame.compat_flags = bytes[3];
    frame.seq = bytes[4];
    frame.sysid = bytes[5];
    frame.compid = bytes[6];
    frame.msgid = msgid;
    frame.payload.assign(bytes.begin() + kHeaderLen, bytes.begin() + kHeaderLen + payload_len);
    frame.checksum = stored;

    // Reinflate the truncated payload to the full definition length before
    // reading fixed offsets.
    std::vector<std::uint8_t> full(def->payload_size(), 0);
    std::memcpy(full.data(), frame.payload.data(),
                std::min<std::size_t>(payload_len, full.size()));
    out.message = unpack(msgid, full);

    bytes_consumed = total;
    return DecodeStatus::Ok;
}

// ---------------------------------------------------------------------------
// Sensor packing
// ---------------------------------------------------------------------------

namespace {

// All thirteen data fields of HIL_SENSOR present (accel, gyro, mag, pressures,
// altitude, temperature).
constexpr std::uint32_t kAllFieldsUpdated = 0x1FFF;

std::uint64_t to_usec(double t) {
    return static_cast<std::uint64_t>(std::llround(t * 1e6));
}

std::int16_t clamp_i16(double v) {
    return static_cast<std::int16_t>(
        std::clamp(v, -32768.0, 32767.0));
}

std::uint16_t clamp_u16(double v) {
    return static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
}

} // namespace

HilSensor build_hil_sensor(const BaroReading& baro, const ImuReading& imu,
                           const MagReading& mag) {
    const Vec3 accel = convert_body(imu.accel_m_s2, BodyFrame::Flu, BodyFrame::Frd);
    const Vec3 gyro = convert_body(imu.gyro_rad_s, BodyFrame::Flu, BodyFrame::Frd);
    const Vec3 field = convert_body(mag.field_gauss, BodyFrame::Flu, BodyFrame::Frd);

    HilSensor m;
    m.time_usec = to_usec(std::max({imu.time, baro.time, mag.time}));
    m.xacc = static_cast<float>(accel.x);
    m.yacc = static_cast<float>(accel.y);
    m.zacc = static_cast<float>(accel.z);
    m.xgyro = static_cast<float>(gyro.x);
    m.ygyro = static_cast<float>(gyro.y);
    m.zgyro = static_cast<float>(gyro.z);
    m.xmag = static_cast<float>(field.x);
    m.ymag = static_cast<float>(field.y);
    m.zmag = static_cast<float>(field.z);
    m.abs_pressure = static_cast<float>(baro.pressure_pa / 100.0);   // Pa -> hPa
    m.diff_pressure = 0.0f;
    m.pressure_alt = static_cast<float>(baro.pressure_altitude_m);
    m.temperature = static_cast<float>(baro.temperature_k - 273.15);
    m.fields_updated = kAllFieldsUpdated;
    m.id = 0;
    return m;
}

HilGps build_hil_gps(const GpsReading& gps) {
    const Vec3 v_ned = convert_inertial(gps.velocity_m_s, InertialFrame::Enu,
                                        InertialFrame::Ned);

    HilGps m;
    m.time_usec = to_usec(gps.time);
    m.fix_type = 3;
    m.lat = static_cast<std::int32_t>(std::llround(gps.latitude_deg * 1e7));
    m.lon = static_cast<std::int32_t>(std::llround(gps.longitude_deg * 1e7));
    m.alt = static_cast<std::int32_t>(std::llround(gps.altitude_m * 1000.0));
    m.eph = 100;
    m.epv = 100;
    m.vn = clamp_i16(std::round(v_ned.x * 100.0));
    m.ve = clamp_i16(std::round(v_ned.y * 100.0));
    m.vd = clamp_i16(std::round(v_ned.z * 100.0));

    const double ground_speed = std::hypot(v_ned.x, v_ned.y);
    m.vel = clamp_u16(std::round(ground_speed * 100.0));
    double course_deg = std::atan2(v_ned.y, v_ned.x) * 180.0 / std::numbers::pi;
    if (course_deg < 0.0) course_deg += 360.0;
    // Course over ground is undefined when stationary; report north.
    m.cog = (m.vel == 0) ? 0 : clamp_u16(std::round(course_deg * 100.0));
    if (m.cog >= 36000) m.cog = 0;

    m.satellites_visible = 10;
    m.id = 0;
    m.yaw = 0;   // not available
    return m;
}

} // namespace mrsim::mav
