#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "checks.hpp"
#include "mrsim/mavlink/codec.hpp"
#include "oracles.hpp"

using namespace mrsim;
using namespace mrsim::mav;

namespace {

std::vector<std::uint8_t> str_bytes(const char* s) {
    return {reinterpret_cast<const std::uint8_t*>(s),
            reinterpret_cast<const std::uint8_t*>(s) + std::strlen(s)};
}

// Golden frames generated by tests/tools/mavlink_reference.py (independent
// Python encoder); regenerate by running that script.

const std::vector<std::uint8_t> kGoldenHeartbeat = {
    0xfd, 0x09, 0x00, 0x00, 0x07, 0x01, 0x01, 0x00, 0x00, 0x00, 0x04, 0x03, 0x02,
    0x01, 0x02, 0x0c, 0x51, 0x04, 0x03, 0x79, 0x34};

const std::vector<std::uint8_t> kGoldenHilSensor = {
    0xfd, 0x3e, 0x00, 0x00, 0x2a, 0x01, 0x33, 0x6b, 0x00, 0x00, 0x40, 0x42, 0x0f,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x1d, 0xc1, 0x00, 0x00, 0x80, 0x3e, 0x00, 0x00, 0x00, 0xbf, 0x00,
    0x00, 0x00, 0x3e, 0x3d, 0x0a, 0x57, 0x3e, 0x00, 0x00, 0x00, 0x00, 0x3d, 0x0a,
    0xd7, 0x3e, 0x00, 0x50, 0x7d, 0x44, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0xf4,
    0x43, 0x00, 0x00, 0x70, 0x41, 0xff, 0x1f, 0xa3, 0x75};

const std::vector<std::uint8_t> kGoldenHilGps = {
    0xfd, 0x24, 0x00, 0x00, 0x03, 0x01, 0x33, 0x71, 0x00, 0x00, 0x80, 0x84,
    0x1e, 0x00, 0x00, 0x00, 0x00, 0x00, 0xa8, 0x50, 0x40, 0x1c, 0x80, 0xf4,
    0x17, 0x05, 0x40, 0x72, 0x07, 0x00, 0x64, 0x00, 0x64, 0x00, 0x78, 0x00,
    0x64, 0x00, 0xc4, 0xff, 0x14, 0x00, 0x78, 0x69, 0x03, 0x0a, 0xe5, 0xf7};

const std::vector<std::uint8_t> kGoldenHilActuatorControls = {
    0xfd, 0x51, 0x00, 0x00, 0xc8, 0x01, 0x01, 0x5d, 0x00, 0x00, 0xa0, 0x0f, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x00, 0x3f, 0x00, 0x00, 0x00, 0x3f, 0x00, 0x00, 0x00, 0x3f, 0x00,
    0x00, 0x00, 0x3f, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x81,
    0xc8, 0xfa};

Heartbeat golden_heartbeat() {
    Heartbeat m;
    m.type = 2;
    m.autopilot = 12;
    m.base_mode = 81;
    m.custom_mode = 0x01020304;
    m.system_status = 4;
    m.mavlink_version = 3;
    return m;
}

HilSensor golden_hil_sensor() {
    HilSensor m;
    m.time_usec = 1000000;
    m.zacc = -9.8125f;
    m.xgyro = 0.25f;
    m.ygyro = -0.5f;
    m.zgyro = 0.125f;
    m.xmag = 0.21f;
    m.zmag = 0.42f;
    m.abs_pressure = 1013.25f;
    m.pressure_alt = 488.0f;
    m.temperature = 15.0f;
    m.fields_updated = 0x1FFF;
    return m;
}

HilGps golden_hil_gps() {
    HilGps m;
    m.time_usec = 2000000;
    m.lat = 473977000;
    m.lon = 85456000;
    m.alt = 488000;
    m.vel = 120;
    m.vn = 100;
    m.ve = -60;
    m.vd = 20;
    m.cog = 27000;
    return m;
}

HilActuatorControls golden_hil_actuator_controls() {
    HilActuatorControls m;
    m.time_usec = 4000;
    for (int i = 0; i < 4; ++i) m.controls[static_cast<std::size_t>(i)] = 0.5f;
    m.mode = 129;
    m.flags = 1;
    return m;
}

void check_golden(const HilMessage& msg, std::uint8_t seq, std::uint8_t sysid,
                  std::uint8_t compid, const std::vector<std::uint8_t>& golden) {
    CHECK(encode_frame(msg, seq, sysid, compid) == golden);

    Decoded d;
    std::size_t consumed = 0;
    REQUIRE(decode_frame(golden, d, consumed) == DecodeStatus::Ok);
    CHECK(consumed == golden.size());
    CHECK(d.frame.seq == seq);
    CHECK(d.frame.sysid == sysid);
    CHECK(d.frame.compid == compid);
    CHECK(d.message == msg);
}

} // namespace

TEST_SUITE("mavlink_codec") {

TEST_CASE("checksum matches the published check value and residue") {
    CHECK(crc16_mcrf4xx(str_bytes("123456789")) == 0x6F91);
    CHECK(crc16_mcrf4xx({}) == 0xFFFF);   // empty input leaves the seed

    // Appending the checksum (low byte first) drives the sum to the zero
    // residue — the property framers rely on.
    std::vector<std::uint8_t> data = str_bytes("framesync");
    const std::uint16_t crc = crc16_mcrf4xx(data);
    data.push_back(static_cast<std::uint8_t>(crc & 0xFF));
    data.push_back(static_cast<std::uint8_t>(crc >> 8));
    CHECK(crc16_mcrf4xx(data) == 0);
}

TEST_CASE("checksum agrees with the table-driven oracle on random buffers") {
    std::mt19937_64 rng(505);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<std::size_t> len(0, 280);
    for (int i = 0; i < 500; ++i) {
        std::vector<std::uint8_t> buf(len(rng));
        for (auto& b : buf) b = static_cast<std::uint8_t>(byte(rng));
        CHECK(crc16_mcrf4xx(buf) == oracle::crc16_table(buf));
    }
}

TEST_CASE("byte-at-a-time accumulation equals the span form") {
    const std::vector<std::uint8_t> data = str_bytes("0123abc");
    std::uint16_t crc = 0xFFFF;
    for (std::uint8_t b : data) crc = crc16_accumulate(b, crc);
    CHECK(crc == crc16_mcrf4xx(data));
}

TEST_CASE("message definitions carry the frozen checksum seeds") {
    // Frozen by tests/tools/mavlink_reference.py.
    CHECK(heartbeat_def().crc_extra() == 50);
    CHECK(hil_sensor_def().crc_extra() == 108);
    CHECK(hil_gps_def().crc_extra() == 124);
    CHECK(hil_actuator_controls_def().crc_extra() == 47);
}

TEST_CASE("payload sizes and ids match the definitions") {
    CHECK(heartbeat_def().id == 0);
    CHECK(hil_sensor_def().id == 107);
    CHECK(hil_gps_def().id == 113);
    CHECK(hil_actuator_controls_def().id == 93);
    CHECK(heartbeat_def().payload_size() == 9);
    CHECK(hil_sensor_def().payload_size() == 65);
    CHECK(hil_gps_def().payload_size() == 39);
    CHECK(hil_actuator_controls_def().payload_size() == 81);
}

TEST_CASE("wire order sorts by element size and appends extensions") {
    const auto hb = heartbeat_def().wire_order();
    REQUIRE(hb.size() == 6);
    CHECK(std::string(hb[0].name) == "custom_mode");   // only 4-byte field first
    CHECK(std::string(hb[1].name) == "type");          // then declaration order

    const auto gps = hil_gps_def().wire_order();
    CHECK(std::string(gps.front().name) == "time_usec");
    CHECK(gps[gps.size() - 2].extension);
    CHECK(std::string(gps[gps.size() - 2].name) == "id");
    CHECK(gps.back().extension);
    CHECK(std::string(gps.back().name) == "yaw");

    const auto act = hil_actuator_controls_def().wire_order();
    CHECK(std::string(act[0].name) == "time_usec");
    CHECK(std::string(act[1].name) == "flags");     // 8-byte fields lead
    CHECK(std::string(act[2].name) == "controls");
    CHECK(std::string(act[3].name) == "mode");
}

TEST_CASE("golden heartbeat frame") {
    check_golden(golden_heartbeat(), 7, 1, 1, kGoldenHeartbeat);
}

TEST_CASE("golden sensor frame") {
    check_golden(golden_hil_sensor(), 42, 1, 51, kGoldenHilSensor);
    // The trailing zero extension byte truncates away: 65 - 2 zero u32 tail
    // bytes - 1 zero id byte = 62.
    CHECK(kGoldenHilSensor[1] == 62);
}

TEST_CASE("golden gps frame") {
    check_golden(golden_hil_gps(), 3, 1, 51, kGoldenHilGps);
    CHECK(kGoldenHilGps[1] == 36);   // id and yaw extensions truncated
}

TEST_CASE("golden actuator frame") {
    check_golden(golden_hil_actuator_controls(), 200, 1, 1, kGoldenHilActuatorControls);
    CHECK(kGoldenHilActuatorControls[1] == 81);   // mode != 0 blocks truncation
}

TEST_CASE("all-zero payloads truncate to a single byte and reinflate") {
    Heartbeat zero;
    zero.type = 0;
    zero.autopilot = 0;
    zero.system_status = 0;
    zero.mavlink_version = 0;

    const auto frame = encode_frame(zero, 0, 1, 1);
    CHECK(frame[1] == 1);                       // payload length
    CHECK(frame.size() == kHeaderLen + 1 + 2);

    Decoded d;
    std::size_t consumed = 0;
    REQUIRE(decode_frame(frame, d, consumed) == DecodeStatus::Ok);
    CHECK(std::get<Heartbeat>(d.message) == zero);
}

TEST_CASE("random messages round-trip exactly") {
    std::mt19937_64 rng(606);
    std::uniform_int_distribution<std::uint32_t> u32;
    std::uniform_int_distribution<std::uint64_t> u64;
    std::uniform_int_distribution<int> u8(0, 255);
    std::uniform_int_distribution<std::int32_t> i32(std::numeric_limits<std::int32_t>::min(),
                                                    std::numeric_limits<std::int32_t>::max());
    std::uniform_int_distribution<int> i16(-32768, 32767);
    std::uniform_int_distribution<int> u16(0, 65535);
    std::uniform_real_distribution<float> f(-1000.0f, 1000.0f);

    for (int i = 0; i < 2000; ++i) {
        const std::uint8_t seq = static_cast<std::uint8_t>(u8(rng));
        HilMessage msg;
        switch (i % 4) {
        case 0: {
            Heartbeat m;
            m.type = static_cast<std::uint8_t>(u8(rng));
            m.autopilot = static_cast<std::uint8_t>(u8(rng));
            m.base_mode = static_cast<std::uint8_t>(u8(rng));
            m.custom_mode = u32(rng);
            m.system_status = static_cast<std::uint8_t>(u8(rng));
            m.mavlink_version = static_cast<std::uint8_t>(u8(rng));
            msg = m;
            break;
        }
        case 1: {
            HilSensor m;
            m.time_usec = u64(rng);
            m.xacc = f(rng); m.yacc = f(rng); m.zacc = f(rng);
            m.xgyro = f(rng); m.ygyro = f(rng); m.zgyro = f(rng);
            m.xmag = f(rng); m.ymag = f(rng); m.zmag = f(rng);
            m.abs_pressure = f(rng);
            m.diff_pressure = f(rng);
            m.pressure_alt = f(rng);
            m.temperature = f(rng);
            m.fields_updated = u32(rng);
            m.id = static_cast<std::uint8_t>(u8(rng));
            msg = m;
            break;
        }
        case 2: {
            HilGps m;
            m.time_usec = u64(rng);
            m.fix_type = static_cast<std::uint8_t>(u8(rng));
            m.lat = i32(rng); m.lon = i32(rng); m.alt = i32(rng);
            m.eph = static_cast<std::uint16_t>(u16(rng));
            m.epv = static_cast<std::uint16_t>(u16(rng));
            m.vel = static_cast<std::uint16_t>(u16(rng));
            m.vn = static_cast<std::int16_t>(i16(rng));
            m.ve = static_cast<std::int16_t>(i16(rng));
            m.vd = static_cast<std::int16_t>(i16(rng));
            m.cog = static_cast<std::uint16_t>(u16(rng));
            m.satellites_visible = static_cast<std::uint8_t>(u8(rng));
            m.id = static_cast<std::uint8_t>(u8(rng));
            m.yaw = static_cast<std::uint16_t>(u16(rng));
            msg = m;
            break;
        }
        default: {
            HilActuatorControls m;
            m.time_usec = u64(rng);
            for (auto& c : m.controls) c = f(rng);
            m.mode = static_cast<std::uint8_t>(u8(rng));
            m.flags = u64(rng);
            msg = m;
            break;
        }
        }

        const auto bytes = encode_frame(msg, seq, 17, 99);
        Decoded d;
        std::size_t consumed = 0;
        REQUIRE(decode_frame(bytes, d, consumed) == DecodeStatus::Ok);
        CHECK(consumed == bytes.size());
        CHECK(d.frame.seq == seq);
        CHECK(d.message == msg);
    }
}

TEST_CASE("message ids from the variant") {
    CHECK(message_id(Heartbeat{}) == 0);
    CHECK(message_id(HilSensor{}) == 107);
    CHECK(message_id(HilGps{}) == 113);
    CHECK(message_id(HilActuatorControls{}) == 93);
}

TEST_CASE("decode rejects malformed input with the right status") {
    Decoded d;
    std::size_t consumed = 0;

    SUBCASE("empty buffer") {
        CHECK(decode_frame({}, d, consumed) == DecodeStatus::Truncated);
    }
    SUBCASE("wrong magic") {
        const std::vector<std::uint8_t> junk = {0x55, 0x00, 0x00};
        CHECK(decode_frame(junk, d, consumed) == DecodeStatus::BadMagic);
    }
    SUBCASE("short header") {
        std::vector<std::uint8_t> cut(kGoldenHeartbeat.begin(), kGoldenHeartbeat.begin() + 6);
        CHECK(decode_frame(cut, d, consumed) == DecodeStatus::Truncated);
    }
    SUBCASE("payload cut off") {
        std::vector<std::uint8_t> cut(kGoldenHeartbeat.begin(), kGoldenHeartbeat.end() - 3);
        CHECK(decode_frame(cut, d, consumed) == DecodeStatus::Truncated);
    }
    SUBCASE("corrupted payload byte") {
        std::vector<std::uint8_t> bad = kGoldenHeartbeat;
        bad[12] ^= 0x40;
        CHECK(decode_frame(bad, d, consumed) == DecodeStatus::CrcMismatch);
    }
    SUBCASE("corrupted checksum") {
        std::vector<std::uint8_t> bad = kGoldenHeartbeat;
        bad.back() ^= 0x01;
        CHECK(decode_frame(bad, d, consumed) == DecodeStatus::CrcMismatch);
    }
    SUBCASE("unknown message id") {
        std::vector<std::uint8_t> bad = kGoldenHeartbeat;
        bad[7] = 0xDC;   // 220, not a known id
        CHECK(decode_frame(bad, d, consumed) == DecodeStatus::UnknownMessage);
    }
    SUBCASE("incompatible flags such as signing") {
        std::vector<std::uint8_t> bad = kGoldenHeartbeat;
        bad[2] = 0x01;
        CHECK(decode_frame(bad, d, consumed) == DecodeStatus::UnsupportedFlags);
    }
    CHECK(consumed == 0);   // nothing consumed on any failure
}

TEST_CASE("status names are stable for diagnostics") {
    CHECK(std::string(decode_status_name(DecodeStatus::Ok)) == "ok");
    CHECK(std::string(decode_status_name(DecodeStatus::CrcMismatch)) == "crc mismatch");
}

TEST_CASE("sensor batch packing flips handedness and converts units") {
    BaroReading baro;
    baro.temperature_k = 288.15;
    baro.pressure_pa = 101325.0;
    baro.pressure_altitude_m = 488.0;
    baro.time = 1.25;

    ImuReading imu;
    imu.gyro_rad_s = {0.25, 0.5, -0.125};    // body FLU
    imu.accel_m_s2 = {0.0, 0.5, 9.8125};
    imu.time = 1.25;

    MagReading mag;
    mag.field_gauss = {0.21, -0.1, -0.42};
    mag.time = 1.2;

    const HilSensor m = build_hil_sensor(baro, imu, mag);
    CHECK(m.time_usec == 1250000);           // latest reading wins
    CHECK(m.xacc == 0.0f);                   // x unchanged
    CHECK(m.yacc == -0.5f);                  // left -> right flips sign
    CHECK(m.zacc == -9.8125f);               // up -> down flips sign
    CHECK(m.xgyro == 0.25f);
    CHECK(m.ygyro == -0.5f);
    CHECK(m.zgyro == 0.125f);
    CHECK(m.xmag == 0.21f);
    CHECK(m.ymag == 0.1f);
    CHECK(m.zmag == 0.42f);
    CHECK(m.abs_pressure == 1013.25f);       // Pa -> hPa
    CHECK(m.pressure_alt == 488.0f);
    CHECK(m.temperature == 15.0f);           // K -> degC
    CHECK(m.fields_updated == 0x1FFF);
    CHECK(m.diff_pressure == 0.0f);
}

TEST_CASE("gps packing scales position and rotates velocity into north-east-down") {
    GpsReading g;
    g.latitude_deg = 47.3977;
    g.longitude_deg = 8.5456;
    g.altitude_m = 488.0;
    g.velocity_m_s = {-0.6, 1.0, -0.2};   // ENU: 0.6 west, 1.0 north, 0.2 down
    g.time = 2.0;

    const HilGps m = build_hil_gps(g);
    CHECK(m.time_usec == 2000000);
    CHECK(m.lat == 473977000);
    CHECK(m.lon == 85456000);
    CHECK(m.alt == 488000);
    CHECK(m.vn == 100);    // north from ENU y
    CHECK(m.ve == -60);    // east from ENU x
    CHECK(m.vd == 20);     // down from -ENU z
    CHECK(m.vel == 117);   // round(hypot(1.0, 0.6) * 100)
    CHECK(m.fix_type == 3);
    CHECK(m.eph == 100);
    CHECK(m.epv == 100);
    CHECK(m.satellites_visible == 10);
    CHECK(m.yaw == 0);
}

TEST_CASE("course over ground wraps to [0, 360) hundredths") {
    GpsReading g;

    g.velocity_m_s = {1.0, 1.0, 0.0};     // north-east
    CHECK(build_hil_gps(g).cog == 4500);

    g.velocity_m_s = {-1.0, 0.0, 0.0};    // due west
    CHECK(build_hil_gps(g).cog == 27000);

    g.velocity_m_s = {0.0, -1.0, 0.0};    // due south
    CHECK(build_hil_gps(g).cog == 18000);

    // A hair west of north rounds to 360.00 deg, which must wrap to 0.
    g.velocity_m_s = {-1e-8, 10.0, 0.0};
    CHECK(build_hil_gps(g).cog == 0);

    // Stationary: course undefined, reported as 0 with zero ground speed.
    g.velocity_m_s = {0.0, 0.0, -3.0};
    const HilGps still = build_hil_gps(g);
    CHECK(still.vel == 0);
    CHECK(still.cog == 0);
    CHECK(still.vd == 300);
}

TEST_CASE("gps velocity components clamp at the 16-bit limits") {
    GpsReading g;
    g.velocity_m_s = {400.0, -400.0, 0.0};   // 40000 cm/s overflows int16
    const HilGps m = build_hil_gps(g);
    CHECK(m.ve == 32767);
    CHECK(m.vn == -32768);
    CHECK(m.vel == 56569);                   // fits u16 unclamped
}

} // TEST_SUITE
