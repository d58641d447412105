#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/backend.hpp"
#include "mrsim/mavlink/codec.hpp"
#include "mrsim/sensors.hpp"

namespace mrsim::mav {

// ---------------------------------------------------------------------------
// UDP transport
// ---------------------------------------------------------------------------

/// Thin RAII wrapper over a bound IPv4 UDP socket.
class UdpSocket {
public:
    /// Binds to 0.0.0.0:port (0 picks an ephemeral port).
    explicit UdpSocket(std::uint16_t port);
    ~UdpSocket();

    UdpSocket(const UdpSocket&) = delete;
    UdpSocket& operator=(const UdpSocket&) = delete;

    std::uint16_t local_port() const { return local_port_; }

    void send_to(const std::string& host, std::uint16_t port,
                 std::span<const std::uint8_t> bytes);

    /// Waits up to timeout_ms (0 = just poll) for a datagram. Returns empty
    /// if none arrived. sender_host/sender_port report the source address.
    std::optional<std::vector<std::uint8_t>> receive(int timeout_ms,
                                                     std::string* sender_host = nullptr,
                                                     std::uint16_t* sender_port = nullptr);

private:
    int fd_{-1};
    std::uint16_t local_port_{0};
};

// ---------------------------------------------------------------------------
// HIL session
// ---------------------------------------------------------------------------

struct HilConfig {
    std::string remote_host{"127.0.0.1"};
    std::uint16_t remote_port{0};     // 0: adopt the first peer that talks to us
    std::uint16_t local_port{0};      // 0: ephemeral
    bool lockstep{true};
    double actuator_timeout_s{1.0};
    double heartbeat_period_s{1.0};
    std::uint8_t sysid{1};
    std::uint8_t compid{51};
};

enum class HilState { WaitingHandshake, Running, Closed };

struct HilStats {
    std::uint64_t sensor_batches_sent{0};
    std::uint64_t gps_messages_sent{0};
    std::uint64_t heartbeats_sent{0};
    std::uint64_t actuator_messages_accepted{0};
    std::uint64_t duplicates_dropped{0};
    std::uint64_t decode_errors{0};
};

/// Latest sensor readings bundled for one exchange with the autopilot.
struct SensorBatch {
    BaroReading baro;
    MagReading mag;
    ImuReading imu;
    std::optional<GpsReading> gps;
};

/// One simulator-side MAVLink connection to an external autopilot. Sends
/// HIL_SENSOR (+ HIL_GPS) each physics step and maps HIL_ACTUATOR_CONTROLS
/// back to rotor speeds. In lockstep mode every exchange blocks until an
/// actuator message arrives; a silent autopilot is an error after the
/// configured timeout. Duplicate actuator frames (same sequence number) are
/// dropped; out-of-order sequence numbers are accepted.
class HilSession {
public:
    HilSession(const HilConfig& config, const MultirotorParams& params);

    HilState state() const { return state_; }
    const HilStats& stats() const { return stats_; }
    std::uint16_t local_port() const { return socket_.local_port(); }

    /// Ships the batch, then (lockstep) waits for actuator controls and
    /// returns the mapped rotor command. Non-lockstep exchanges drain
    /// whatever already arrived and keep the last command.
    RotorCommand exchange(const SensorBatch& batch, double sim_time);

    void close();

private:
    void send_message(const HilMessage& msg);
    bool pump(int timeout_ms);   // true if a datagram arrived
    void handle_frame(const Decoded& decoded);

    HilConfig config_;
    MultirotorParams params_;
    UdpSocket socket_;
    HilState state_;
    HilStats stats_;
    std::uint8_t tx_seq_{0};
    std::optional<std::uint8_t> last_actuator_seq_;
    double next_heartbeat_time_{0.0};
    RotorCommand last_command_;
    bool actuator_pending_{false};
};

// ---------------------------------------------------------------------------
// Backend adapter
// ---------------------------------------------------------------------------

/// Feeds sensor readings to an external autopilot over MAVLink and turns its
/// actuator replies into rotor commands. GPS is forwarded only when a fresh
/// fix arrived since the previous exchange.
class MavlinkBackend : public ControlBackend {
public:
    MavlinkBackend(const HilConfig& config, const MultirotorParams& params);

    void receive_state(const RigidBodyState& state) override;
    void receive_baro(const BaroReading& reading) override;
    void receive_mag(const MagReading& reading) override;
    void receive_imu(const ImuReading& reading) override;
    void receive_gps(const GpsReading& reading) override;
    RotorCommand rotor_command() override;
    std::optional<Vec3> reference_position() const override;
    void shutdown() override;

    HilSession& session() { return session_; }

private:
    HilSession session_;
    double time_{0.0};
    std::optional<BaroReading> baro_;
    std::optional<MagReading> mag_;
    std::optional<ImuReading> imu_;
    std::optional<GpsReading> gps_;
    bool gps_fresh_{false};
};

} // namespace mrsim::mav
