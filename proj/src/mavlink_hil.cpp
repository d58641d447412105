#include "mrsim/mavlink/hil.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>

#include "mrsim/error.hpp"

namespace mrsim::mav {

// ---------------------------------------------------------------------------
// UDP transport
// ---------------------------------------------------------------------------

namespace {

sockaddr_in resolve_ipv4(const std::string& host, std::uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;

    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_DGRAM;
    addrinfo* result = nullptr;
    const int rc = getaddrinfo(host.c_str(), nullptr, &hints, &result);
    if (rc != 0 || result == nullptr) {
        throw Error(ErrorCode::Io, "cannot resolve host '" + host + "': " + gai_strerror(rc));
    }
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(result->ai_addr)->sin_addr;
    freeaddrinfo(result);
    return addr;
}

} // namespace

UdpSocket::UdpSocket(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) throw Error(ErrorCode::Io, std::string("socket: ") + std::strerror(errno));

    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        const std::string msg = std::string("bind udp port ") + std::to_string(port) + ": " +
                                std::strerror(errno);
        ::close(fd_);
        fd_ = -1;
        throw Error(ErrorCode::Io, msg);
    }

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len) == 0) {
        local_port_ = ntohs(bound.sin_port);
    }
}

UdpSocket::~UdpSocket() {
    if (fd_ >= 0) ::close(fd_);
}

void UdpSocket::send_to(const std::string& host, std::uint16_t port,
                        std::span<const std::uint8_t> bytes) {
    const sockaddr_in addr = resolve_ipv4(host, port);
    const ssize_t sent = ::sendto(fd_, bytes.data(), bytes.size(), 0,
                                  reinterpret_cast<const sockaddr*>(&addr), sizeof(addr));
    if (sent < 0) {
        throw Error(ErrorCode::Io, std::string("sendto ") + host + ":" + std::to_string(port) +
                                       ": " + std::strerror(errno));
    }
}

std::optional<std::vector<std::uint8_t>> UdpSocket::receive(int timeout_ms,
                                                            std::string* sender_host,
                                                            std::uint16_t* sender_port) {
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, std::max(0, timeout_ms));
    if (ready < 0) throw Error(ErrorCode::Io, std::string("poll: ") + std::strerror(errno));
    if (ready == 0 || (pfd.revents & POLLIN) == 0) return std::nullopt;

    std::vector<std::uint8_t> buf(4096);
    sockaddr_in from{};
    socklen_t from_len = sizeof(from);
    const ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0,
                                 reinterpret_cast<sockaddr*>(&from), &from_len);
    if (n < 0) throw Error(ErrorCode::Io, std::string("recvfrom: ") + std::strerror(errno));
    buf.resize(static_cast<std::size_t>(n));

    if (sender_host != nullptr) {
        char text[INET_ADDRSTRLEN] = {0};
        inet_ntop(AF_INET, &from.sin_addr, text, sizeof(text));
        *sender_host = text;
    }
    if (sender_port != nullptr) *sender_port = ntohs(from.sin_port);
    return buf;
}

// ---------------------------------------------------------------------------
// HIL session
// ---------------------------------------------------------------------------

HilSession::HilSession(const HilConfig& config, const MultirotorParams& params)
    : config_(config),
      params_(params),
      socket_(config.local_port),
      state_(HilState::WaitingHandshake),
      last_command_(RotorCommand::zero(params.rotor_count())) {
    if (config_.actuator_timeout_s <= 0.0) {
        throw_config("hil: actuator timeout must be positive");
    }
    if (config_.heartbeat_period_s <= 0.0) {
        throw_config("hil: heartbeat period must be positive");
    }
}

void HilSession::send_message(const HilMessage& msg) {
    if (config_.remote_port == 0) return;   // no peer yet
    const std::vector<std::uint8_t> frame =
        encode_frame(msg, tx_seq_++, config_.sysid, config_.compid);
    socket_.send_to(config_.remote_host, config_.remote_port, frame);
}

void HilSession::handle_frame(const Decoded& decoded) {
    if (state_ == HilState::WaitingHandshake) state_ = HilState::Running;

    const auto* actuators = std::get_if<HilActuatorControls>(&decoded.message);
    if (actuators == nullptr) return;   // heartbeats and echoes are ignored

    if (last_actuator_seq_ && *last_actuator_seq_ == decoded.frame.seq) {
        ++stats_.duplicates_dropped;
        return;
    }
    last_actuator_seq_ = decoded.frame.seq;

    const int n = params_.rotor_count();
    RotorCommand cmd = RotorCommand::zero(n);
    for (int i = 0; i < n; ++i) {
        double c = actuators->controls[static_cast<std::size_t>(i)];
        if (!std::isfinite(c)) c = 0.0;
        cmd.speeds[static_cast<std::size_t>(i)] =
            std::clamp(c, 0.0, 1.0) * params_.max_rotor_speed;
    }
    last_command_ = cmd;
    ++stats_.actuator_messages_accepted;
    actuator_pending_ = true;
}

// Receives at most one datagram (waiting up to timeout_ms) and feeds every
// frame in it to handle_frame. Returns whether a datagram arrived.
bool HilSession::pump(int timeout_ms) {
    std::string sender_host;
    std::uint16_t sender_port = 0;
    const auto datagram = socket_.receive(timeout_ms, &sender_host, &sender_port);
    if (!datagram) return false;

    std::span<const std::uint8_t> bytes{*datagram};
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        Decoded decoded;
        std::size_t consumed = 0;
        const DecodeStatus status = decode_frame(bytes.subspan(pos), decoded, consumed);
        if (status == DecodeStatus::Ok) {
            if (config_.remote_port == 0) {
                config_.remote_host = sender_host;
                config_.remote_port = sender_port;
            }
            handle_frame(decoded);
            pos += consumed;
            continue;
        }
        ++stats_.decode_errors;
        // Resync on the next start byte, if any.
        const auto next = std::find(bytes.begin() + static_cast<long>(pos) + 1, bytes.end(),
                                    kMagicV2);
        if (next == bytes.end()) break;
        pos = static_cast<std::size_t>(next - bytes.begin());
    }
    return true;
}

RotorCommand HilSession::exchange(const SensorBatch& batch, double sim_time) {
    using clock = std::chrono::steady_clock;

    if (state_ == HilState::Closed) {
        throw_runtime("hil: exchange on a closed session");
    }

    const auto timeout =
        std::chrono::duration_cast<clock::duration>(
            std::chrono::duration<double>(config_.actuator_timeout_s));

    // Without a configured peer, wait for the autopilot to talk first and
    // adopt its address.
    if (config_.remote_port == 0) {
        const auto deadline = clock::now() + timeout;
        while (config_.remote_port == 0) {
            const auto now = clock::now();
            if (now >= deadline) {
                throw_runtime("hil: no autopilot handshake within " +
                              std::to_string(config_.actuator_timeout_s) + " s");
            }
            const int ms = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
            pump(std::max(1, ms));
        }
    }

    if (sim_time + 1e-12 >= next_heartbeat_time_) {
        Heartbeat hb;
        hb.base_mode = 0;
        send_message(hb);
        ++stats_.heartbeats_sent;
        next_heartbeat_time_ += config_.heartbeat_period_s;
    }

    send_message(build_hil_sensor(batch.baro, batch.imu, batch.mag));
    ++stats_.sensor_batches_sent;
    if (batch.gps) {
        send_message(build_hil_gps(*batch.gps));
        ++stats_.gps_messages_sent;
    }

    if (config_.lockstep) {
        actuator_pending_ = false;
        const auto deadline = clock::now() + timeout;
        while (!actuator_pending_) {
            const auto now = clock::now();
            if (now >= deadline) {
                throw_runtime("hil: no actuator message within " +
                              std::to_string(config_.actuator_timeout_s) + " s");
            }
            const int ms = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
            pump(std::max(1, ms));
        }
    } else {
        // Drain whatever arrived; the newest actuator message wins.
        while (pump(0)) {}
    }
    return last_command_;
}

void HilSession::close() {
    state_ = HilState::Closed;
}

// ---------------------------------------------------------------------------
// Backend adapter
// ---------------------------------------------------------------------------

MavlinkBackend::MavlinkBackend(const HilConfig& config, const MultirotorParams& params)
    : session_(config, params) {}

void MavlinkBackend::receive_state(const RigidBodyState& state) { time_ = state.time; }

void MavlinkBackend::receive_baro(const BaroReading& reading) { baro_ = reading; }

void MavlinkBackend::receive_mag(const MagReading& reading) { mag_ = reading; }

void MavlinkBackend::receive_imu(const ImuReading& reading) { imu_ = reading; }

void MavlinkBackend::receive_gps(const GpsReading& reading) {
    gps_ = reading;
    gps_fresh_ = true;
}

RotorCommand MavlinkBackend::rotor_command() {
    if (!baro_ || !mag_ || !imu_) {
        throw_runtime("hil backend: no sensor readings yet (suite not primed)");
    }
    SensorBatch batch{*baro_, *mag_, *imu_, std::nullopt};
    if (gps_fresh_ && gps_) {
        batch.gps = *gps_;
        gps_fresh_ = false;
    }
    return session_.exchange(batch, time_);
}

std::optional<Vec3> MavlinkBackend::reference_position() const { return std::nullopt; }

void MavlinkBackend::shutdown() { session_.close(); }

} // namespace mrsim::mav
