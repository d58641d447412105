#include "mrsim/sim.hpp"

#include <json.hpp>

#include <atomic>
#include <barrier>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include "mrsim/error.hpp"

namespace mrsim {

namespace {

/// Vehicle names become file names; keep only filesystem-friendly characters.
std::string sanitize_filename(const std::string& name) {
    std::string out;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_';
        out += ok ? c : '_';
    }
    return out;
}

std::chrono::steady_clock::duration to_clock_duration(double seconds) {
    return std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(seconds));
}

} // namespace

Simulator::Simulator(const Scenario& scenario, const SimOptions& options)
    : scenario_(scenario), options_(options) {
    scenario_.validate();

    const double steps_exact = scenario_.duration / scenario_.physics_dt;
    total_steps_ = static_cast<std::uint64_t>(std::llround(steps_exact));
    if (total_steps_ == 0) total_steps_ = 1;
    if (std::abs(static_cast<double>(total_steps_) - steps_exact) > 1e-6) {
        throw_config("scenario.duration_s: must be a whole number of physics steps");
    }

    const bool write_files = !scenario_.out_dir.empty();
    if (write_files) {
        std::error_code ec;
        std::filesystem::create_directories(scenario_.out_dir, ec);
        if (ec) {
            throw Error(ErrorCode::Io,
                        "cannot create output directory '" + scenario_.out_dir +
                            "': " + ec.message());
        }
    }

    for (std::size_t i = 0; i < scenario_.vehicles.size(); ++i) {
        const VehicleSpec& spec = scenario_.vehicles[i];
        auto vehicle = std::make_unique<Vehicle>(spec, scenario_.origin, scenario_.seed,
                                                 static_cast<int>(i));
        if (write_files) {
            const std::string path =
                (std::filesystem::path(scenario_.out_dir) /
                 (sanitize_filename(spec.name) + "_telemetry.csv"))
                    .string();
            vehicle->attach_writer(std::make_unique<TelemetryWriter>(
                path, spec.name, spec.params.rotor_count()));
        }
        manager_.add(std::move(vehicle));
    }

    for (auto& v : manager_.all()) v->prime();
}

void Simulator::step() {
    if (finished()) throw_runtime("simulation already finished");
    const double dt = scenario_.physics_dt;
    try {
        for (auto& v : manager_.all()) v->tick(dt);
    } catch (...) {
        flush_all();
        throw;
    }
    ++steps_done_;
}

void Simulator::run_serial() {
    const double dt = scenario_.physics_dt;
    const auto start = std::chrono::steady_clock::now();
    while (steps_done_ < total_steps_) {
        step();
        if (options_.realtime) {
            std::this_thread::sleep_until(
                start + to_clock_duration(static_cast<double>(steps_done_) * dt));
        }
    }
}

void Simulator::run_parallel() {
    const double dt = scenario_.physics_dt;
    const std::uint64_t remaining = total_steps_ - steps_done_;
    const std::size_t n = manager_.size();

    std::barrier sync(static_cast<std::ptrdiff_t>(n));
    std::atomic<bool> abort{false};
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::uint64_t> completed{0};
    const auto start = std::chrono::steady_clock::now();

    const auto worker = [&](std::size_t index) {
        Vehicle& vehicle = *manager_.all()[index];
        for (std::uint64_t k = 0; k < remaining; ++k) {
            if (!abort.load(std::memory_order_acquire)) {
                try {
                    vehicle.tick(dt);
                } catch (...) {
                    errors[index] = std::current_exception();
                    abort.store(true, std::memory_order_release);
                }
            }
            if (index == 0 && options_.realtime) {
                std::this_thread::sleep_until(
                    start + to_clock_duration(static_cast<double>(k + 1) * dt));
            }
            // Everyone arrives every iteration, even after an abort, so the
            // barrier never starves.
            sync.arrive_and_wait();
            if (abort.load(std::memory_order_acquire)) break;
            if (index == 0) completed.fetch_add(1, std::memory_order_relaxed);
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(n);
    for (std::size_t i = 0; i < n; ++i) threads.emplace_back(worker, i);
    for (auto& t : threads) t.join();

    steps_done_ += completed.load();

    for (const auto& error : errors) {
        if (error) {
            flush_all();
            std::rethrow_exception(error);
        }
    }
}

void Simulator::run() {
    const auto start = std::chrono::steady_clock::now();
    try {
        if (options_.parallel && manager_.size() > 1) {
            run_parallel();
        } else {
            run_serial();
        }
    } catch (...) {
        shutdown_all();
        throw;
    }
    wall_time_s_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    shutdown_all();
    if (!scenario_.out_dir.empty()) write_summary_file();
}

void Simulator::flush_all() {
    for (auto& v : manager_.all()) {
        if (v->writer() != nullptr) v->writer()->flush();
    }
}

void Simulator::shutdown_all() {
    if (shut_down_) return;
    shut_down_ = true;
    for (auto& v : manager_.all()) v->shutdown();
}

std::string Simulator::summary_json() const {
    nlohmann::json j;
    j["duration_s"] = scenario_.duration;
    j["physics_dt_s"] = scenario_.physics_dt;
    j["seed"] = scenario_.seed;
    j["steps"] = steps_done_;
    j["wall_time_s"] = wall_time_s_;

    nlohmann::json vehicles = nlohmann::json::array();
    for (const auto& v : manager_.all()) {
        nlohmann::json entry;
        entry["name"] = v->name();
        entry["steps"] = v->steps();
        entry["max_tracking_error_m"] = v->max_tracking_error();
        entry["rms_tracking_error_m"] = v->rms_tracking_error();
        entry["final_position"] = {v->state().position.x, v->state().position.y,
                                   v->state().position.z};
        entry["final_velocity"] = {v->state().velocity.x, v->state().velocity.y,
                                   v->state().velocity.z};
        if (const TelemetryWriter* writer = v->writer()) {
            entry["telemetry_file"] = writer->path();
            entry["telemetry_rows"] = writer->rows();
        }
        vehicles.push_back(entry);
    }
    j["vehicles"] = vehicles;
    return j.dump(2) + "\n";
}

void Simulator::write_summary_file() const {
    const std::string path =
        (std::filesystem::path(scenario_.out_dir) / "summary.json").string();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write summary: " + path);
    out << summary_json();
}

} // namespace mrsim
