#pragma once

#include <cstdint>
#include <string>

#include "mrsim/scenario.hpp"
#include "mrsim/vehicle.hpp"

namespace mrsim {

struct SimOptions {
    bool parallel{true};    // one worker thread per vehicle, barrier per tick
    bool realtime{false};   // pace ticks to the wall clock
};

/// Owns the vehicles of one scenario and drives them through fixed physics
/// steps. Each vehicle's randomness, backend, and telemetry file are its own,
/// so serial and parallel stepping produce identical results.
class Simulator {
public:
    /// Validates the scenario, builds every vehicle (opening telemetry files
    /// under scenario.out_dir unless it is empty), and primes the backends.
    explicit Simulator(const Scenario& scenario, const SimOptions& options = {});

    const Scenario& scenario() const { return scenario_; }
    VehicleManager& vehicles() { return manager_; }
    const VehicleManager& vehicles() const { return manager_; }

    std::uint64_t total_steps() const { return total_steps_; }
    std::uint64_t steps_done() const { return steps_done_; }
    double time() const { return static_cast<double>(steps_done_) * scenario_.physics_dt; }
    bool finished() const { return steps_done_ >= total_steps_; }

    /// Advances every vehicle by one physics step (serially). Throws
    /// Error(Runtime) when called after the run is complete; backend
    /// failures propagate after telemetry is flushed.
    void step();

    /// Runs all remaining steps (parallel workers when configured and more
    /// than one vehicle), then finalizes: backends shut down, telemetry
    /// flushed, summary written. A backend failure aborts the run with
    /// partial telemetry flushed.
    void run();

    /// Run statistics as a JSON document (scenario echo, step counts, per-
    /// vehicle tracking errors and telemetry paths).
    std::string summary_json() const;

    double wall_time_s() const { return wall_time_s_; }

private:
    void flush_all();
    void shutdown_all();
    void run_serial();
    void run_parallel();
    void write_summary_file() const;

    Scenario scenario_;
    SimOptions options_;
    VehicleManager manager_;
    std::uint64_t total_steps_{0};
    std::uint64_t steps_done_{0};
    double wall_time_s_{0.0};
    bool shut_down_{false};
};

} // namespace mrsim
