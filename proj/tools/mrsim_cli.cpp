// Command-line front end. Talks to the simulator exclusively through the C
// interface in mrsim.h, the same surface other language bindings would use.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>

#include "mrsim.h"

namespace {

// Exit codes: 0 success, 1 invalid configuration (parse/validation), 2
// runtime or I/O failure.
int exit_code_for(mrsim_status status) {
    switch (status) {
        case MRSIM_OK: return 0;
        case MRSIM_ERR_INVALID_ARGUMENT:
        case MRSIM_ERR_PARSE:
        case MRSIM_ERR_CONFIG: return 1;
        case MRSIM_ERR_IO:
        case MRSIM_ERR_RUNTIME: return 2;
    }
    return 2;
}

int report(mrsim_status status) {
    std::fprintf(stderr, "error: %s\n", mrsim_last_error());
    return exit_code_for(status);
}

struct ScenarioHandle {
    mrsim_scenario* ptr{nullptr};
    ~ScenarioHandle() { mrsim_scenario_free(ptr); }
};

struct SimHandle {
    mrsim_sim* ptr{nullptr};
    ~SimHandle() { mrsim_sim_free(ptr); }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mrsim: deterministic multirotor flight-dynamics simulator"};
    app.require_subcommand(1);

    // --- run ---
    std::string run_scenario;
    double run_duration = 0.0;
    std::uint64_t run_seed = 0;
    std::string run_out;
    std::string run_mavlink;
    bool run_serial = false;
    bool run_realtime = false;
    CLI::App* run = app.add_subcommand("run", "Run a scenario and write telemetry");
    run->add_option("--scenario", run_scenario, "Scenario JSON file")->required();
    CLI::Option* duration_opt =
        run->add_option("--duration", run_duration, "Override duration [s]");
    CLI::Option* seed_opt = run->add_option("--seed", run_seed, "Override random seed");
    CLI::Option* out_opt =
        run->add_option("--out", run_out, "Output directory (empty disables files)");
    CLI::Option* mavlink_opt = run->add_option(
        "--mavlink", run_mavlink, "Redirect MAVLink backends to udp:HOST:PORT");
    run->add_flag("--serial", run_serial, "Step vehicles on one thread");
    run->add_flag("--realtime", run_realtime, "Pace physics to the wall clock");

    // --- validate ---
    std::string validate_scenario;
    CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("--scenario", validate_scenario, "Scenario JSON file")->required();

    // --- plot ---
    std::string plot_telemetry;
    std::string plot_out;
    CLI::App* plot =
        app.add_subcommand("plot", "Extract the tracking-error series from telemetry");
    plot->add_option("--telemetry", plot_telemetry, "Telemetry CSV from a run")->required();
    plot->add_option("--out", plot_out, "Output file (.svg plots, otherwise CSV)")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        ScenarioHandle scenario;
        mrsim_status status = mrsim_scenario_load_file(run_scenario.c_str(), &scenario.ptr);
        if (status != MRSIM_OK) return report(status);

        if (duration_opt->count() > 0) {
            status = mrsim_scenario_set_duration(scenario.ptr, run_duration);
            if (status != MRSIM_OK) return report(status);
        }
        if (seed_opt->count() > 0) {
            status = mrsim_scenario_set_seed(scenario.ptr, run_seed);
            if (status != MRSIM_OK) return report(status);
        }
        if (out_opt->count() > 0) {
            status = mrsim_scenario_set_out_dir(scenario.ptr, run_out.c_str());
            if (status != MRSIM_OK) return report(status);
        }
        if (mavlink_opt->count() > 0) {
            status = mrsim_scenario_set_mavlink_endpoint(scenario.ptr, run_mavlink.c_str());
            if (status != MRSIM_OK) return report(status);
        }

        mrsim_sim_options options{run_serial ? 0 : 1, run_realtime ? 1 : 0};
        SimHandle sim;
        status = mrsim_sim_create(scenario.ptr, &options, &sim.ptr);
        if (status != MRSIM_OK) return report(status);

        status = mrsim_sim_run(sim.ptr);
        if (status != MRSIM_OK) return report(status);

        char* summary = nullptr;
        status = mrsim_sim_summary_json(sim.ptr, &summary);
        if (status != MRSIM_OK) return report(status);
        std::fputs(summary, stdout);
        mrsim_string_free(summary);
        return 0;
    }

    if (validate->parsed()) {
        ScenarioHandle scenario;
        const mrsim_status status =
            mrsim_scenario_load_file(validate_scenario.c_str(), &scenario.ptr);
        if (status != MRSIM_OK) return report(status);

        size_t vehicles = 0;
        double duration = 0.0;
        mrsim_scenario_vehicle_count(scenario.ptr, &vehicles);
        mrsim_scenario_duration(scenario.ptr, &duration);
        std::printf("ok: %zu vehicle(s), %g s\n", vehicles, duration);
        return 0;
    }

    // plot
    const mrsim_status status =
        mrsim_plot_tracking_error(plot_telemetry.c_str(), plot_out.c_str());
    if (status != MRSIM_OK) return report(status);
    return 0;
}
