#include "mrsim.h"

#include <cstring>
#include <string>
#include <variant>

#include "mrsim/error.hpp"
#include "mrsim/scenario.hpp"
#include "mrsim/sim.hpp"
#include "mrsim/telemetry.hpp"

// Opaque handle definitions. The C structs simply wrap the C++ objects.
struct mrsim_scenario {
    mrsim::Scenario scenario;
};

struct mrsim_sim {
    mrsim::Simulator simulator;
};

namespace {

thread_local std::string g_last_error;

mrsim_status status_from(mrsim::ErrorCode code) {
    switch (code) {
        case mrsim::ErrorCode::InvalidArgument: return MRSIM_ERR_INVALID_ARGUMENT;
        case mrsim::ErrorCode::Parse: return MRSIM_ERR_PARSE;
        case mrsim::ErrorCode::Config: return MRSIM_ERR_CONFIG;
        case mrsim::ErrorCode::Io: return MRSIM_ERR_IO;
        case mrsim::ErrorCode::Runtime: return MRSIM_ERR_RUNTIME;
    }
    return MRSIM_ERR_RUNTIME;
}

mrsim_status fail(mrsim_status status, const char* what) {
    g_last_error = what;
    return status;
}

/// Runs fn, translating exceptions into status codes + last-error text.
template <typename Fn>
mrsim_status guarded(Fn&& fn) {
    try {
        fn();
        return MRSIM_OK;
    } catch (const mrsim::Error& e) {
        return fail(status_from(e.code()), e.what());
    } catch (const std::exception& e) {
        return fail(MRSIM_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(MRSIM_ERR_RUNTIME, "unknown error");
    }
}

mrsim_status require_arg(bool ok, const char* what) {
    return ok ? MRSIM_OK : fail(MRSIM_ERR_INVALID_ARGUMENT, what);
}

void copy_vec(double out[3], const mrsim::Vec3& v) {
    out[0] = v.x;
    out[1] = v.y;
    out[2] = v.z;
}

} // namespace

extern "C" {

const char* mrsim_last_error(void) { return g_last_error.c_str(); }

const char* mrsim_version(void) { return "1.0.0"; }

// ------------------------------------------------------------------
// Scenario
// ------------------------------------------------------------------

mrsim_status mrsim_scenario_load_file(const char* path, mrsim_scenario** out) {
    if (auto rc = require_arg(path != nullptr && out != nullptr,
                              "mrsim_scenario_load_file: null argument"))
        return rc;
    return guarded([&] { *out = new mrsim_scenario{mrsim::load_scenario_file(path)}; });
}

mrsim_status mrsim_scenario_parse(const char* json_text, mrsim_scenario** out) {
    if (auto rc = require_arg(json_text != nullptr && out != nullptr,
                              "mrsim_scenario_parse: null argument"))
        return rc;
    return guarded([&] { *out = new mrsim_scenario{mrsim::parse_scenario(json_text)}; });
}

void mrsim_scenario_free(mrsim_scenario* scenario) { delete scenario; }

mrsim_status mrsim_scenario_set_duration(mrsim_scenario* scenario, double seconds) {
    if (auto rc = require_arg(scenario != nullptr, "mrsim_scenario_set_duration: null scenario"))
        return rc;
    return guarded([&] {
        mrsim::Scenario updated = scenario->scenario;
        updated.duration = seconds;
        updated.validate();
        scenario->scenario = updated;
    });
}

mrsim_status mrsim_scenario_set_seed(mrsim_scenario* scenario, uint64_t seed) {
    if (auto rc = require_arg(scenario != nullptr, "mrsim_scenario_set_seed: null scenario"))
        return rc;
    scenario->scenario.seed = seed;
    return MRSIM_OK;
}

mrsim_status mrsim_scenario_set_out_dir(mrsim_scenario* scenario, const char* dir) {
    if (auto rc = require_arg(scenario != nullptr && dir != nullptr,
                              "mrsim_scenario_set_out_dir: null argument"))
        return rc;
    scenario->scenario.out_dir = dir;
    return MRSIM_OK;
}

mrsim_status mrsim_scenario_set_mavlink_endpoint(mrsim_scenario* scenario,
                                                 const char* endpoint) {
    if (auto rc = require_arg(scenario != nullptr && endpoint != nullptr,
                              "mrsim_scenario_set_mavlink_endpoint: null argument"))
        return rc;
    return guarded([&] {
        std::string host;
        std::uint16_t port = 0;
        mrsim::parse_udp_endpoint(endpoint, host, port);
        bool any = false;
        for (auto& vehicle : scenario->scenario.vehicles) {
            if (auto* mav = std::get_if<mrsim::MavlinkBackendConfig>(&vehicle.backend)) {
                mav->remote_host = host;
                mav->remote_port = port;
                any = true;
            }
        }
        if (!any) mrsim::throw_config("scenario has no MAVLink backend to redirect");
    });
}

mrsim_status mrsim_scenario_duration(const mrsim_scenario* scenario, double* out) {
    if (auto rc = require_arg(scenario != nullptr && out != nullptr,
                              "mrsim_scenario_duration: null argument"))
        return rc;
    *out = scenario->scenario.duration;
    return MRSIM_OK;
}

mrsim_status mrsim_scenario_vehicle_count(const mrsim_scenario* scenario, size_t* out) {
    if (auto rc = require_arg(scenario != nullptr && out != nullptr,
                              "mrsim_scenario_vehicle_count: null argument"))
        return rc;
    *out = scenario->scenario.vehicles.size();
    return MRSIM_OK;
}

mrsim_status mrsim_scenario_vehicle_name(const mrsim_scenario* scenario, size_t index,
                                         const char** out) {
    if (auto rc = require_arg(scenario != nullptr && out != nullptr,
                              "mrsim_scenario_vehicle_name: null argument"))
        return rc;
    if (index >= scenario->scenario.vehicles.size()) {
        return fail(MRSIM_ERR_INVALID_ARGUMENT, "vehicle index out of range");
    }
    *out = scenario->scenario.vehicles[index].name.c_str();
    return MRSIM_OK;
}

// ------------------------------------------------------------------
// Simulation
// ------------------------------------------------------------------

mrsim_status mrsim_sim_create(const mrsim_scenario* scenario, const mrsim_sim_options* options,
                              mrsim_sim** out) {
    if (auto rc = require_arg(scenario != nullptr && out != nullptr,
                              "mrsim_sim_create: null argument"))
        return rc;
    return guarded([&] {
        mrsim::SimOptions opts;
        if (options != nullptr) {
            opts.parallel = options->parallel != 0;
            opts.realtime = options->realtime != 0;
        }
        *out = new mrsim_sim{mrsim::Simulator(scenario->scenario, opts)};
    });
}

void mrsim_sim_free(mrsim_sim* sim) { delete sim; }

mrsim_status mrsim_sim_step(mrsim_sim* sim) {
    if (auto rc = require_arg(sim != nullptr, "mrsim_sim_step: null sim")) return rc;
    return guarded([&] { sim->simulator.step(); });
}

mrsim_status mrsim_sim_run(mrsim_sim* sim) {
    if (auto rc = require_arg(sim != nullptr, "mrsim_sim_run: null sim")) return rc;
    return guarded([&] { sim->simulator.run(); });
}

mrsim_status mrsim_sim_time(const mrsim_sim* sim, double* out) {
    if (auto rc = require_arg(sim != nullptr && out != nullptr, "mrsim_sim_time: null argument"))
        return rc;
    *out = sim->simulator.time();
    return MRSIM_OK;
}

mrsim_status mrsim_sim_steps_done(const mrsim_sim* sim, uint64_t* out) {
    if (auto rc = require_arg(sim != nullptr && out != nullptr,
                              "mrsim_sim_steps_done: null argument"))
        return rc;
    *out = sim->simulator.steps_done();
    return MRSIM_OK;
}

mrsim_status mrsim_sim_total_steps(const mrsim_sim* sim, uint64_t* out) {
    if (auto rc = require_arg(sim != nullptr && out != nullptr,
                              "mrsim_sim_total_steps: null argument"))
        return rc;
    *out = sim->simulator.total_steps();
    return MRSIM_OK;
}

mrsim_status mrsim_sim_vehicle_state(const mrsim_sim* sim, const char* vehicle,
                                     double position[3], double velocity[3],
                                     double attitude_wxyz[4], double body_rates[3]) {
    if (auto rc = require_arg(sim != nullptr && vehicle != nullptr,
                              "mrsim_sim_vehicle_state: null argument"))
        return rc;
    return guarded([&] {
        const mrsim::RigidBodyState& state = sim->simulator.vehicles().get(vehicle).state();
        if (position != nullptr) copy_vec(position, state.position);
        if (velocity != nullptr) copy_vec(velocity, state.velocity);
        if (attitude_wxyz != nullptr) {
            attitude_wxyz[0] = state.attitude.w;
            attitude_wxyz[1] = state.attitude.x;
            attitude_wxyz[2] = state.attitude.y;
            attitude_wxyz[3] = state.attitude.z;
        }
        if (body_rates != nullptr) copy_vec(body_rates, state.angular_velocity);
    });
}

mrsim_status mrsim_sim_tracking_error(const mrsim_sim* sim, const char* vehicle,
                                      double* max_error_m, double* rms_error_m) {
    if (auto rc = require_arg(sim != nullptr && vehicle != nullptr,
                              "mrsim_sim_tracking_error: null argument"))
        return rc;
    return guarded([&] {
        const mrsim::Vehicle& v = sim->simulator.vehicles().get(vehicle);
        if (max_error_m != nullptr) *max_error_m = v.max_tracking_error();
        if (rms_error_m != nullptr) *rms_error_m = v.rms_tracking_error();
    });
}

mrsim_status mrsim_sim_summary_json(const mrsim_sim* sim, char** out) {
    if (auto rc = require_arg(sim != nullptr && out != nullptr,
                              "mrsim_sim_summary_json: null argument"))
        return rc;
    return guarded([&] {
        const std::string json = sim->simulator.summary_json();
        char* copy = new char[json.size() + 1];
        std::memcpy(copy, json.c_str(), json.size() + 1);
        *out = copy;
    });
}

void mrsim_string_free(char* s) { delete[] s; }

// ------------------------------------------------------------------
// Telemetry post-processing
// ------------------------------------------------------------------

mrsim_status mrsim_plot_tracking_error(const char* telemetry_csv, const char* out_path) {
    if (auto rc = require_arg(telemetry_csv != nullptr && out_path != nullptr,
                              "mrsim_plot_tracking_error: null argument"))
        return rc;
    return guarded([&] {
        const mrsim::TrackingErrorSeries series =
            mrsim::read_tracking_error_series(telemetry_csv);
        const std::string path = out_path;
        const bool svg = path.size() >= 4 && path.compare(path.size() - 4, 4, ".svg") == 0;
        if (svg) {
            mrsim::write_tracking_error_svg(series, path);
        } else {
            mrsim::write_tracking_error_csv(series, path);
        }
    });
}

} // extern "C"
