/*
 * C interface to the multirotor flight-dynamics simulator.
 *
 * All functions that can fail return an mrsim_status; on failure a
 * human-readable message is available from mrsim_last_error() until the next
 * failing call on the same thread. Objects are opaque handles created and
 * destroyed through this interface; output pointers are written only on
 * MRSIM_OK.
 */

#ifndef MRSIM_H
#define MRSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define MRSIM_API __attribute__((visibility("default")))
#else
#define MRSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mrsim_status {
    MRSIM_OK = 0,
    MRSIM_ERR_INVALID_ARGUMENT = 1,
    MRSIM_ERR_PARSE = 2,
    MRSIM_ERR_CONFIG = 3,
    MRSIM_ERR_IO = 4,
    MRSIM_ERR_RUNTIME = 5
} mrsim_status;

typedef struct mrsim_scenario mrsim_scenario;
typedef struct mrsim_sim mrsim_sim;

/* Message of the calling thread's most recent failure ("" if none). The
 * pointer stays valid until the thread's next failing call. */
MRSIM_API const char* mrsim_last_error(void);

MRSIM_API const char* mrsim_version(void);

/* ------------------------------------------------------------------ */
/* Scenario                                                           */
/* ------------------------------------------------------------------ */

/* Parses and validates scenario JSON from a file or a string. */
MRSIM_API mrsim_status mrsim_scenario_load_file(const char* path, mrsim_scenario** out);
MRSIM_API mrsim_status mrsim_scenario_parse(const char* json_text, mrsim_scenario** out);
MRSIM_API void mrsim_scenario_free(mrsim_scenario* scenario);

/* Command-line style overrides, applied after parsing. */
MRSIM_API mrsim_status mrsim_scenario_set_duration(mrsim_scenario* scenario, double seconds);
MRSIM_API mrsim_status mrsim_scenario_set_seed(mrsim_scenario* scenario, uint64_t seed);
/* Empty string disables file output. */
MRSIM_API mrsim_status mrsim_scenario_set_out_dir(mrsim_scenario* scenario, const char* dir);
/* Redirects every MAVLink backend to "udp:HOST:PORT"; fails with
 * MRSIM_ERR_CONFIG when the scenario has no MAVLink backend. */
MRSIM_API mrsim_status mrsim_scenario_set_mavlink_endpoint(mrsim_scenario* scenario,
                                                           const char* endpoint);

MRSIM_API mrsim_status mrsim_scenario_duration(const mrsim_scenario* scenario, double* out);
MRSIM_API mrsim_status mrsim_scenario_vehicle_count(const mrsim_scenario* scenario,
                                                    size_t* out);
/* Borrowed pointer, valid until the scenario is freed. */
MRSIM_API mrsim_status mrsim_scenario_vehicle_name(const mrsim_scenario* scenario,
                                                   size_t index, const char** out);

/* ------------------------------------------------------------------ */
/* Simulation                                                         */
/* ------------------------------------------------------------------ */

typedef struct mrsim_sim_options {
    int parallel; /* nonzero: one worker thread per vehicle */
    int realtime; /* nonzero: pace physics to the wall clock */
} mrsim_sim_options;

/* Builds vehicles, opens telemetry files (unless the output directory is
 * empty), and primes control backends. The scenario is copied; options may
 * be NULL for defaults (parallel, not realtime). */
MRSIM_API mrsim_status mrsim_sim_create(const mrsim_scenario* scenario,
                                        const mrsim_sim_options* options, mrsim_sim** out);
MRSIM_API void mrsim_sim_free(mrsim_sim* sim);

/* One physics step for every vehicle. */
MRSIM_API mrsim_status mrsim_sim_step(mrsim_sim* sim);
/* All remaining steps plus finalization (backend shutdown, telemetry flush,
 * summary file). Backend failures abort with partial telemetry flushed. */
MRSIM_API mrsim_status mrsim_sim_run(mrsim_sim* sim);

MRSIM_API mrsim_status mrsim_sim_time(const mrsim_sim* sim, double* out);
MRSIM_API mrsim_status mrsim_sim_steps_done(const mrsim_sim* sim, uint64_t* out);
MRSIM_API mrsim_status mrsim_sim_total_steps(const mrsim_sim* sim, uint64_t* out);

/* Current state of one vehicle. Position/velocity are east-north-up meters,
 * the attitude quaternion is body-to-inertial (w,x,y,z), body rates rad/s.
 * Any output pointer may be NULL. */
MRSIM_API mrsim_status mrsim_sim_vehicle_state(const mrsim_sim* sim, const char* vehicle,
                                               double position[3], double velocity[3],
                                               double attitude_wxyz[4], double body_rates[3]);

/* Tracking-error statistics accumulated so far (0 when the vehicle's backend
 * publishes no reference). */
MRSIM_API mrsim_status mrsim_sim_tracking_error(const mrsim_sim* sim, const char* vehicle,
                                                double* max_error_m, double* rms_error_m);

/* Run summary as JSON; free the string with mrsim_string_free. */
MRSIM_API mrsim_status mrsim_sim_summary_json(const mrsim_sim* sim, char** out);
MRSIM_API void mrsim_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Telemetry post-processing                                          */
/* ------------------------------------------------------------------ */

/* Extracts the position-tracking-error series from a telemetry CSV and
 * writes it to out_path: ".svg" renders a line plot, anything else a
 * two-column CSV (t, tracking_error_m). */
MRSIM_API mrsim_status mrsim_plot_tracking_error(const char* telemetry_csv,
                                                 const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MRSIM_H */
