#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "checks.hpp"
#include "mrsim/error.hpp"
#include "mrsim/sim.hpp"

using namespace mrsim;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "mrsim_sim_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Hover vehicle that starts on its setpoint, so a quiet run tracks tightly.
VehicleSpec hover_vehicle(const std::string& name) {
    VehicleSpec v;
    v.name = name;
    v.initial.on_trajectory = true;
    return v;
}

Scenario two_vehicle_scenario(const std::string& out_dir) {
    Scenario s;
    s.duration = 2.0;
    s.physics_dt = 0.004;
    s.seed = 11;
    s.out_dir = out_dir;
    s.vehicles.push_back(hover_vehicle("one"));

    VehicleSpec second = hover_vehicle("two");
    GeometricBackendConfig geo;
    RelayTrajectoryConfig relay;
    relay.time_offset = -1.0;
    geo.trajectory = relay;
    second.backend = geo;
    s.vehicles.push_back(second);
    return s;
}

} // namespace

TEST_SUITE("sim") {

TEST_CASE("ten second run at defaults produces the expected step and sample counts") {
    Scenario s;   // duration 10 s, dt 1/250, one stock quad hovering
    s.vehicles.push_back(hover_vehicle("alpha"));
    s.vehicles[0].sensors.noise.enabled = false;
    s.out_dir = temp_dir("counts").string();

    Simulator sim(s);
    CHECK(sim.total_steps() == 2500);
    CHECK_FALSE(sim.finished());

    sim.run();
    CHECK(sim.finished());
    CHECK(sim.steps_done() == 2500);
    CHECK(sim.time() == 10.0);

    const Vehicle& v = sim.vehicles().get("alpha");
    CHECK(v.steps() == 2500);
    CHECK(v.sensors().count(SensorKind::Baro) == 2500);
    CHECK(v.sensors().count(SensorKind::Mag) == 2500);
    CHECK(v.sensors().count(SensorKind::Imu) == 2500);
    CHECK(v.sensors().count(SensorKind::Gps) == 10);

    // Started in hover equilibrium with ideal sensors: the vehicle stays put.
    CHECK(v.max_tracking_error() < 1e-6);
    check_vec3(v.state().position, {0.0, 0.0, 1.0}, 1e-6);

    REQUIRE(v.writer() != nullptr);
    CHECK(v.writer()->rows() == 2500);
    const auto lines = slurp(v.writer()->path());
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 2501);   // header + rows
}

TEST_CASE("serial and parallel stepping produce byte-identical telemetry") {
    const fs::path serial_dir = temp_dir("serial");
    const fs::path parallel_dir = temp_dir("parallel");

    Scenario serial_s = two_vehicle_scenario(serial_dir.string());
    Scenario parallel_s = two_vehicle_scenario(parallel_dir.string());

    SimOptions serial_opts;
    serial_opts.parallel = false;
    Simulator serial_sim(serial_s, serial_opts);
    serial_sim.run();

    SimOptions parallel_opts;
    parallel_opts.parallel = true;
    Simulator parallel_sim(parallel_s, parallel_opts);
    parallel_sim.run();

    for (const char* file : {"one_telemetry.csv", "two_telemetry.csv"}) {
        const std::string a = slurp(serial_dir / file);
        const std::string b = slurp(parallel_dir / file);
        CHECK(a == b);
        CHECK(a.size() > 1000);   // a real run, not two empty files
    }
}

TEST_CASE("same seed reproduces telemetry exactly and a new seed changes it") {
    const fs::path dir_a = temp_dir("seed_a");
    const fs::path dir_b = temp_dir("seed_b");
    const fs::path dir_c = temp_dir("seed_c");

    Scenario a = two_vehicle_scenario(dir_a.string());
    Scenario b = two_vehicle_scenario(dir_b.string());
    Scenario c = two_vehicle_scenario(dir_c.string());
    c.seed = 12;

    Simulator(a).run();
    Simulator(b).run();
    Simulator(c).run();

    CHECK(slurp(dir_a / "one_telemetry.csv") == slurp(dir_b / "one_telemetry.csv"));
    CHECK(slurp(dir_a / "two_telemetry.csv") == slurp(dir_b / "two_telemetry.csv"));
    CHECK(slurp(dir_a / "one_telemetry.csv") != slurp(dir_c / "one_telemetry.csv"));
}

TEST_CASE("vehicle manager guards names") {
    VehicleManager manager;
    VehicleSpec spec = hover_vehicle("alpha");
    manager.add(std::make_unique<Vehicle>(spec, GeoOrigin{}, 0, 0));

    CHECK(manager.size() == 1);
    CHECK(manager.contains("alpha"));
    CHECK_FALSE(manager.contains("beta"));
    CHECK(manager.get("alpha").name() == "alpha");

    try {
        manager.add(std::make_unique<Vehicle>(spec, GeoOrigin{}, 0, 1));
        FAIL_CHECK("added a duplicate vehicle name");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        CHECK(std::string(e.what()).find("duplicate vehicle name 'alpha'") !=
              std::string::npos);
    }

    try {
        manager.get("beta");
        FAIL_CHECK("found a vehicle that was never added");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
        CHECK(std::string(e.what()).find("unknown vehicle 'beta'") != std::string::npos);
    }

    VehicleSpec other = hover_vehicle("beta");
    manager.add(std::make_unique<Vehicle>(other, GeoOrigin{}, 0, 1));
    CHECK(manager.names() == std::vector<std::string>{"alpha", "beta"});

    manager.remove("alpha");
    CHECK(manager.size() == 1);
    CHECK_FALSE(manager.contains("alpha"));
    CHECK_THROWS_AS(manager.remove("alpha"), Error);
}

TEST_CASE("stepping past the end is an error") {
    Scenario s;
    s.duration = 0.008;
    s.physics_dt = 0.004;
    s.out_dir.clear();   // no files for this micro-run
    s.vehicles.push_back(hover_vehicle("alpha"));

    Simulator sim(s);
    CHECK(sim.total_steps() == 2);
    sim.step();
    CHECK(sim.steps_done() == 1);
    CHECK(sim.time() == 0.004);
    sim.step();
    CHECK(sim.finished());

    try {
        sim.step();
        FAIL_CHECK("stepped after the run finished");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Runtime);
        CHECK(std::string(e.what()).find("simulation already finished") != std::string::npos);
    }

    CHECK(sim.vehicles().get("alpha").writer() == nullptr);
}

TEST_CASE("duration must be a whole number of physics steps") {
    Scenario s;
    s.duration = 0.005;
    s.physics_dt = 0.004;
    s.vehicles.push_back(hover_vehicle("alpha"));
    try {
        Simulator sim(s);
        FAIL_CHECK("accepted a fractional step count");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        CHECK(std::string(e.what()).find(
                  "scenario.duration_s: must be a whole number of physics steps") !=
              std::string::npos);
    }
}

TEST_CASE("telemetry decimation records every n-th step") {
    Scenario s;
    s.duration = 1.0;
    s.physics_dt = 0.004;
    s.out_dir = temp_dir("decimation").string();
    s.vehicles.push_back(hover_vehicle("alpha"));
    s.vehicles[0].telemetry_decimation = 10;

    Simulator sim(s);
    sim.run();

    const Vehicle& v = sim.vehicles().get("alpha");
    CHECK(v.steps() == 250);
    REQUIRE(v.writer() != nullptr);
    CHECK(v.writer()->rows() == 25);

    // First recorded row is step 10, i.e. t = 10 * dt.
    std::ifstream in(v.writer()->path());
    std::string header, first;
    REQUIRE(std::getline(in, header));
    REQUIRE(std::getline(in, first));
    REQUIRE(first.rfind("alpha,", 0) == 0);
    const std::string t_cell = first.substr(6, first.find(',', 6) - 6);
    check_close(std::stod(t_cell), 0.04, 1e-12);
}

TEST_CASE("an unreachable autopilot aborts the run with telemetry flushed") {
    const fs::path dir = temp_dir("abort");

    Scenario s = two_vehicle_scenario(dir.string());
    MavlinkBackendConfig mav;
    mav.remote_port = 14999;        // nobody listens here
    mav.actuator_timeout_s = 0.2;
    s.vehicles[1].backend = mav;
    s.vehicles[1].initial.on_trajectory = false;

    Simulator sim(s);
    try {
        sim.run();
        FAIL_CHECK("run finished with no autopilot attached");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Runtime);
        CHECK(std::string(e.what()).find("no actuator message within") != std::string::npos);
    }

    // Both telemetry files exist and are flushed through the last full step.
    for (const char* file : {"one_telemetry.csv", "two_telemetry.csv"}) {
        const std::string text = slurp(dir / file);
        CHECK(text.find("vehicle,t,") == 0);
    }
    // The failed run writes no summary.
    CHECK_FALSE(fs::exists(dir / "summary.json"));
}

TEST_CASE("summary reports the run and matches the written file") {
    const fs::path dir = temp_dir("summary");
    Scenario s = two_vehicle_scenario(dir.string());

    Simulator sim(s);
    sim.run();
    CHECK(sim.wall_time_s() > 0.0);

    const std::string text = sim.summary_json();
    CHECK(slurp(dir / "summary.json") == text);

    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["duration_s"] == 2.0);
    CHECK(j["physics_dt_s"] == 0.004);
    CHECK(j["seed"] == 11);
    CHECK(j["steps"] == 500);
    CHECK(j["wall_time_s"].get<double>() > 0.0);

    REQUIRE(j["vehicles"].size() == 2);
    const nlohmann::json& one = j["vehicles"][0];
    CHECK(one["name"] == "one");
    CHECK(one["steps"] == 500);
    CHECK(one["max_tracking_error_m"].get<double>() >= 0.0);
    CHECK(one["rms_tracking_error_m"].get<double>() >= 0.0);
    CHECK(one["final_position"].size() == 3);
    CHECK(one["telemetry_rows"] == 500);
    CHECK(one["telemetry_file"].get<std::string>().find("one_telemetry.csv") !=
          std::string::npos);

    // The relay vehicle actually moved, and its tracking error stayed sane.
    const nlohmann::json& two = j["vehicles"][1];
    CHECK(two["max_tracking_error_m"].get<double>() > 0.0);
    CHECK(two["max_tracking_error_m"].get<double>() < 0.5);
}

TEST_CASE("empty out_dir disables file output") {
    Scenario s;
    s.duration = 0.1;
    s.physics_dt = 0.004;
    s.out_dir.clear();
    s.vehicles.push_back(hover_vehicle("alpha"));

    Simulator sim(s);
    sim.run();
    CHECK(sim.vehicles().get("alpha").writer() == nullptr);
    CHECK(sim.steps_done() == 25);
}

} // TEST_SUITE("sim")
