#include <doctest.h>

#include <cmath>

#include "checks.hpp"
#include "mrsim/error.hpp"
#include "mrsim/trajectory.hpp"

using namespace mrsim;

TEST_SUITE("trajectory") {

TEST_CASE("hover holds a constant setpoint with zero derivatives") {
    const HoverTrajectory hover({1.0, -2.0, 3.0}, 0.7);
    for (double t : {0.0, 1.5, 100.0}) {
        const FlatReference r = hover.at(t);
        check_vec3(r.position, {1.0, -2.0, 3.0}, 0.0);
        check_vec3(r.velocity, {0, 0, 0}, 0.0);
        check_vec3(r.acceleration, {0, 0, 0}, 0.0);
        check_vec3(r.jerk, {0, 0, 0}, 0.0);
        CHECK(r.yaw == 0.7);
        CHECK(r.yaw_rate == 0.0);
    }
}

TEST_CASE("relay path hits the frozen peak values") {
    const RelayTrajectory traj(0.6);
    // Frozen in tests/tools/oracle_values.md: peak of the pulse at t = 0 is
    // 1/s, the z excursion rides 1 m above it.
    const FlatReference r0 = traj.at(0.0);
    check_vec3(r0.position, {0.0, 1.6666666666666667, 2.666666666666667}, 1e-15);
    check_vec3(r0.velocity, {1.0, 0.0, 0.0}, 1e-15);   // pulse maximum
    CHECK(r0.acceleration.y < 0.0);                     // curving back down

    const FlatReference r1 = traj.at(0.6);   // one aggressiveness unit later
    check_close(r1.position.y, 1.0108844328543891, 1e-14);
    check_close(r1.position.x, 0.6, 1e-15);
    check_close(r1.position.z, 1.0 + 1.0108844328543891, 1e-14);
}

TEST_CASE("derivatives agree with central finite differences") {
    const RelayTrajectory traj(0.6);
    const double h = 1e-5;
    for (double t = -2.0; t <= 2.0; t += 0.1) {
        const FlatReference c = traj.at(t);
        const FlatReference lo = traj.at(t - h);
        const FlatReference hi = traj.at(t + h);

        const Vec3 vel_fd = (hi.position - lo.position) / (2.0 * h);
        const Vec3 acc_fd = (hi.velocity - lo.velocity) / (2.0 * h);
        const Vec3 jerk_fd = (hi.acceleration - lo.acceleration) / (2.0 * h);
        check_vec3(c.velocity, vel_fd, 1e-6);
        check_vec3(c.acceleration, acc_fd, 1e-6);
        check_vec3(c.jerk, jerk_fd, 1e-5);
    }
}

TEST_CASE("x advances at unit speed far from the pulse") {
    const RelayTrajectory traj(0.6);
    const FlatReference r = traj.at(-5.0);
    check_close(r.position.x, -5.0, 1e-15);
    check_close(r.position.y, 0.0, 1e-10);   // pulse negligible at ~8 sigma
    check_close(r.position.z, 1.0, 1e-10);
    check_vec3(r.velocity, {1, 0, 0}, 1e-9);
}

TEST_CASE("time offset shifts the pulse along the timeline") {
    const RelayTrajectory base(0.6);
    const RelayTrajectory shifted(0.6, -6.0);
    const FlatReference a = base.at(0.0);
    const FlatReference b = shifted.at(6.0);
    check_vec3(a.position, b.position, 0.0);
    check_vec3(a.velocity, b.velocity, 0.0);
    check_vec3(a.jerk, b.jerk, 0.0);
}

TEST_CASE("mirroring flips only the lateral excursion") {
    const RelayTrajectory base(0.6);
    const RelayTrajectory mirrored(0.6, 0.0, true);
    for (double t : {-0.5, 0.0, 0.3, 1.2}) {
        const FlatReference a = base.at(t);
        const FlatReference b = mirrored.at(t);
        check_close(b.position.y, -a.position.y, 0.0);
        check_close(b.velocity.y, -a.velocity.y, 0.0);
        check_close(b.acceleration.y, -a.acceleration.y, 0.0);
        check_close(b.position.x, a.position.x, 0.0);
        check_close(b.position.z, a.position.z, 0.0);
    }
}

TEST_CASE("position offset translates the whole path") {
    const RelayTrajectory base(0.6);
    const RelayTrajectory moved(0.6, 0.0, false, {10.0, -1.0, 2.0});
    const FlatReference a = base.at(0.25);
    const FlatReference b = moved.at(0.25);
    check_vec3(b.position - a.position, {10.0, -1.0, 2.0}, 1e-15);
    check_vec3(b.velocity, a.velocity, 0.0);
}

TEST_CASE("smaller aggressiveness values sharpen the pulse") {
    const RelayTrajectory gentle(1.0);
    const RelayTrajectory sharp(0.3);
    CHECK(sharp.at(0.0).position.y > gentle.at(0.0).position.y);
    // Peak lateral acceleration scales as 1/s^3.
    CHECK(std::abs(sharp.at(0.0).acceleration.y) >
          10.0 * std::abs(gentle.at(0.0).acceleration.y));
}

TEST_CASE("non-positive aggressiveness is rejected") {
    CHECK_THROWS_AS(RelayTrajectory(0.0), Error);
    CHECK_THROWS_AS(RelayTrajectory(-0.6), Error);
}

} // TEST_SUITE
