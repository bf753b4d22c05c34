#include <doctest.h>

#include <cmath>
#include <random>

#include "explore/robot.hpp"

using namespace explore;

TEST_CASE("wheel and body kinematics") {
    SUBCASE("equal wheels drive straight") {
        const BodyVelocity v = wheels_to_body(1.0, 1.0, 0.4);
        CHECK(v.forward == 1.0);
        CHECK(v.yaw_rate == 0.0);
    }
    SUBCASE("direct arithmetic") {
        const BodyVelocity v = wheels_to_body(0.4, 0.6, 0.4);
        CHECK(v.forward == doctest::Approx(0.5));
        CHECK(v.yaw_rate == doctest::Approx(0.5));
    }
    SUBCASE("opposite wheels rotate in place") {
        const BodyVelocity v = wheels_to_body(-0.7, 0.7, 0.5);
        CHECK(v.forward == 0.0);
        CHECK(v.yaw_rate > 0.0);
    }
    SUBCASE("inverse examples") {
        const WheelSpeeds straight = body_to_wheels(1.0, 0.0, 0.3);
        CHECK(straight.left == 1.0);
        CHECK(straight.right == 1.0);
        const WheelSpeeds spin = body_to_wheels(0.0, 2.0, 1.0);
        CHECK(spin.left == doctest::Approx(-1.0));
        CHECK(spin.right == doctest::Approx(1.0));
    }
    SUBCASE("round trip is exact on random inputs") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int i = 0; i < 100; ++i) {
            const double vl = u(rng), vr = u(rng);
            const BodyVelocity v = wheels_to_body(vl, vr, 0.4);
            const WheelSpeeds w = body_to_wheels(v.forward, v.yaw_rate, 0.4);
            CHECK(w.left == doctest::Approx(vl).epsilon(1e-12));
            CHECK(w.right == doctest::Approx(vr).epsilon(1e-12));
        }
    }
    SUBCASE("non-positive track width") {
        CHECK_THROWS_AS(wheels_to_body(1.0, 1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(body_to_wheels(1.0, 1.0, -0.1), std::invalid_argument);
    }
}

TEST_CASE("single-step controller") {
    RobotParams params;
    params.max_speed = 1.0;
    params.max_yaw_rate = M_PI / 2.0;
    params.sample_time = 1.0;

    SUBCASE("target at the current position is a no-op") {
        Pose pose;
        pose.position = {3.0, 3.0};
        pose.heading = 0.7;
        const StepResult r = step_toward(pose, {3.0, 3.0}, params);
        CHECK(r.pose.position.x == 3.0);
        CHECK(r.pose.position.y == 3.0);
        CHECK(r.pose.heading == 0.7);
        CHECK(r.wheels.left == 0.0);
        CHECK(r.wheels.right == 0.0);
    }
    SUBCASE("short target straight ahead is reached exactly") {
        Pose pose;
        pose.position = {1.0, 1.0};
        pose.heading = 0.0;
        const StepResult r = step_toward(pose, {1.5, 1.0}, params);
        CHECK(r.pose.position.x == doctest::Approx(1.5));
        CHECK(r.pose.position.y == doctest::Approx(1.0));
        CHECK(r.wheels.left == doctest::Approx(0.5));
        CHECK(r.wheels.right == doctest::Approx(0.5));
    }
    SUBCASE("target behind: quarter turn, no translation") {
        Pose pose;
        pose.position = {2.0, 2.0};
        pose.heading = 0.0;
        const StepResult r = step_toward(pose, {0.5, 2.0}, params);
        CHECK(std::abs(r.pose.heading) == doctest::Approx(M_PI / 2.0));
        CHECK(r.pose.position.x == doctest::Approx(2.0));
        CHECK(r.pose.position.y == doctest::Approx(2.0));
    }
    SUBCASE("per-step displacement never exceeds v_max * T_s") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int i = 0; i < 200; ++i) {
            Pose pose;
            pose.position = {u(rng), u(rng)};
            pose.heading = u(rng);
            const Point2 target{u(rng), u(rng)};
            const StepResult r = step_toward(pose, target, params);
            CHECK(distance(pose.position, r.pose.position) <=
                  params.max_speed * params.sample_time + 1e-12);
        }
    }
    SUBCASE("repeated steps converge to a fixed target") {
        Pose pose;
        pose.position = {0.0, 0.0};
        pose.heading = M_PI;  // facing away
        const Point2 target{4.0, 3.0};
        double prev = distance(pose.position, target);
        bool aligned_once = false;
        int steps = 0;
        while (distance(pose.position, target) > 1e-9 && steps < 50) {
            const StepResult r = step_toward(pose, target, params);
            pose = r.pose;
            const double d = distance(pose.position, target);
            const double bearing = std::atan2(target.y - pose.position.y,
                                              target.x - pose.position.x);
            if (aligned_once) CHECK(d < prev);
            if (d > 1e-9 &&
                std::abs(normalize_angle(bearing - pose.heading)) < M_PI / 2.0)
                aligned_once = true;
            prev = d;
            ++steps;
        }
        CHECK(distance(pose.position, target) < 1e-9);
        CHECK(steps < 50);
    }
}

TEST_CASE("angle normalization") {
    CHECK(normalize_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(normalize_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(normalize_angle(3.0 * M_PI) == doctest::Approx(M_PI));
    CHECK(normalize_angle(0.25) == doctest::Approx(0.25));
    CHECK(normalize_angle(-0.25) == doctest::Approx(-0.25));
}
