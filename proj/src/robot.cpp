#include "explore/robot.hpp"

#include <algorithm>

namespace explore {

double normalize_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

BodyVelocity wheels_to_body(double v_left, double v_right, double track_width) {
    if (track_width <= 0.0) throw std::invalid_argument("track width must be positive");
    return {(v_right + v_left) / 2.0, (v_right - v_left) / track_width};
}

WheelSpeeds body_to_wheels(double forward, double yaw_rate, double track_width) {
    if (track_width <= 0.0) throw std::invalid_argument("track width must be positive");
    return {forward - yaw_rate * track_width / 2.0,
            forward + yaw_rate * track_width / 2.0};
}

StepResult step_toward(const Pose& pose, Point2 target, const RobotParams& params) {
    const double dist = distance(pose.position, target);
    if (dist == 0.0) return {pose, {0.0, 0.0}};

    const double bearing = std::atan2(target.y - pose.position.y,
                                      target.x - pose.position.x);
    const double err = normalize_angle(bearing - pose.heading);
    const double max_turn = params.max_yaw_rate * params.sample_time;
    const double turn = std::clamp(err, -max_turn, max_turn);
    const double heading = normalize_angle(pose.heading + turn);

    const double residual = normalize_angle(bearing - heading);
    double travel = 0.0;
    if (std::abs(residual) < M_PI / 2.0)
        travel = std::min(params.max_speed * params.sample_time, dist);

    Pose next;
    next.heading = heading;
    next.position = {pose.position.x + travel * std::cos(heading),
                     pose.position.y + travel * std::sin(heading)};

    const double forward = travel / params.sample_time;
    const double yaw_rate = turn / params.sample_time;
    return {next, body_to_wheels(forward, yaw_rate, params.track_width)};
}

}  // namespace explore
