#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "explore/world.hpp"

namespace explore {

/// Heading normalized to (-pi, pi].
double normalize_angle(double a);

struct Pose {
    Point2 position;
    double heading = 0.0;
};

struct WheelSpeeds {
    double left = 0.0;
    double right = 0.0;
};

struct BodyVelocity {
    double forward = 0.0;   ///< V_c
    double yaw_rate = 0.0;
};

/// Differential-drive parameters, lengths in cell widths.
struct RobotParams {
    double wheel_radius = 0.2;
    double track_width = 0.8;    ///< d, wheel-to-wheel distance
    double max_speed = 1.0;      ///< v_max
    double max_yaw_rate = M_PI;
    double sample_time = 1.0;    ///< T_s, seconds
};

/// V_c = (V_R + V_L)/2, yaw_rate = (V_R - V_L)/d.
BodyVelocity wheels_to_body(double v_left, double v_right, double track_width);

/// Exact inverse of wheels_to_body.
WheelSpeeds body_to_wheels(double forward, double yaw_rate, double track_width);

struct StepResult {
    Pose pose;
    WheelSpeeds wheels;
};

/// One sampling-time motion step: turn toward the target by at most
/// max_yaw_rate*T_s, then translate along the new heading by
/// min(v_max*T_s, distance to target) - or not at all while the residual
/// heading error is 90 degrees or more. No slip, pure kinematics.
StepResult step_toward(const Pose& pose, Point2 target, const RobotParams& params);

}  // namespace explore
