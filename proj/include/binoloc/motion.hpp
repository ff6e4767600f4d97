#pragma once

#include <array>
#include <string_view>

#include "binoloc/geometry.hpp"
#include "binoloc/random.hpp"

namespace binoloc {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct VelocityCommand {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
  friend bool operator==(const VelocityCommand&, const VelocityCommand&) = default;
};

/// Noise parameters of the sampling velocity and odometry motion models.
struct MotionNoiseParams {
  std::array<double, 6> velocity{};  // alpha_1 .. alpha_6
  std::array<double, 4> odometry{};  // alpha_1 .. alpha_4

  void validate() const;
};

/// Parameters calibrated for a Viking MI 422P lawn mower.
MotionNoiseParams viking_mi_422p();
/// Looks up a named preset ("viking-mi-422p" or "noise-free").
MotionNoiseParams motion_preset(std::string_view name);

/// Sensor offset in the robot frame. Must be non-zero: pure rotations have to
/// move the sensor.
struct LeverArm {
  double dx = 0.3;
  double dy = 0.0;

  void validate() const;
};

Vec2 sensor_position(const Pose& pose, const LeverArm& arm);

/// Samples a successor pose under the velocity motion model. Noise terms are
/// zero-mean Gaussians with variances alpha_1 v^2 + alpha_2 w^2 (linear),
/// alpha_3 v^2 + alpha_4 w^2 (angular) and alpha_5 v^2 + alpha_6 w^2 (final
/// rotation).
Pose sample_velocity_motion(const Pose& pose, const VelocityCommand& cmd, double dt, const MotionNoiseParams& params,
                            Rng& rng);

/// Applies the odometry increment odom_prev -> odom_curr (rot1, trans, rot2
/// decomposition) to `pose`. Noise terms are zero-mean Gaussians with standard
/// deviations alpha_1|rot| + alpha_2 trans and alpha_3 trans + alpha_4 (|rot1| + |rot2|).
Pose sample_odometry_motion(const Pose& pose, const Pose& odom_prev, const Pose& odom_curr,
                            const MotionNoiseParams& params, Rng& rng);

}  // namespace binoloc
