#include "binoloc/motion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "binoloc/angles.hpp"

namespace binoloc {

namespace {

constexpr double kStraightOmega = 1e-6;  // rad/s, below this the arc is integrated as a chord
constexpr double kMinTranslation = 1e-9;

// Rotation magnitude used for noise scaling; backward motion is treated like forward motion.
double rotation_noise_magnitude(double rot)
{
  return std::min(std::fabs(wrap_angle(rot)), std::fabs(angle_diff(rot, kPi)));
}

}  // namespace

void MotionNoiseParams::validate() const
{
  for (double a : velocity)
    if (!(a >= 0.0)) throw std::invalid_argument("velocity motion alpha must be >= 0");
  for (double a : odometry)
    if (!(a >= 0.0)) throw std::invalid_argument("odometry motion alpha must be >= 0");
}

MotionNoiseParams viking_mi_422p()
{
  return {{0.0346, 0.0316, 0.0755, 0.0566, 0.0592, 0.0678}, {0.0849, 0.0412, 0.0316, 0.0173}};
}

MotionNoiseParams motion_preset(std::string_view name)
{
  if (name == "viking-mi-422p") return viking_mi_422p();
  if (name == "noise-free") return {};
  throw std::invalid_argument("unknown motion preset: " + std::string(name));
}

void LeverArm::validate() const
{
  if (!std::isfinite(dx) || !std::isfinite(dy)) throw std::invalid_argument("lever arm must be finite");
  if (dx == 0.0 && dy == 0.0) throw std::invalid_argument("lever arm must be non-zero");
}

Vec2 sensor_position(const Pose& pose, const LeverArm& arm)
{
  const double c = std::cos(pose.phi), s = std::sin(pose.phi);
  return {pose.x + c * arm.dx - s * arm.dy, pose.y + s * arm.dx + c * arm.dy};
}

Pose sample_velocity_motion(const Pose& pose, const VelocityCommand& cmd, double dt, const MotionNoiseParams& params,
                            Rng& rng)
{
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const auto& a = params.velocity;
  const double v2 = cmd.v * cmd.v, w2 = cmd.omega * cmd.omega;
  const double v = cmd.v + gaussian(rng, std::sqrt(a[0] * v2 + a[1] * w2));
  const double w = cmd.omega + gaussian(rng, std::sqrt(a[2] * v2 + a[3] * w2));
  const double gamma = gaussian(rng, std::sqrt(a[4] * v2 + a[5] * w2));

  Pose out = pose;
  if (std::fabs(w) < kStraightOmega) {
    // Series limit of the arc: a chord along the mid-step heading.
    const double mid = pose.phi + 0.5 * w * dt;
    out.x += v * dt * std::cos(mid);
    out.y += v * dt * std::sin(mid);
  } else {
    const double r = v / w;
    out.x += -r * std::sin(pose.phi) + r * std::sin(pose.phi + w * dt);
    out.y += r * std::cos(pose.phi) - r * std::cos(pose.phi + w * dt);
  }
  out.phi = wrap_angle(pose.phi + w * dt + gamma * dt);
  return out;
}

Pose sample_odometry_motion(const Pose& pose, const Pose& odom_prev, const Pose& odom_curr,
                            const MotionNoiseParams& params, Rng& rng)
{
  const auto& a = params.odometry;
  const double dx = odom_curr.x - odom_prev.x;
  const double dy = odom_curr.y - odom_prev.y;
  const double trans = std::hypot(dx, dy);
  const double rot1 = trans < kMinTranslation ? 0.0 : angle_diff(std::atan2(dy, dx), odom_prev.phi);
  const double rot2 = wrap_angle(angle_diff(odom_curr.phi, odom_prev.phi) - rot1);

  const double r1 = rotation_noise_magnitude(rot1);
  const double r2 = rotation_noise_magnitude(rot2);
  const double rot1_hat = rot1 - gaussian(rng, a[0] * r1 + a[1] * trans);
  const double trans_hat = trans - gaussian(rng, a[2] * trans + a[3] * (r1 + r2));
  const double rot2_hat = rot2 - gaussian(rng, a[0] * r2 + a[1] * trans);

  return {pose.x + trans_hat * std::cos(pose.phi + rot1_hat), pose.y + trans_hat * std::sin(pose.phi + rot1_hat),
          wrap_angle(pose.phi + rot1_hat + rot2_hat)};
}

}  // namespace binoloc
