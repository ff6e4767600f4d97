#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

namespace binoloc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a)
{
  a = std::remainder(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  return a;
}

/// Smallest signed rotation taking `b` onto `a`.
inline double angle_diff(double a, double b) { return wrap_angle(a - b); }

struct CircularStats {
  double mean = 0.0;
  double resultant = 0.0;  // mean resultant length R in [0, 1]
  double stddev = 0.0;     // sqrt(-2 ln R)
};

/// Weighted circular statistics. `weights` may be empty for equal weights.
inline CircularStats circular_stats(std::span<const double> angles, std::span<const double> weights = {})
{
  double c = 0.0, s = 0.0, total = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    c += w * std::cos(angles[i]);
    s += w * std::sin(angles[i]);
    total += w;
  }
  CircularStats out;
  if (total <= 0.0) return out;
  c /= total;
  s /= total;
  out.mean = std::atan2(s, c);
  out.resultant = std::min(1.0, std::hypot(c, s));
  out.stddev = out.resultant > 0.0 ? std::sqrt(-2.0 * std::log(out.resultant)) : INFINITY;
  return out;
}

}  // namespace binoloc
