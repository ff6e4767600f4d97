#pragma once

#include <cstdint>
#include <utility>

#include "binoloc/motion.hpp"

namespace binoloc {

enum class FollowerMode : int { Search = 0, Follow = 1 };

struct WallFollowerParams {
  int K = 100;          // counter divider; wiggle period is K control steps
  double a_mu = 0.8;    // smoothing rate of the detection mean
  double a_v = 0.7;     // smoothing rate of the relative velocity
  double v0 = 0.3;      // m/s
  double omega0 = 0.6;  // rad/s

  void validate() const;
};

struct WallFollowerState {
  FollowerMode mode = FollowerMode::Search;
  double mu_d = 1.0;   // smoothed detection mean, starts "inside the field"
  double v_rel = 0.0;  // relative linear velocity
  std::int64_t k = 0;  // control step counter

  friend bool operator==(const WallFollowerState&, const WallFollowerState&) = default;
};

WallFollowerState initial_state();

/// One control step for sensor bit `s`. Search drives straight until the
/// detection mean drops to 0.5 and then switches to Follow for good; Follow
/// steers to keep the mean at 0.5 while superimposing a cosine wiggle.
std::pair<WallFollowerState, VelocityCommand> step(const WallFollowerState& state, int s,
                                                   const WallFollowerParams& params);

}  // namespace binoloc
