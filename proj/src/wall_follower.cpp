#include "binoloc/wall_follower.hpp"

#include <cmath>
#include <stdexcept>

#include "binoloc/angles.hpp"

namespace binoloc {

void WallFollowerParams::validate() const
{
  if (K <= 0) throw std::invalid_argument("wall_follower.K must be > 0");
  if (!(a_mu > 0.0 && a_mu < 1.0)) throw std::invalid_argument("wall_follower.a_mu must lie in (0, 1)");
  if (!(a_v > 0.0 && a_v < 1.0)) throw std::invalid_argument("wall_follower.a_v must lie in (0, 1)");
  if (!(v0 > 0.0)) throw std::invalid_argument("wall_follower.v0 must be > 0");
  if (!(omega0 > 0.0)) throw std::invalid_argument("wall_follower.omega0 must be > 0");
}

WallFollowerState initial_state() { return {}; }

std::pair<WallFollowerState, VelocityCommand> step(const WallFollowerState& state, int s,
                                                   const WallFollowerParams& params)
{
  WallFollowerState next = state;
  VelocityCommand cmd;
  next.mu_d = params.a_mu * state.mu_d + (1.0 - params.a_mu) * (s != 0 ? 1.0 : 0.0);

  if (state.mode == FollowerMode::Search) {
    // The switching step keeps the last search command.
    cmd = {params.v0, 0.0};
    if (next.mu_d <= 0.5) next.mode = FollowerMode::Follow;
  } else {
    const double d = 2.0 * (0.5 - next.mu_d);
    next.v_rel = params.a_v * state.v_rel + (1.0 - params.a_v) * (1.0 - std::fabs(d));
    const double wiggle = std::cos(kTwoPi * static_cast<double>(state.k % params.K) / params.K);
    cmd = {next.v_rel * params.v0, 0.5 * (d + wiggle) * params.omega0};
  }
  ++next.k;
  return {next, cmd};
}

}  // namespace binoloc
