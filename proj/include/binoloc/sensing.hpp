#pragma once

#include "binoloc/geometry.hpp"
#include "binoloc/random.hpp"

namespace binoloc {

/// Fraction of readings replaced by a fair coin flip (0: exact, 1: pure noise).
struct BinarySensorConfig {
  double noise_factor = 0.1;

  void validate() const;
};

/// Reads the inside(1)/outside(0) bit at `sensor_pos`.
int measure(const PolygonMap& map, Vec2 sensor_pos, const BinarySensorConfig& cfg, Rng& rng);

/// Weight of a hypothesis: w_hat if it would read `observed`, else 1 - w_hat.
/// Throws std::invalid_argument unless 0.5 < w_hat < 1.
double likelihood(const PolygonMap& map, Vec2 hypothesis_sensor_pos, int observed, double w_hat);

void validate_w_hat(double w_hat);

}  // namespace binoloc
