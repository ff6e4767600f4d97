#include "binoloc/sensing.hpp"

#include <stdexcept>

namespace binoloc {

void BinarySensorConfig::validate() const
{
  if (!(noise_factor >= 0.0 && noise_factor <= 1.0))
    throw std::invalid_argument("noise_factor must lie in [0, 1]");
}

int measure(const PolygonMap& map, Vec2 sensor_pos, const BinarySensorConfig& cfg, Rng& rng)
{
  const int truth = point_in_map(map, sensor_pos) ? 1 : 0;
  if (cfg.noise_factor <= 0.0) return truth;
  if (uniform(rng, 0.0, 1.0) < cfg.noise_factor) return std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
  return truth;
}

void validate_w_hat(double w_hat)
{
  if (!(w_hat > 0.5 && w_hat < 1.0)) throw std::invalid_argument("w_hat must lie in (0.5, 1)");
}

double likelihood(const PolygonMap& map, Vec2 hypothesis_sensor_pos, int observed, double w_hat)
{
  validate_w_hat(w_hat);
  const int predicted = point_in_map(map, hypothesis_sensor_pos) ? 1 : 0;
  return predicted == observed ? w_hat : 1.0 - w_hat;
}

}  // namespace binoloc
