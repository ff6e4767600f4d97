#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "binoloc/angles.hpp"
#include "binoloc/geometry.hpp"
#include "binoloc/motion.hpp"
#include "binoloc/random.hpp"

namespace binoloc {

struct Particle {
  Pose pose;
  double weight = 0.0;
  friend bool operator==(const Particle&, const Particle&) = default;
};

/// Standard deviations of the Gaussian the particles are seeded from.
struct SeedStds {
  double x = 0.31;
  double y = 0.31;
  double phi = 0.82;

  void validate() const;
};

/// Seed spread from land-navigation error statistics: mean + 3 std per axis.
SeedStds seed_stds_from_errors(double mean_dx, double std_dx, double mean_dphi, double std_dphi);

/// Weighted pose hypotheses plus the RNG that drives them.
class ParticleSet {
 public:
  /// Draws `count` particles around `mean`, each coordinate independently, with
  /// uniform weights.
  static ParticleSet seed(const Pose& mean, const SeedStds& stds, std::size_t count, std::uint64_t rng_seed);

  ParticleSet(std::vector<Particle> particles, std::uint64_t rng_seed);

  const std::vector<Particle>& particles() const { return particles_; }
  std::size_t size() const { return particles_.size(); }

  /// Moves every particle by the odometry increment through the odometry motion model.
  void predict(const Pose& odom_prev, const Pose& odom_curr, const MotionNoiseParams& params);

  /// Multiplies each weight by the binary likelihood at the particle's sensor
  /// position, then normalizes.
  void update_weights(const PolygonMap& map, int s, const LeverArm& arm, double w_hat);

  double effective_sample_size() const;

  /// Low-variance (systematic) resampling to equal weights.
  void resample();

  /// Resamples only when N_eff < ratio * N. Returns whether it resampled.
  bool resample_if_needed(double ratio);

  CircularStats heading_stats() const;
  /// Weighted RMS distance of the particle positions from their weighted mean.
  double position_spread() const;

  /// Converged when the circular standard deviation of the headings is below the threshold.
  bool converged(double sigma_phi_max) const;

  /// Weighted mean position with the circular weighted mean heading.
  Pose estimate() const;

  Rng& rng() { return rng_; }

 private:
  void normalize();

  std::vector<Particle> particles_;
  Rng rng_;
  std::vector<double> scratch_;
};

}  // namespace binoloc
