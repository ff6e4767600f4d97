#include "binoloc/particle_filter.hpp"

#include <cmath>
#include <stdexcept>

#include "binoloc/sensing.hpp"

namespace binoloc {

void SeedStds::validate() const
{
  if (!(x > 0.0 && y > 0.0 && phi > 0.0)) throw std::invalid_argument("seed standard deviations must be > 0");
}

SeedStds seed_stds_from_errors(double mean_dx, double std_dx, double mean_dphi, double std_dphi)
{
  const double xy = mean_dx + 3.0 * std_dx;
  return {xy, xy, mean_dphi + 3.0 * std_dphi};
}

ParticleSet ParticleSet::seed(const Pose& mean, const SeedStds& stds, std::size_t count, std::uint64_t rng_seed)
{
  stds.validate();
  if (count == 0) throw std::invalid_argument("particle count must be > 0");
  ParticleSet set({}, rng_seed);
  set.particles_.reserve(count);
  const double w = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    Pose p{mean.x + gaussian(set.rng_, stds.x), mean.y + gaussian(set.rng_, stds.y),
           mean.phi + gaussian(set.rng_, stds.phi)};
    set.particles_.push_back({p, w});
  }
  return set;
}

ParticleSet::ParticleSet(std::vector<Particle> particles, std::uint64_t rng_seed)
    : particles_(std::move(particles)), rng_(rng_seed)
{
}

void ParticleSet::predict(const Pose& odom_prev, const Pose& odom_curr, const MotionNoiseParams& params)
{
  for (auto& p : particles_) p.pose = sample_odometry_motion(p.pose, odom_prev, odom_curr, params, rng_);
}

void ParticleSet::update_weights(const PolygonMap& map, int s, const LeverArm& arm, double w_hat)
{
  validate_w_hat(w_hat);
  for (auto& p : particles_) {
    const int predicted = point_in_map(map, sensor_position(p.pose, arm)) ? 1 : 0;
    p.weight *= predicted == s ? w_hat : 1.0 - w_hat;
  }
  normalize();
}

void ParticleSet::normalize()
{
  double total = 0.0;
  for (const auto& p : particles_) total += p.weight;
  if (!(total > 0.0) || !std::isfinite(total)) {
    const double w = 1.0 / static_cast<double>(particles_.size());
    for (auto& p : particles_) p.weight = w;
    return;
  }
  for (auto& p : particles_) p.weight /= total;
}

double ParticleSet::effective_sample_size() const
{
  double sq = 0.0;
  for (const auto& p : particles_) sq += p.weight * p.weight;
  return sq > 0.0 ? 1.0 / sq : 0.0;
}

void ParticleSet::resample()
{
  const std::size_t n = particles_.size();
  if (n == 0) return;
  const double step = 1.0 / static_cast<double>(n);
  const double start = uniform(rng_, 0.0, step);
  std::vector<Particle> out;
  out.reserve(n);
  std::size_t i = 0;
  double cumulative = particles_[0].weight;
  for (std::size_t m = 0; m < n; ++m) {
    const double u = start + static_cast<double>(m) * step;
    while (u > cumulative && i + 1 < n) cumulative += particles_[++i].weight;
    out.push_back({particles_[i].pose, step});
  }
  particles_.swap(out);
}

bool ParticleSet::resample_if_needed(double ratio)
{
  if (effective_sample_size() < ratio * static_cast<double>(particles_.size())) {
    resample();
    return true;
  }
  return false;
}

CircularStats ParticleSet::heading_stats() const
{
  std::vector<double> headings, weights;
  headings.reserve(particles_.size());
  weights.reserve(particles_.size());
  for (const auto& p : particles_) {
    headings.push_back(p.pose.phi);
    weights.push_back(p.weight);
  }
  return circular_stats(headings, weights);
}

double ParticleSet::position_spread() const
{
  const Pose m = estimate();
  double total = 0.0, sq = 0.0;
  for (const auto& p : particles_) {
    const double dx = p.pose.x - m.x, dy = p.pose.y - m.y;
    sq += p.weight * (dx * dx + dy * dy);
    total += p.weight;
  }
  return total > 0.0 ? std::sqrt(sq / total) : 0.0;
}

bool ParticleSet::converged(double sigma_phi_max) const { return heading_stats().stddev < sigma_phi_max; }

Pose ParticleSet::estimate() const
{
  if (particles_.empty()) throw std::logic_error("estimate of an empty particle set");
  double total = 0.0, x = 0.0, y = 0.0;
  for (const auto& p : particles_) {
    x += p.weight * p.pose.x;
    y += p.weight * p.pose.y;
    total += p.weight;
  }
  if (!(total > 0.0)) throw std::logic_error("particle weights sum to zero");
  return {x / total, y / total, heading_stats().mean};
}

}  // namespace binoloc
