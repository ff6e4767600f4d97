#pragma once

#include <cstdint>
#include <random>

namespace binoloc {

// Every simulation replication owns one of these; all sampling goes through it
// so identical seeds reproduce identical runs.
using Rng = std::mt19937_64;

/// Zero-mean Gaussian draw with the given standard deviation (0 yields 0).
inline double gaussian(Rng& rng, double stddev)
{
  if (!(stddev > 0.0)) return 0.0;
  return std::normal_distribution<double>(0.0, stddev)(rng);
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Seed derived for replication `index` of a campaign.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) { return master_seed ^ index; }

}  // namespace binoloc
