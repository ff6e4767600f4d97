#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "binoloc/simulator.hpp"

namespace binoloc {

/// Raised for unknown keys and out-of-range values; the message names the key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key))
  {
  }
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Parameter sweep of the wall-follower campaign.
struct SweepConfig {
  std::vector<double> a_mu{0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> a_v{0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> noise{0.0, 0.2, 0.4};
  int seeds = 10;
};

enum class CampaignKind { WallSweep, LandNavHist, SearchHist };

std::string_view campaign_name(CampaignKind kind);
CampaignKind parse_campaign(std::string_view name);

/// Everything a campaign needs, reproducible from its manifest.
struct ExperimentConfig {
  SimConfig sim{};
  SweepConfig sweep{};
  CampaignKind campaign = CampaignKind::LandNavHist;
  std::uint64_t seed = 1;
  int trials = 100;
  double stability_threshold = 0.3;  // m
  double histogram_bin = 0.05;
  double max_failure_rate = 1.0;     // campaign fails when failures / trials exceeds this

  void validate() const;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError.
ConfigEntries parse_config_text(std::string_view text);
ConfigEntries load_config_file(const std::string& path);

/// Applies entries in order, with "*.preset" keys taking effect before the rest.
void apply_config(ExperimentConfig& cfg, const ConfigEntries& entries);
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// All settable keys, presets included.
std::vector<std::string> config_keys();

/// Fully resolved key/value listing (no presets), loadable by apply_config.
ConfigEntries resolved_config(const ExperimentConfig& cfg);
std::string format_manifest(const ExperimentConfig& cfg);

}  // namespace binoloc
