#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "binoloc/config.hpp"
#include "binoloc/simulator.hpp"

namespace binoloc {

/// Scalar outcome of one trial; the trace itself is dropped.
struct TrialSummary {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double a_mu = 0.0;
  double a_v = 0.0;
  double noise = 0.0;

  bool estimated = false;  // land navigation produced an estimate
  double dx = 0.0;
  double dphi = 0.0;
  double t_estimate = 0.0;

  bool converged = false;  // particle filter converged
  double pf_dx = 0.0;
  double pf_dphi = 0.0;
  double t_converged = 0.0;
  int restarts = 0;

  bool loop_complete = false;
  double mse = 0.0;
  double v_mean = 0.0;

  bool failed = false;

  /// Position error of the last estimate the trial produced, if any.
  std::optional<double> final_position_error() const;
};

TrialSummary summarize_trial(const TrialRecord& record, std::size_t index);

/// One (a_mu, a_v, noise) cell of the wall-follower sweep.
struct SweepCell {
  double a_mu = 0.0;
  double a_v = 0.0;
  double noise = 0.0;
  int trials = 0;
  int loops = 0;  // trials that completed a boundary loop
  double mse_mean = 0.0;
  double mse_std = 0.0;
  double v_mean_mean = 0.0;
  double v_mean_std = 0.0;
};

struct CampaignSummary {
  int trials = 0;
  int estimated = 0;
  int converged = 0;
  int failures = 0;
  int loops = 0;

  double dx_mean = 0.0, dx_std = 0.0;
  double dphi_mean = 0.0, dphi_std = 0.0;
  double t_estimate_mean = 0.0;

  double pf_dx_mean = 0.0, pf_dx_std = 0.0;
  double pf_dphi_mean = 0.0, pf_dphi_std = 0.0;
  double t_converged_mean = 0.0;

  double mse_mean = 0.0;
  double v_mean_mean = 0.0;

  double stability = 0.0;            // fraction of all trials whose final error is below the threshold
  double stability_converged = 0.0;  // same, among converged trials only
};

struct CampaignReport {
  ExperimentConfig config;
  std::vector<TrialSummary> trials;  // ordered by trial index
  std::vector<SweepCell> cells;      // wall-sweep only
  CampaignSummary summary;
};

/// Mean and sample standard deviation; zeros for an empty input.
std::pair<double, double> mean_std(const std::vector<double>& values);

struct CampaignOptions {
  unsigned workers = 1;
  /// Called once per finished trial with its full record (from worker threads,
  /// serialized by the runner). Used for trace output.
  std::function<void(const TrialRecord&)> on_trial;
  /// Progress notification: (finished, total).
  std::function<void(std::size_t, std::size_t)> on_progress;
};

/// Runs every trial of the configured campaign. Results do not depend on the
/// worker count.
CampaignReport run_campaign(const ExperimentConfig& cfg, const CampaignOptions& options = {});

CampaignSummary summarize_campaign(const std::vector<TrialSummary>& trials, double stability_threshold);

/// failures / trials exceeds cfg.max_failure_rate.
bool failure_threshold_exceeded(const CampaignReport& report);

}  // namespace binoloc
