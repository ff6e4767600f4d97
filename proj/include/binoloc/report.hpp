#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "binoloc/campaign.hpp"

namespace binoloc {

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  std::size_t count = 0;
};

/// Fixed-width bins covering [0, max value]. Throws std::invalid_argument on
/// empty input, negative values or a non-positive width.
std::vector<HistogramBin> emit_histogram(std::span<const double> values, double bin_width);

/// Mean recovered from bin midpoints.
double histogram_mean(const std::vector<HistogramBin>& bins);

// CSV writers. Column order is fixed; see README.
void write_trials_csv(std::ostream& out, const std::vector<TrialSummary>& trials);
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);
void write_summary_csv(std::ostream& out, const CampaignSummary& summary);
void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);
void write_trace_csv(std::ostream& out, const TrialRecord& record);

/// Writes trials.csv, summary.csv, manifest.txt and, depending on the
/// campaign, sweep.csv or hist_*.csv into dir. Returns the files written.
std::vector<std::filesystem::path> write_campaign_outputs(const CampaignReport& report,
                                                          const std::filesystem::path& dir);

std::filesystem::path trace_file_name(std::uint64_t seed);

}  // namespace binoloc
