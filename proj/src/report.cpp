#include "binoloc/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace binoloc {

namespace {

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Empty field when the value does not apply to this trial.
std::string opt(bool present, double v) { return present ? num(v) : std::string(); }

std::ofstream open_output(const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<HistogramBin> emit_histogram(std::span<const double> values, double bin_width)
{
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) throw std::invalid_argument("histogram bin width must be > 0");
  if (values.empty()) throw std::invalid_argument("histogram of an empty set");
  double max = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("histogram values must be finite and >= 0");
    max = std::max(max, v);
  }
  const auto n_bins = static_cast<std::size_t>(std::floor(max / bin_width)) + 1;
  std::vector<HistogramBin> bins(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    bins[i].low = static_cast<double>(i) * bin_width;
    bins[i].high = static_cast<double>(i + 1) * bin_width;
  }
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::floor(v / bin_width));
    if (idx >= n_bins) idx = n_bins - 1;
    ++bins[idx].count;
  }
  return bins;
}

double histogram_mean(const std::vector<HistogramBin>& bins)
{
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& b : bins) {
    sum += 0.5 * (b.low + b.high) * static_cast<double>(b.count);
    n += b.count;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialSummary>& trials)
{
  out << "seed,dx,dphi,t_estimate,converged,mse,v_mean,estimated,pf_dx,pf_dphi,t_converged,restarts,"
         "loop_complete,failed,a_mu,a_v,noise\n";
  for (const auto& t : trials) {
    out << t.seed << ',' << opt(t.estimated, t.dx) << ',' << opt(t.estimated, t.dphi) << ','
        << opt(t.estimated, t.t_estimate) << ',' << (t.converged ? 1 : 0) << ',' << opt(t.loop_complete, t.mse) << ','
        << opt(t.loop_complete, t.v_mean) << ',' << (t.estimated ? 1 : 0) << ',' << opt(t.converged, t.pf_dx) << ','
        << opt(t.converged, t.pf_dphi) << ',' << opt(t.converged, t.t_converged) << ',' << t.restarts << ','
        << (t.loop_complete ? 1 : 0) << ',' << (t.failed ? 1 : 0) << ',' << num(t.a_mu) << ',' << num(t.a_v) << ','
        << num(t.noise) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells)
{
  out << "a_mu,a_v,noise,trials,loops,incomplete,mse_mean,mse_std,v_mean_mean,v_mean_std\n";
  for (const auto& c : cells) {
    const bool any = c.loops > 0;
    out << num(c.a_mu) << ',' << num(c.a_v) << ',' << num(c.noise) << ',' << c.trials << ',' << c.loops << ','
        << c.trials - c.loops << ',' << opt(any, c.mse_mean) << ',' << opt(any, c.mse_std) << ','
        << opt(any, c.v_mean_mean) << ',' << opt(any, c.v_mean_std) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const CampaignSummary& s)
{
  out << "metric,value\n";
  out << "trials," << s.trials << '\n';
  out << "estimated," << s.estimated << '\n';
  out << "converged," << s.converged << '\n';
  out << "failures," << s.failures << '\n';
  out << "loops," << s.loops << '\n';
  out << "dx_mean," << num(s.dx_mean) << '\n';
  out << "dx_std," << num(s.dx_std) << '\n';
  out << "dphi_mean," << num(s.dphi_mean) << '\n';
  out << "dphi_std," << num(s.dphi_std) << '\n';
  out << "t_estimate_mean," << num(s.t_estimate_mean) << '\n';
  out << "pf_dx_mean," << num(s.pf_dx_mean) << '\n';
  out << "pf_dx_std," << num(s.pf_dx_std) << '\n';
  out << "pf_dphi_mean," << num(s.pf_dphi_mean) << '\n';
  out << "pf_dphi_std," << num(s.pf_dphi_std) << '\n';
  out << "t_converged_mean," << num(s.t_converged_mean) << '\n';
  out << "mse_mean," << num(s.mse_mean) << '\n';
  out << "v_mean_mean," << num(s.v_mean_mean) << '\n';
  out << "stability," << num(s.stability) << '\n';
  out << "stability_converged," << num(s.stability_converged) << '\n';
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins)
{
  out << "bin_low,bin_high,count\n";
  for (const auto& b : bins) out << num(b.low) << ',' << num(b.high) << ',' << b.count << '\n';
}

void write_trace_csv(std::ostream& out, const TrialRecord& record)
{
  out << "t,x_true,y_true,phi_true,x_odom,y_odom,phi_odom,s\n";
  for (const auto& p : record.trace) {
    out << num(p.t) << ',' << num(p.truth.x) << ',' << num(p.truth.y) << ',' << num(p.truth.phi) << ','
        << num(p.odom.x) << ',' << num(p.odom.y) << ',' << num(p.odom.phi) << ',' << p.s << '\n';
  }
}

std::filesystem::path trace_file_name(std::uint64_t seed) { return "trace_" + std::to_string(seed) + ".csv"; }

std::vector<std::filesystem::path> write_campaign_outputs(const CampaignReport& report,
                                                          const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, auto&& body) {
    const auto path = dir / name;
    auto out = open_output(path);
    body(out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
    written.push_back(path);
  };

  emit("manifest.txt", [&](std::ostream& o) { o << format_manifest(report.config); });
  emit("trials.csv", [&](std::ostream& o) { write_trials_csv(o, report.trials); });
  emit("summary.csv", [&](std::ostream& o) { write_summary_csv(o, report.summary); });

  if (report.config.campaign == CampaignKind::WallSweep) {
    emit("sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, report.cells); });
    return written;
  }

  std::vector<double> dx, dphi, pf_dx, pf_dphi;
  for (const auto& t : report.trials) {
    if (t.estimated) {
      dx.push_back(t.dx);
      dphi.push_back(t.dphi);
    }
    if (t.converged) {
      pf_dx.push_back(t.pf_dx);
      pf_dphi.push_back(t.pf_dphi);
    }
  }
  const double w = report.config.histogram_bin;
  auto hist = [&](const std::string& name, const std::vector<double>& v) {
    if (!v.empty()) emit(name, [&](std::ostream& o) { write_histogram_csv(o, emit_histogram(v, w)); });
  };
  hist("hist_dx.csv", dx);
  hist("hist_dphi.csv", dphi);
  if (report.config.campaign == CampaignKind::SearchHist) {
    hist("hist_pf_dx.csv", pf_dx);
    hist("hist_pf_dphi.csv", pf_dphi);
  }
  return written;
}

}  // namespace binoloc
