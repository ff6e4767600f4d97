#include "binoloc/campaign.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "binoloc/map_io.hpp"
#include "binoloc/random.hpp"

namespace binoloc {

namespace {

TrialStage stage_for(CampaignKind kind)
{
  switch (kind) {
    case CampaignKind::WallSweep: return TrialStage::Follow;
    case CampaignKind::LandNavHist: return TrialStage::Match;
    case CampaignKind::SearchHist: return TrialStage::Search;
  }
  return TrialStage::Search;
}

struct TrialJob {
  SimConfig sim;
  std::uint64_t seed = 0;
};

std::vector<TrialJob> plan_jobs(const ExperimentConfig& cfg)
{
  std::vector<TrialJob> jobs;
  if (cfg.campaign == CampaignKind::WallSweep) {
    for (double noise : cfg.sweep.noise)
      for (double a_mu : cfg.sweep.a_mu)
        for (double a_v : cfg.sweep.a_v)
          for (int j = 0; j < cfg.sweep.seeds; ++j) {
            TrialJob job{cfg.sim, trial_seed(cfg.seed, jobs.size())};
            job.sim.wall_follower.a_mu = a_mu;
            job.sim.wall_follower.a_v = a_v;
            job.sim.sensor.noise_factor = noise;
            jobs.push_back(std::move(job));
          }
  } else {
    for (int i = 0; i < cfg.trials; ++i) jobs.push_back({cfg.sim, trial_seed(cfg.seed, static_cast<std::uint64_t>(i))});
  }
  return jobs;
}

}  // namespace

std::optional<double> TrialSummary::final_position_error() const
{
  if (converged) return pf_dx;
  if (estimated) return dx;
  return std::nullopt;
}

TrialSummary summarize_trial(const TrialRecord& record, std::size_t index)
{
  TrialSummary s;
  s.index = index;
  s.seed = record.seed;
  if (record.land_nav) {
    s.estimated = true;
    s.dx = record.land_nav->dx;
    s.dphi = record.land_nav->dphi;
    s.t_estimate = record.land_nav->time;
  }
  if (record.search) {
    s.converged = record.search->converged;
    s.restarts = record.search->restarts;
    if (s.converged) {
      s.pf_dx = record.search->dx;
      s.pf_dphi = record.search->dphi;
      s.t_converged = record.search->time;
    }
  }
  if (record.loop) {
    s.loop_complete = true;
    s.mse = record.loop->mse;
    s.v_mean = record.loop->v_mean;
  }
  s.failed = record.failed;
  return s;
}

std::pair<double, double> mean_std(const std::vector<double>& values)
{
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size() - 1))};
}

CampaignSummary summarize_campaign(const std::vector<TrialSummary>& trials, double stability_threshold)
{
  CampaignSummary out;
  out.trials = static_cast<int>(trials.size());
  std::vector<double> dx, dphi, t_est, pf_dx, pf_dphi, t_conv, mse, vel;
  int stable = 0, stable_converged = 0;
  for (const auto& t : trials) {
    if (t.estimated) {
      ++out.estimated;
      dx.push_back(t.dx);
      dphi.push_back(t.dphi);
      t_est.push_back(t.t_estimate);
    }
    if (t.converged) {
      ++out.converged;
      pf_dx.push_back(t.pf_dx);
      pf_dphi.push_back(t.pf_dphi);
      t_conv.push_back(t.t_converged);
      if (t.pf_dx < stability_threshold) ++stable_converged;
    }
    if (t.loop_complete) {
      ++out.loops;
      mse.push_back(t.mse);
      vel.push_back(t.v_mean);
    }
    if (t.failed) ++out.failures;
    if (const auto e = t.final_position_error(); e && *e < stability_threshold) ++stable;
  }
  std::tie(out.dx_mean, out.dx_std) = mean_std(dx);
  std::tie(out.dphi_mean, out.dphi_std) = mean_std(dphi);
  out.t_estimate_mean = mean_std(t_est).first;
  std::tie(out.pf_dx_mean, out.pf_dx_std) = mean_std(pf_dx);
  std::tie(out.pf_dphi_mean, out.pf_dphi_std) = mean_std(pf_dphi);
  out.t_converged_mean = mean_std(t_conv).first;
  out.mse_mean = mean_std(mse).first;
  out.v_mean_mean = mean_std(vel).first;
  if (out.trials > 0) out.stability = static_cast<double>(stable) / out.trials;
  if (out.converged > 0) out.stability_converged = static_cast<double>(stable_converged) / out.converged;
  return out;
}

CampaignReport run_campaign(const ExperimentConfig& cfg, const CampaignOptions& options)
{
  cfg.validate();
  const PolygonMap map = resolve_map(cfg.sim.map);
  const TrialStage stage = stage_for(cfg.campaign);
  const std::vector<TrialJob> jobs = plan_jobs(cfg);

  CampaignReport report;
  report.config = cfg;
  report.trials.resize(jobs.size());

  std::atomic<std::size_t> next{0};
  std::size_t finished = 0;
  std::mutex mutex;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        const TrialRecord rec = run_trial(jobs[i].sim, map, jobs[i].seed, stage);
        TrialSummary s = summarize_trial(rec, i);
        s.a_mu = jobs[i].sim.wall_follower.a_mu;
        s.a_v = jobs[i].sim.wall_follower.a_v;
        s.noise = jobs[i].sim.sensor.noise_factor;
        report.trials[i] = s;
        std::lock_guard lock(mutex);
        if (options.on_trial) options.on_trial(rec);
        ++finished;
        if (options.on_progress) options.on_progress(finished, jobs.size());
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        next.store(jobs.size());
        return;
      }
    }
  };

  const unsigned n_workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(jobs.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  if (cfg.campaign == CampaignKind::WallSweep) {
    const std::size_t per_cell = static_cast<std::size_t>(cfg.sweep.seeds);
    for (std::size_t start = 0; start < report.trials.size(); start += per_cell) {
      SweepCell cell;
      cell.a_mu = report.trials[start].a_mu;
      cell.a_v = report.trials[start].a_v;
      cell.noise = report.trials[start].noise;
      std::vector<double> mse, vel;
      for (std::size_t i = start; i < start + per_cell; ++i) {
        ++cell.trials;
        if (!report.trials[i].loop_complete) continue;
        ++cell.loops;
        mse.push_back(report.trials[i].mse);
        vel.push_back(report.trials[i].v_mean);
      }
      std::tie(cell.mse_mean, cell.mse_std) = mean_std(mse);
      std::tie(cell.v_mean_mean, cell.v_mean_std) = mean_std(vel);
      report.cells.push_back(cell);
    }
  }

  report.summary = summarize_campaign(report.trials, cfg.stability_threshold);
  return report;
}

bool failure_threshold_exceeded(const CampaignReport& report)
{
  if (report.summary.trials == 0) return false;
  const double rate = static_cast<double>(report.summary.failures) / report.summary.trials;
  return rate > report.config.max_failure_rate;
}

}  // namespace binoloc
