#include "binoloc/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "binoloc/campaign.hpp"
#include "binoloc/map_io.hpp"
#include "binoloc/report.hpp"

namespace binoloc {

namespace {

struct Alias {
  const char* flag;
  const char* key;
};

constexpr Alias kAliases[] = {
    {"--sensor-noise", "sensor.noise_factor"},
    {"--w-hat", "pf.w_hat"},
};

Command parse_command(const std::string& name)
{
  if (name == "run") return Command::Run;
  if (name == "follow") return Command::Follow;
  if (name == "match") return Command::Match;
  if (name == "search") return Command::Search;
  throw UsageError("unknown subcommand \"" + name + "\"");
}

TrialStage stage_for(Command c)
{
  switch (c) {
    case Command::Follow: return TrialStage::Follow;
    case Command::Match: return TrialStage::Match;
    default: return TrialStage::Search;
  }
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_trial(std::ostream& out, const TrialRecord& rec)
{
  const TrialSummary s = summarize_trial(rec, 0);
  out << "seed " << rec.seed << "\n";
  out << "steps " << rec.trace.size() << "\n";
  if (rec.follow_start) out << "boundary_contact_t " << fmt(rec.trace[*rec.follow_start].t) << "\n";
  if (s.loop_complete) out << "loop mse " << fmt(s.mse) << " v_mean " << fmt(s.v_mean) << "\n";
  out << "dominant_points " << rec.dp_events.size() << "\n";
  if (rec.land_nav)
    out << "land_nav t " << fmt(s.t_estimate) << " dx " << fmt(s.dx) << " dphi " << fmt(s.dphi) << " c_err "
        << fmt(rec.land_nav->estimate.c_err) << " vertex " << rec.land_nav->estimate.vertex_index << "\n";
  if (rec.search)
    out << "search converged " << (rec.search->converged ? 1 : 0) << " t " << fmt(rec.search->time) << " dx "
        << fmt(rec.search->dx) << " dphi " << fmt(rec.search->dphi) << " restarts " << rec.search->restarts << "\n";
  if (rec.failed) out << "failed 1\n";
}

void print_summary(std::ostream& out, const CampaignReport& r)
{
  const auto& s = r.summary;
  out << "campaign " << campaign_name(r.config.campaign) << " trials " << s.trials << "\n";
  if (r.config.campaign == CampaignKind::WallSweep) {
    out << "loops " << s.loops << " mse_mean " << fmt(s.mse_mean) << " v_mean " << fmt(s.v_mean_mean) << "\n";
    return;
  }
  out << "estimated " << s.estimated << " dx " << fmt(s.dx_mean) << " +- " << fmt(s.dx_std) << " dphi "
      << fmt(s.dphi_mean) << " +- " << fmt(s.dphi_std) << " t_estimate " << fmt(s.t_estimate_mean) << "\n";
  if (r.config.campaign == CampaignKind::SearchHist)
    out << "converged " << s.converged << " failures " << s.failures << " dx " << fmt(s.pf_dx_mean) << " +- "
        << fmt(s.pf_dx_std) << " dphi " << fmt(s.pf_dphi_mean) << " +- " << fmt(s.pf_dphi_std) << "\n";
  out << "stability " << fmt(s.stability) << "\n";
}

void write_trace(const std::filesystem::path& dir, const TrialRecord& rec)
{
  std::filesystem::create_directories(dir);
  const auto path = dir / trace_file_name(rec.seed);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  write_trace_csv(f, rec);
}

}  // namespace

std::string usage_text()
{
  return "usage: binoloc <run|follow|match|search> [options]\n"
         "\n"
         "  run      campaign (--campaign wall-sweep|landnav-hist|search-hist)\n"
         "  follow   single wall-following trial, writes trace_<seed>.csv\n"
         "  match    single trial up to the first land-navigation estimate\n"
         "  search   single full-pipeline trial\n"
         "\n"
         "  --config FILE      key = value file, applied before flags\n"
         "  --out DIR          output directory (default: results)\n"
         "  --workers N        parallel trials (default: hardware threads)\n"
         "  --trace            write per-trial trace CSVs\n"
         "  --verbose          progress on stderr\n"
         "  --sensor-noise P   alias of --sensor.noise_factor\n"
         "  --w-hat W          alias of --pf.w_hat\n"
         "  --<key> VALUE      any configuration key, e.g. --pf.n_particles 500\n"
         "\n"
         "BINOLOC_SEED overrides the master seed of the config file; --seed overrides both.\n";
}

RunConfig parse_args(const std::vector<std::string>& args, const std::optional<std::string>& env_seed)
{
  if (args.empty()) throw UsageError("missing subcommand");
  RunConfig rc;
  rc.command = parse_command(args[0]);

  CLI::App app{"binoloc", "binoloc"};
  app.set_help_flag();
  app.allow_extras(false);

  std::string config_path, out_dir;
  unsigned workers = 0;
  app.add_option("--config", config_path);
  app.add_option("--out", out_dir);
  app.add_option("--workers", workers);
  app.add_flag("--trace", rc.trace);
  app.add_flag("--verbose,-v", rc.verbose);

  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  for (const auto& key : config_keys()) options.emplace_back(key, app.add_option("--" + key, values[key]));
  std::vector<std::pair<std::string, CLI::Option*>> aliases;
  std::map<std::string, std::string> alias_values;
  for (const auto& a : kAliases) aliases.emplace_back(a.key, app.add_option(a.flag, alias_values[a.flag]));

  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());  // CLI11 consumes vectors from the back
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  ExperimentConfig& cfg = rc.experiment;
  if (!config_path.empty()) apply_config(cfg, load_config_file(config_path));
  if (env_seed && !env_seed->empty()) set_config_value(cfg, "seed", *env_seed);

  ConfigEntries flags;
  for (std::size_t i = 0; i < aliases.size(); ++i)
    if (aliases[i].second->count() > 0) flags.emplace_back(aliases[i].first, alias_values[kAliases[i].flag]);
  for (const auto& [key, opt] : options)
    if (opt->count() > 0) flags.emplace_back(key, values[key]);
  apply_config(cfg, flags);

  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config", e.what());
  }
  try {
    (void)resolve_map(cfg.sim.map);
  } catch (const std::exception& e) {
    throw ConfigError("map", e.what());
  }

  if (!out_dir.empty()) rc.out_dir = out_dir;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (app.count("--workers") > 0 && workers == 0) throw ConfigError("workers", "must be >= 1");
  rc.workers = workers > 0 ? workers : hw;
  return rc;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::optional<std::string>& env_seed)
{
  if (args.empty()) {
    err << usage_text();
    return 2;
  }
  if (args[0] == "help" || args[0] == "--help" || args[0] == "-h") {
    out << usage_text();
    return 0;
  }

  RunConfig rc;
  try {
    rc = parse_args(args, env_seed);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << usage_text();
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (rc.command == Command::Run) {
      CampaignOptions opts;
      opts.workers = rc.workers;
      if (rc.trace) {
        const auto dir = rc.out_dir;
        opts.on_trial = [dir](const TrialRecord& rec) { write_trace(dir, rec); };
      }
      if (rc.verbose)
        opts.on_progress = [&err](std::size_t done, std::size_t total) {
          err << "\rtrial " << done << "/" << total << std::flush;
          if (done == total) err << "\n";
        };
      const CampaignReport report = run_campaign(rc.experiment, opts);
      write_campaign_outputs(report, rc.out_dir);
      print_summary(out, report);
      if (failure_threshold_exceeded(report)) {
        err << "failure rate " << report.summary.failures << "/" << report.summary.trials
            << " exceeds run.max_failure_rate\n";
        return 1;
      }
      return 0;
    }

    const TrialRecord rec = run_trial(rc.experiment.sim, rc.experiment.seed, stage_for(rc.command));
    if (rc.command == Command::Follow || rc.trace) write_trace(rc.out_dir, rec);
    print_trial(out, rec);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  std::optional<std::string> env_seed;
  if (const char* s = std::getenv("BINOLOC_SEED")) env_seed = s;
  return run_cli(args, out, err, env_seed);
}

}  // namespace binoloc
