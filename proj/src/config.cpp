#include "binoloc/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "binoloc/map_io.hpp"

namespace binoloc {

namespace {

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& text)
{
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(key, "expected a number, got \"" + text + "\"");
  return v;
}

long long parse_int(const std::string& key, const std::string& text)
{
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw ConfigError(key, "expected an integer, got \"" + text + "\"");
  return v;
}

std::uint64_t parse_seed(const std::string& key, const std::string& text)
{
  errno = 0;
  char* end = nullptr;
  if (!text.empty() && text[0] == '-') throw ConfigError(key, "seed must be non-negative");
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw ConfigError(key, "expected an unsigned integer, got \"" + text + "\"");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text)
{
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, "expected true or false, got \"" + text + "\"");
}

std::vector<double> parse_list(const std::string& key, const std::string& text)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
  return out;
}

std::string format_list(const std::vector<double>& v)
{
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

// Range helpers: each throws a ConfigError naming the key.
double in_range(const std::string& key, double v, double lo, double hi, bool lo_open, bool hi_open)
{
  const bool ok_lo = lo_open ? v > lo : v >= lo;
  const bool ok_hi = hi_open ? v < hi : v <= hi;
  if (!ok_lo || !ok_hi) {
    std::ostringstream msg;
    msg << "value " << v << " outside " << (lo_open ? "(" : "[") << lo << ", " << hi << (hi_open ? ")" : "]");
    throw ConfigError(key, msg.str());
  }
  return v;
}

double positive(const std::string& key, double v)
{
  if (!(v > 0.0)) throw ConfigError(key, "must be > 0");
  return v;
}

double non_negative(const std::string& key, double v)
{
  if (!(v >= 0.0)) throw ConfigError(key, "must be >= 0");
  return v;
}

struct KeySpec {
  std::string name;
  std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const ExperimentConfig&)> get;  // empty for presets
};

const std::vector<KeySpec>& registry()
{
  using C = ExperimentConfig;
  using S = std::string;
  static const std::vector<KeySpec> keys = [] {
    std::vector<KeySpec> k;
    auto dbl = [&k](S name, std::function<double&(C&)> ref, std::function<double(const S&, double)> check) {
      k.push_back({name,
                   [ref, check](C& c, const S& key, const S& v) { ref(c) = check(key, parse_double(key, v)); },
                   [ref](const C& c) { return format_double(ref(const_cast<C&>(c))); }});
    };

    k.push_back({"campaign", [](C& c, const S&, const S& v) { c.campaign = parse_campaign(v); },
                 [](const C& c) { return S(campaign_name(c.campaign)); }});
    k.push_back({"map",
                 [](C& c, const S& key, const S& v) {
                   if (v.empty()) throw ConfigError(key, "map name or path is empty");
                   c.sim.map = v;
                 },
                 [](const C& c) { return c.sim.map; }});
    k.push_back({"seed", [](C& c, const S& key, const S& v) { c.seed = parse_seed(key, v); },
                 [](const C& c) { return std::to_string(c.seed); }});
    k.push_back({"trials",
                 [](C& c, const S& key, const S& v) {
                   const auto n = parse_int(key, v);
                   if (n < 1) throw ConfigError(key, "must be >= 1");
                   c.trials = static_cast<int>(n);
                 },
                 [](const C& c) { return std::to_string(c.trials); }});

    dbl("sim.frequency", [](C& c) -> double& { return c.sim.frequency; }, positive);
    dbl("sim.max_time", [](C& c) -> double& { return c.sim.max_time; }, positive);
    k.push_back({"sim.task_phase", [](C& c, const S& key, const S& v) { c.sim.task_phase = parse_bool(key, v); },
                 [](const C& c) { return S(c.sim.task_phase ? "true" : "false"); }});
    dbl("sim.task_follow_time", [](C& c) -> double& { return c.sim.task_follow_time; }, non_negative);

    dbl("lever_arm.dx", [](C& c) -> double& { return c.sim.lever_arm.dx; }, [](const S&, double v) { return v; });
    dbl("lever_arm.dy", [](C& c) -> double& { return c.sim.lever_arm.dy; }, [](const S&, double v) { return v; });

    k.push_back({"motion.preset",
                 [](C& c, const S& key, const S& v) {
                   try {
                     c.sim.motion = motion_preset(v);
                   } catch (const std::invalid_argument& e) {
                     throw ConfigError(key, e.what());
                   }
                 },
                 {}});
    for (int i = 0; i < 6; ++i)
      dbl("motion.velocity.alpha" + std::to_string(i + 1),
          [i](C& c) -> double& { return c.sim.motion.velocity[static_cast<std::size_t>(i)]; }, non_negative);
    for (int i = 0; i < 4; ++i)
      dbl("motion.odometry.alpha" + std::to_string(i + 1),
          [i](C& c) -> double& { return c.sim.motion.odometry[static_cast<std::size_t>(i)]; }, non_negative);

    dbl("sensor.noise_factor", [](C& c) -> double& { return c.sim.sensor.noise_factor; },
        [](const S& key, double v) { return in_range(key, v, 0.0, 1.0, false, false); });

    k.push_back({"wall_follower.K",
                 [](C& c, const S& key, const S& v) {
                   const auto n = parse_int(key, v);
                   if (n < 1) throw ConfigError(key, "must be >= 1");
                   c.sim.wall_follower.K = static_cast<int>(n);
                 },
                 [](const C& c) { return std::to_string(c.sim.wall_follower.K); }});
    auto unit_open = [](const S& key, double v) { return in_range(key, v, 0.0, 1.0, true, true); };
    dbl("wall_follower.a_mu", [](C& c) -> double& { return c.sim.wall_follower.a_mu; }, unit_open);
    dbl("wall_follower.a_v", [](C& c) -> double& { return c.sim.wall_follower.a_v; }, unit_open);
    dbl("wall_follower.v0", [](C& c) -> double& { return c.sim.wall_follower.v0; }, positive);
    dbl("wall_follower.omega0", [](C& c) -> double& { return c.sim.wall_follower.omega0; }, positive);

    k.push_back({"land_nav.preset",
                 [](C& c, const S& key, const S& v) {
                   try {
                     c.sim.land_nav = land_nav_preset(v);
                   } catch (const std::invalid_argument& e) {
                     throw ConfigError(key, e.what());
                   }
                 },
                 {}});
    dbl("land_nav.L_min", [](C& c) -> double& { return c.sim.land_nav.L_min; }, positive);
    dbl("land_nav.e_max", [](C& c) -> double& { return c.sim.land_nav.e_max; }, positive);
    dbl("land_nav.c_min", [](C& c) -> double& { return c.sim.land_nav.c_min; }, positive);
    dbl("land_nav.U_min", [](C& c) -> double& { return c.sim.land_nav.U_min; },
        [](const S& key, double v) { return in_range(key, v, 0.0, 1.0, true, false); });
    k.push_back({"land_nav.N",
                 [](C& c, const S& key, const S& v) {
                   const auto n = parse_int(key, v);
                   if (n < 2) throw ConfigError(key, "must be >= 2");
                   c.sim.land_nav.samples = static_cast<std::size_t>(n);
                 },
                 [](const C& c) { return std::to_string(c.sim.land_nav.samples); }});

    k.push_back({"pf.n_particles",
                 [](C& c, const S& key, const S& v) {
                   const auto n = parse_int(key, v);
                   if (n < 1) throw ConfigError(key, "must be >= 1");
                   c.sim.pf.n_particles = static_cast<std::size_t>(n);
                 },
                 [](const C& c) { return std::to_string(c.sim.pf.n_particles); }});
    dbl("pf.w_hat", [](C& c) -> double& { return c.sim.pf.w_hat; },
        [](const S& key, double v) { return in_range(key, v, 0.5, 1.0, true, true); });
    dbl("pf.sigma_phi_max", [](C& c) -> double& { return c.sim.pf.sigma_phi_max; }, positive);
    dbl("pf.resample_ratio", [](C& c) -> double& { return c.sim.pf.resample_ratio; },
        [](const S& key, double v) { return in_range(key, v, 0.0, 1.0, false, false); });
    dbl("pf.restart_timeout", [](C& c) -> double& { return c.sim.pf.restart_timeout; }, positive);
    k.push_back({"pf.max_restarts",
                 [](C& c, const S& key, const S& v) {
                   const auto n = parse_int(key, v);
                   if (n < 0) throw ConfigError(key, "must be >= 0");
                   c.sim.pf.max_restarts = static_cast<int>(n);
                 },
                 [](const C& c) { return std::to_string(c.sim.pf.max_restarts); }});
    k.push_back({"pf.seed_sigma_xy",
                 [](C& c, const S& key, const S& v) {
                   c.sim.pf.seed_stds.x = c.sim.pf.seed_stds.y = positive(key, parse_double(key, v));
                 },
                 [](const C& c) { return format_double(c.sim.pf.seed_stds.x); }});
    dbl("pf.seed_sigma_phi", [](C& c) -> double& { return c.sim.pf.seed_stds.phi; }, positive);

    auto list = [&k](S name, std::function<std::vector<double>&(C&)> ref, double lo, double hi, bool open) {
      k.push_back({name,
                   [ref, lo, hi, open](C& c, const S& key, const S& v) {
                     auto values = parse_list(key, v);
                     for (double x : values) in_range(key, x, lo, hi, open, open);
                     ref(c) = std::move(values);
                   },
                   [ref](const C& c) { return format_list(ref(const_cast<C&>(c))); }});
    };
    list("sweep.a_mu", [](C& c) -> std::vector<double>& { return c.sweep.a_mu; }, 0.0, 1.0, true);
    list("sweep.a_v", [](C& c) -> std::vector<double>& { return c.sweep.a_v; }, 0.0, 1.0, true);
    list("sweep.noise", [](C& c) -> std::vector<double>& { return c.sweep.noise; }, 0.0, 1.0, false);
    k.push_back({"sweep.seeds",
                 [](C& c, const S& key, const S& v) {
                   const auto n = parse_int(key, v);
                   if (n < 1) throw ConfigError(key, "must be >= 1");
                   c.sweep.seeds = static_cast<int>(n);
                 },
                 [](const C& c) { return std::to_string(c.sweep.seeds); }});

    dbl("report.stability_threshold", [](C& c) -> double& { return c.stability_threshold; }, positive);
    dbl("report.histogram_bin", [](C& c) -> double& { return c.histogram_bin; }, positive);
    dbl("run.max_failure_rate", [](C& c) -> double& { return c.max_failure_rate; },
        [](const S& key, double v) { return in_range(key, v, 0.0, 1.0, false, false); });
    return k;
  }();
  return keys;
}

bool is_preset_key(const std::string& key) { return key.size() > 7 && key.ends_with(".preset"); }

}  // namespace

std::string_view campaign_name(CampaignKind kind)
{
  switch (kind) {
    case CampaignKind::WallSweep: return "wall-sweep";
    case CampaignKind::LandNavHist: return "landnav-hist";
    case CampaignKind::SearchHist: return "search-hist";
  }
  return "landnav-hist";
}

CampaignKind parse_campaign(std::string_view name)
{
  if (name == "wall-sweep") return CampaignKind::WallSweep;
  if (name == "landnav-hist") return CampaignKind::LandNavHist;
  if (name == "search-hist") return CampaignKind::SearchHist;
  throw ConfigError("campaign", "unknown campaign \"" + std::string(name) +
                                    "\" (expected wall-sweep, landnav-hist or search-hist)");
}

void ExperimentConfig::validate() const
{
  sim.validate();
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  if (sweep.seeds < 1) throw ConfigError("sweep.seeds", "must be >= 1");
}

ConfigEntries parse_config_text(std::string_view text)
{
  ConfigEntries out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected \"key = value\", got \"" + body + "\"");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "missing key");
    out.emplace_back(key, trim(std::string_view(body).substr(eq + 1)));
  }
  return out;
}

ConfigEntries load_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value)
{
  for (const auto& spec : registry()) {
    if (spec.name == key) {
      spec.set(cfg, key, value);
      return;
    }
  }
  throw ConfigError(key, "unknown configuration key");
}

void apply_config(ExperimentConfig& cfg, const ConfigEntries& entries)
{
  for (const auto& [key, value] : entries)
    if (is_preset_key(key)) set_config_value(cfg, key, value);
  for (const auto& [key, value] : entries)
    if (!is_preset_key(key)) set_config_value(cfg, key, value);
}

std::vector<std::string> config_keys()
{
  std::vector<std::string> out;
  for (const auto& spec : registry()) out.push_back(spec.name);
  return out;
}

ConfigEntries resolved_config(const ExperimentConfig& cfg)
{
  ConfigEntries out;
  for (const auto& spec : registry())
    if (spec.get) out.emplace_back(spec.name, spec.get(cfg));
  return out;
}

std::string format_manifest(const ExperimentConfig& cfg)
{
  std::string out = "# binoloc run manifest: fully resolved configuration\n";
  out += "# master seed " + std::to_string(cfg.seed) + "\n";
  for (const auto& [key, value] : resolved_config(cfg)) out += key + " = " + value + "\n";
  return out;
}

}  // namespace binoloc
