#include "binoloc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "binoloc/angles.hpp"
#include "binoloc/map_io.hpp"

namespace binoloc {

namespace {

constexpr std::uint64_t kFilterStream = 0x9E3779B97F4A7C15ull;
constexpr double kTaskArrivalRadius = 0.3;  // m
constexpr double kTaskMaxDriveTime = 180.0; // s
constexpr double kTaskWaypointClearance = 1.0;  // m from the boundary

double wrap_half(double delta, double period)
{
  delta = std::remainder(delta, period);
  if (delta <= -0.5 * period) delta += period;
  return delta;
}

Vec2 random_waypoint(const PolygonMap& map, Rng& rng)
{
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Vec2 p{uniform(rng, map.min_x(), map.max_x()), uniform(rng, map.min_y(), map.max_y())};
    if (point_in_map(map, p) && closest_boundary_point(map, p).distance >= kTaskWaypointClearance) return p;
  }
  throw std::runtime_error("map has no interior point clear of the boundary");
}

// Go-to-goal steering on the filter's own estimate.
VelocityCommand steer_towards(const Pose& est, Vec2 goal, const WallFollowerParams& wf)
{
  const double bearing = heading_of(goal - est.position());
  const double err = angle_diff(bearing, est.phi);
  const double omega = std::clamp(2.0 * err, -wf.omega0, wf.omega0);
  const double v = std::fabs(err) < 0.3 ? wf.v0 : 0.2 * wf.v0;
  return {v, omega};
}

}  // namespace

void ParticleFilterParams::validate() const
{
  if (n_particles == 0) throw std::invalid_argument("pf.n_particles must be > 0");
  validate_w_hat(w_hat);
  if (!(sigma_phi_max > 0.0)) throw std::invalid_argument("pf.sigma_phi_max must be > 0");
  if (!(resample_ratio >= 0.0 && resample_ratio <= 1.0))
    throw std::invalid_argument("pf.resample_ratio must lie in [0, 1]");
  if (!(restart_timeout > 0.0)) throw std::invalid_argument("pf.restart_timeout must be > 0");
  if (max_restarts < 0) throw std::invalid_argument("pf.max_restarts must be >= 0");
  seed_stds.validate();
}

void SimConfig::validate() const
{
  if (!(frequency > 0.0)) throw std::invalid_argument("sim.frequency must be > 0");
  if (!(max_time > 0.0)) throw std::invalid_argument("sim.max_time must be > 0");
  if (!(task_follow_time >= 0.0)) throw std::invalid_argument("sim.task_follow_time must be >= 0");
  wall_follower.validate();
  lever_arm.validate();
  motion.validate();
  sensor.validate();
  land_nav.validate();
  pf.validate();
}

LoopTracker::LoopTracker(const PolygonMap& map, Vec2 start_sensor)
    : map_(&map), circumference_(map.circumference()),
      last_arclength_(closest_boundary_point(map, start_sensor).arclength)
{
}

bool LoopTracker::add(Vec2 sensor)
{
  const double s = closest_boundary_point(*map_, sensor).arclength;
  progress_ += wrap_half(s - last_arclength_, circumference_);
  last_arclength_ = s;
  return complete();
}

Pose random_interior_pose(const PolygonMap& map, const LeverArm& arm, Rng& rng)
{
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Pose p{uniform(rng, map.min_x(), map.max_x()), uniform(rng, map.min_y(), map.max_y()), uniform(rng, -kPi, kPi)};
    if (point_in_map(map, p.position()) && point_in_map(map, sensor_position(p, arm))) return p;
  }
  throw std::runtime_error("could not sample an interior start pose");
}

std::optional<LoopMetrics> wall_follow_metrics(const TrialRecord& record, const PolygonMap& map, double frequency)
{
  if (!record.boundary_entry || *record.boundary_entry >= record.trace.size()) return std::nullopt;
  const std::size_t start = *record.boundary_entry;
  LoopTracker tracker(map, record.trace[start].sensor);
  std::optional<std::size_t> end;
  for (std::size_t i = start + 1; i < record.trace.size(); ++i) {
    if (tracker.add(record.trace[i].sensor)) {
      end = i;
      break;
    }
  }
  if (!end) return std::nullopt;

  double sq = 0.0;
  for (std::size_t i = start; i <= *end; ++i) {
    const double d = closest_boundary_point(map, record.trace[i].sensor).distance;
    sq += d * d;
  }
  LoopMetrics m;
  m.start_step = start;
  m.end_step = *end;
  m.mse = sq / static_cast<double>(*end - start + 1);
  m.duration = static_cast<double>(*end - start) / frequency;
  m.v_mean = map.circumference() / m.duration;
  return m;
}

TrialRecord run_trial(const SimConfig& cfg, std::uint64_t seed, TrialStage stage)
{
  return run_trial(cfg, resolve_map(cfg.map), seed, stage);
}

TrialRecord run_trial(const SimConfig& cfg, const PolygonMap& map, std::uint64_t seed, TrialStage stage)
{
  cfg.validate();
  Rng rng(seed);
  const double dt = cfg.dt();
  const double U = map.circumference();
  const OrientationProfile boundary = build_orientation_profile(map);

  TrialRecord rec;
  rec.seed = seed;
  rec.start = random_interior_pose(map, cfg.lever_arm, rng);

  Pose truth = rec.start;
  Pose odom = rec.start;
  WallFollowerState wf = initial_state();
  DominantPointTrack track;
  std::optional<LoopTracker> loop;
  std::optional<ParticleSet> pf;
  double travelled_since_seed = 0.0;
  int restarts = 0;

  // Task-execution phase state.
  int task_phase = 0;
  Vec2 waypoint;
  double phase_started = 0.0;

  const auto max_steps = static_cast<std::size_t>(std::ceil(cfg.max_time * cfg.frequency));
  rec.trace.reserve(std::min<std::size_t>(max_steps + 1, 1u << 16));

  for (std::size_t n = 0; n <= max_steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    const Vec2 sensor = sensor_position(truth, cfg.lever_arm);
    const int s = measure(map, sensor, cfg.sensor, rng);
    rec.trace.push_back({t, truth, odom, sensor, s, wf.mode});

    if (!rec.boundary_entry) {
      if (!point_in_map(map, sensor)) {
        rec.boundary_entry = n;
        loop.emplace(map, sensor);
      }
    } else if (!rec.loop && loop->add(sensor)) {
      rec.loop = wall_follow_metrics(rec, map, cfg.frequency);
      if (stage == TrialStage::Follow) break;
    }

    VelocityCommand cmd;
    if (task_phase == 1) {
      cmd = steer_towards(pf->estimate(), waypoint, cfg.wall_follower);
    } else {
      const FollowerMode before = wf.mode;
      std::tie(wf, cmd) = step(wf, s, cfg.wall_follower);
      const bool contact = before == FollowerMode::Search && wf.mode == FollowerMode::Follow;

      if (task_phase == 0 && contact && !rec.follow_start) {
        rec.follow_start = n;
        track = DominantPointTrack(odom.position(), U);
      } else if (task_phase == 0 && rec.follow_start) {
        if (stage != TrialStage::Follow && !pf) {
          if (const auto dp = track.update(odom.position(), cfg.land_nav)) {
            rec.dp_events.push_back({n, *dp});
            if (const auto est = try_match(track, map, boundary, cfg.land_nav)) {
              if (!rec.land_nav) {
                LandNavOutcome out;
                out.estimate = *est;
                out.step = n;
                out.time = t;
                out.truth = truth;
                out.dx = distance(truth.position(), est->position);
                out.dphi = std::fabs(angle_diff(truth.phi, est->heading));
                rec.land_nav = out;
                if (stage == TrialStage::Match) break;
              }
              pf = ParticleSet::seed({est->position.x, est->position.y, est->heading}, cfg.pf.seed_stds,
                                     cfg.pf.n_particles, seed ^ (kFilterStream + static_cast<std::uint64_t>(restarts)));
              travelled_since_seed = 0.0;
            }
          }
        }
      } else if (task_phase == 2 && contact) {
        task_phase = 3;
        phase_started = t;
      }
    }

    if (pf) {
      pf->update_weights(map, s, cfg.lever_arm, cfg.pf.w_hat);
      pf->resample_if_needed(cfg.pf.resample_ratio);

      if (task_phase == 0) {
        if (pf->converged(cfg.pf.sigma_phi_max)) {
          SearchOutcome out;
          out.converged = true;
          out.step = n;
          out.time = t;
          out.estimate = pf->estimate();
          out.truth = truth;
          out.dx = distance(truth.position(), out.estimate.position());
          out.dphi = std::fabs(angle_diff(truth.phi, out.estimate.phi));
          out.restarts = restarts;
          rec.search = out;
          if (!cfg.task_phase) break;
          task_phase = 1;
          waypoint = random_waypoint(map, rng);
          phase_started = t;
        } else if (travelled_since_seed >= cfg.pf.restart_timeout * U) {
          if (restarts >= cfg.pf.max_restarts) {
            rec.failed = true;
            rec.search = SearchOutcome{false, n, t, pf->estimate(), truth, 0.0, 0.0, restarts};
            rec.search->dx = distance(truth.position(), rec.search->estimate.position());
            rec.search->dphi = std::fabs(angle_diff(truth.phi, rec.search->estimate.phi));
            break;
          }
          ++restarts;
          pf.reset();
          track = DominantPointTrack(odom.position(), U);
        }
      }

      if (pf && task_phase > 0) {
        const Pose est = pf->estimate();
        rec.task.push_back({t, task_phase, pf->position_spread(), pf->heading_stats().stddev,
                            distance(est.position(), truth.position())});
        if (task_phase == 1 && (distance(est.position(), waypoint) < kTaskArrivalRadius ||
                                t - phase_started > kTaskMaxDriveTime)) {
          task_phase = 2;
          wf = initial_state();
        } else if (task_phase == 3 && t - phase_started >= cfg.task_follow_time) {
          break;
        }
      }
    }

    const Pose next_truth = sample_velocity_motion(truth, cmd, dt, cfg.motion, rng);
    const Pose next_odom = sample_odometry_motion(odom, truth, next_truth, cfg.motion, rng);
    if (pf) {
      pf->predict(odom, next_odom, cfg.motion);
      travelled_since_seed += distance(truth.position(), next_truth.position());
    }
    truth = next_truth;
    odom = next_odom;
  }

  if (!rec.loop) rec.loop = wall_follow_metrics(rec, map, cfg.frequency);
  if (stage == TrialStage::Search && !rec.search) rec.failed = true;
  return rec;
}

}  // namespace binoloc
