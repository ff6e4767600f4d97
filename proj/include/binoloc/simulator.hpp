#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "binoloc/geometry.hpp"
#include "binoloc/land_nav.hpp"
#include "binoloc/motion.hpp"
#include "binoloc/particle_filter.hpp"
#include "binoloc/sensing.hpp"
#include "binoloc/wall_follower.hpp"

namespace binoloc {

struct ParticleFilterParams {
  std::size_t n_particles = 20000;
  double w_hat = 0.75;
  double sigma_phi_max = 0.2;   // rad, circular heading std that counts as converged
  double resample_ratio = 0.5;  // resample when N_eff < ratio * N
  double restart_timeout = 3.0; // circumferences of travel without convergence
  int max_restarts = 0;         // land-navigation restarts before a trial is failed
  SeedStds seed_stds{};

  void validate() const;
};

/// How far a single trial runs.
enum class TrialStage {
  Follow,  // until the first completed boundary loop
  Match,   // until the first land-navigation estimate
  Search,  // until the particle filter converges (or times out)
};

struct SimConfig {
  std::string map = "map1";
  double frequency = 20.0;  // Hz
  WallFollowerParams wall_follower{};
  LeverArm lever_arm{};
  MotionNoiseParams motion = viking_mi_422p();
  BinarySensorConfig sensor{};
  LandNavParams land_nav{};
  ParticleFilterParams pf{};
  double max_time = 20000.0;  // s, per-trial cap on simulated time
  bool task_phase = false;   // drive into the field and back after convergence
  double task_follow_time = 60.0;  // s of wall following after returning to the boundary

  void validate() const;
  double dt() const { return 1.0 / frequency; }
};

struct TraceSample {
  double t = 0.0;
  Pose truth;
  Pose odom;
  Vec2 sensor;
  int s = 0;
  FollowerMode mode = FollowerMode::Search;
};

struct DpEvent {
  std::size_t step = 0;
  Vec2 point;
};

struct LandNavOutcome {
  PoseEstimate estimate;
  std::size_t step = 0;
  double time = 0.0;  // s since trial start, Search-mode approach included
  Pose truth;
  double dx = 0.0;    // |x_true - x_est|
  double dphi = 0.0;  // |phi_true - phi_est|, wrapped
};

struct SearchOutcome {
  bool converged = false;
  std::size_t step = 0;
  double time = 0.0;
  Pose estimate;
  Pose truth;
  double dx = 0.0;
  double dphi = 0.0;
  int restarts = 0;
};

struct LoopMetrics {
  double mse = 0.0;     // m^2, sensor to closest boundary point
  double v_mean = 0.0;  // m/s, U / loop duration
  double duration = 0.0;
  std::size_t start_step = 0;
  std::size_t end_step = 0;
};

/// Filter state sampled during the task-execution phase.
struct TaskSample {
  double t = 0.0;
  int phase = 0;  // 0 converged, 1 driving inward, 2 returning, 3 following again
  double position_spread = 0.0;
  double heading_std = 0.0;
  double position_error = 0.0;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  Pose start;
  std::vector<TraceSample> trace;  // one sample per control step, 1/f apart
  std::optional<std::size_t> follow_start;    // step the controller switched to Follow
  std::optional<std::size_t> boundary_entry;  // first step with the sensor outside the field
  std::vector<DpEvent> dp_events;
  std::optional<LandNavOutcome> land_nav;
  std::optional<SearchOutcome> search;
  std::optional<LoopMetrics> loop;
  std::vector<TaskSample> task;
  bool failed = false;  // particle filter timed out without a usable restart
};

/// Net progress of the sensor's closest-boundary arclength since a start point.
class LoopTracker {
 public:
  LoopTracker(const PolygonMap& map, Vec2 start_sensor);
  /// Adds a sample; true once net progress reaches one circumference.
  bool add(Vec2 sensor);
  double progress() const { return progress_; }
  bool complete() const { return progress_ >= circumference_; }

 private:
  const PolygonMap* map_;
  double circumference_;
  double last_arclength_;
  double progress_ = 0.0;
};

/// Draws a start pose with both robot and sensor strictly inside the map.
Pose random_interior_pose(const PolygonMap& map, const LeverArm& arm, Rng& rng);

/// One closed-loop replication. Deterministic given (cfg, map, seed, stage).
TrialRecord run_trial(const SimConfig& cfg, const PolygonMap& map, std::uint64_t seed,
                      TrialStage stage = TrialStage::Search);
TrialRecord run_trial(const SimConfig& cfg, std::uint64_t seed, TrialStage stage = TrialStage::Search);

/// MSE and mean velocity over the first completed loop, measured from the
/// sensor's first boundary crossing; nullopt when no loop was completed.
std::optional<LoopMetrics> wall_follow_metrics(const TrialRecord& record, const PolygonMap& map, double frequency);

}  // namespace binoloc
