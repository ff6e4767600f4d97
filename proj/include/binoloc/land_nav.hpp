#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "binoloc/geometry.hpp"

namespace binoloc {

struct LandNavParams {
  double L_min = 0.5;        // m, points closer than this to the last DP never split a line
  double e_max = 0.01;       // m, largest mean line-fit error that still counts as straight
  double c_min = 0.2;        // rad, correlation error needed to accept a match
  double U_min = 0.5;        // fraction of the circumference required before matching
  std::size_t samples = 512; // correlation sample count

  void validate() const;
};

/// Trained parameter sets for the two evaluation maps ("map1", "map2").
LandNavParams land_nav_preset(std::string_view name);

/// Mean perpendicular distance of the interior points to the chord from the
/// first to the last point. Zero for fewer than three points.
double line_fit_error(std::span<const Vec2> points);

/// Odometry path compressed into dominant points (DPs).
class DominantPointTrack {
 public:
  DominantPointTrack() = default;
  /// Starts a track at the first boundary contact. Committed DPs are evicted
  /// from the front whenever their total length exceeds `max_length`.
  explicit DominantPointTrack(Vec2 first, double max_length = std::numeric_limits<double>::infinity());

  bool started() const { return !dps_.empty(); }

  /// Feeds one odometry position; returns the DP committed by this point, if any.
  std::optional<Vec2> update(Vec2 x, const LandNavParams& params);

  const std::deque<Vec2>& dominant_points() const { return dps_; }
  const std::vector<Vec2>& pending() const { return pending_; }
  /// Sum of distances between consecutive committed DPs.
  double accumulated_length() const { return length_; }
  /// Committed DPs, oldest first.
  std::vector<Vec2> path_points() const;

 private:
  void evict(double max_length);

  std::deque<Vec2> dps_;
  std::vector<Vec2> pending_;
  std::vector<Vec2> scratch_;
  double length_ = 0.0;
  double max_length_ = std::numeric_limits<double>::infinity();
};

/// Turning function of the open chain of committed DPs.
/// Throws std::invalid_argument with fewer than two distinct points.
OrientationProfile path_orientation_profile(const DominantPointTrack& track);

/// Correlation error against every map vertex.
///
/// Entry p compares the boundary window ending at vertex p (relative to the
/// heading of the edge arriving at p) with the whole path (relative to the
/// heading of its last segment), both sampled at `samples` evenly spaced cell
/// centres on [-path_length, 0].
/// Throws std::domain_error unless 0 < path_length <= U.
std::vector<double> correlation_errors(const OrientationProfile& boundary, std::size_t n_vertices,
                                       const OrientationProfile& path, double path_length, std::size_t samples);

struct PoseEstimate {
  Vec2 position;             // matched vertex
  double heading = 0.0;      // direction of the edge entering the matched vertex
  double c_err = 0.0;        // correlation error of the match
  std::size_t vertex_index = 0;
};

/// Matches the track against the map once it covers U_min * U. Returns nothing
/// while too short or while no vertex correlates below c_min.
std::optional<PoseEstimate> try_match(const DominantPointTrack& track, const PolygonMap& map,
                                      const OrientationProfile& boundary, const LandNavParams& params);
std::optional<PoseEstimate> try_match(const DominantPointTrack& track, const PolygonMap& map,
                                      const LandNavParams& params);

}  // namespace binoloc
