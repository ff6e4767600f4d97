#include "binoloc/land_nav.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace binoloc {

void LandNavParams::validate() const
{
  if (!(L_min > 0.0)) throw std::invalid_argument("land_nav.L_min must be > 0");
  if (!(e_max > 0.0)) throw std::invalid_argument("land_nav.e_max must be > 0");
  if (!(c_min > 0.0)) throw std::invalid_argument("land_nav.c_min must be > 0");
  if (!(U_min > 0.0 && U_min <= 1.0)) throw std::invalid_argument("land_nav.U_min must lie in (0, 1]");
  if (samples < 2) throw std::invalid_argument("land_nav.N must be >= 2");
}

LandNavParams land_nav_preset(std::string_view name)
{
  if (name == "map1") return {0.5, 0.01, 0.2, 0.5, 512};
  if (name == "map2") return {0.5, 0.01, 0.3, 0.4, 512};
  throw std::invalid_argument("unknown land_nav preset: " + std::string(name));
}

double line_fit_error(std::span<const Vec2> points)
{
  if (points.size() < 3) return 0.0;
  const Vec2 a = points.front();
  const Vec2 chord = points.back() - a;
  const double len = norm(chord);
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const Vec2 rel = points[i] - a;
    sum += len > 0.0 ? std::fabs(cross(chord, rel)) / len : norm(rel);
  }
  return sum / static_cast<double>(points.size() - 2);
}

DominantPointTrack::DominantPointTrack(Vec2 first, double max_length)
    : dps_{first}, pending_{first}, max_length_(max_length)
{
}

std::optional<Vec2> DominantPointTrack::update(Vec2 x, const LandNavParams& params)
{
  if (dps_.empty()) {
    dps_.push_back(x);
    pending_.assign(1, x);
    return std::nullopt;
  }
  if (distance(dps_.back(), x) < params.L_min) {
    pending_.push_back(x);
    return std::nullopt;
  }
  scratch_.assign(pending_.begin(), pending_.end());
  scratch_.push_back(x);
  if (line_fit_error(scratch_) < params.e_max) {
    pending_.swap(scratch_);
    return std::nullopt;
  }
  // The last point that still fit the line becomes a DP.
  const Vec2 dp = pending_.back();
  length_ += distance(dps_.back(), dp);
  dps_.push_back(dp);
  pending_.assign({dp, x});
  evict(max_length_);
  return dp;
}

void DominantPointTrack::evict(double max_length)
{
  if (length_ <= max_length) return;
  while (dps_.size() > 2 && length_ > max_length) {
    dps_.pop_front();
    // Re-summed rather than decremented so the length matches a fresh profile build bit for bit.
    length_ = 0.0;
    for (std::size_t i = 1; i < dps_.size(); ++i) length_ += distance(dps_[i - 1], dps_[i]);
  }
}

std::vector<Vec2> DominantPointTrack::path_points() const
{
  return {dps_.begin(), dps_.end()};
}

OrientationProfile path_orientation_profile(const DominantPointTrack& track)
{
  if (track.dominant_points().size() < 2) throw std::invalid_argument("track needs two dominant points");
  return OrientationProfile::from_polyline(track.path_points());
}

std::vector<double> correlation_errors(const OrientationProfile& boundary, std::size_t n_vertices,
                                       const OrientationProfile& path, double path_length, std::size_t samples)
{
  if (boundary.segment_count() != 2 * n_vertices)
    throw std::invalid_argument("boundary profile does not span the doubled vertex list");
  if (samples == 0) throw std::invalid_argument("correlation needs at least one sample");
  const double circumference = 0.5 * boundary.total_length();
  if (!(path_length > 0.0)) throw std::domain_error("path too short for correlation");
  if (path_length > circumference * (1.0 + 1e-12)) throw std::domain_error("path longer than the circumference");

  std::vector<double> xs(samples);
  std::vector<double> path_vals(samples);
  const double step = path_length / static_cast<double>(samples);
  // Both sides are taken relative to the heading that arrives at the end point.
  const double path_anchor = path.values().back();
  for (std::size_t k = 0; k < samples; ++k) {
    xs[k] = -path_length + (static_cast<double>(k) + 0.5) * step;
    path_vals[k] = path.value_at(xs[k] + path_length) - path_anchor;
  }

  std::vector<double> errors(n_vertices);
  for (std::size_t p = 0; p < n_vertices; ++p) {
    const std::size_t j = n_vertices + p;
    const double l_j = boundary.breakpoints()[j];
    const double phi_in = boundary.values()[j - 1];
    double sum = 0.0;
    for (std::size_t k = 0; k < samples; ++k)
      sum += std::fabs(boundary.value_at(l_j + xs[k]) - phi_in - path_vals[k]);
    errors[p] = sum / static_cast<double>(samples);
  }
  return errors;
}

std::optional<PoseEstimate> try_match(const DominantPointTrack& track, const PolygonMap& map,
                                      const OrientationProfile& boundary, const LandNavParams& params)
{
  const double length = track.accumulated_length();
  if (track.dominant_points().size() < 2 || length < params.U_min * map.circumference() || length <= 0.0) return std::nullopt;
  if (length > map.circumference()) return std::nullopt;

  const auto errors =
      correlation_errors(boundary, map.size(), path_orientation_profile(track), length, params.samples);
  const auto best = std::min_element(errors.begin(), errors.end());
  if (!(*best < params.c_min)) return std::nullopt;

  const auto p = static_cast<std::size_t>(best - errors.begin());
  PoseEstimate est;
  est.vertex_index = p;
  est.position = map.vertex(p);
  est.heading = heading_of(map.vertex(p) - map.vertex(p + map.size() - 1));
  est.c_err = *best;
  return est;
}

std::optional<PoseEstimate> try_match(const DominantPointTrack& track, const PolygonMap& map,
                                      const LandNavParams& params)
{
  return try_match(track, map, build_orientation_profile(map), params);
}

}  // namespace binoloc
