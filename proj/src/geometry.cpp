#include "binoloc/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "binoloc/angles.hpp"

namespace binoloc {

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c)
{
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p)
{
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2)
{
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

double signed_area(const std::vector<Vec2>& v)
{
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

}  // namespace

OrientationProfile::OrientationProfile(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values))
{
  if (values_.empty() || breakpoints_.size() != values_.size() + 1)
    throw std::invalid_argument("orientation profile needs n values and n+1 breakpoints");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] > breakpoints_[i - 1]))
      throw std::invalid_argument("orientation profile breakpoints must be strictly increasing");
}

double OrientationProfile::value_at(double arclength) const
{
  // First breakpoint strictly greater than the query; the segment before it owns the query.
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), arclength);
  if (it == breakpoints_.begin()) return values_.front();
  const auto seg = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return values_[std::min(seg, values_.size() - 1)];
}

double OrientationProfile::total_length() const { return breakpoints_.back() - breakpoints_.front(); }

OrientationProfile OrientationProfile::from_polyline(const std::vector<Vec2>& points)
{
  std::vector<double> breaks{0.0};
  std::vector<double> values;
  double prev_heading = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const Vec2 edge = points[i] - points[i - 1];
    const double len = norm(edge);
    if (!(len > 0.0)) continue;
    const double heading = heading_of(edge);
    if (values.empty()) {
      values.push_back(0.0);
    } else {
      values.push_back(values.back() + angle_diff(heading, prev_heading));
    }
    prev_heading = heading;
    breaks.push_back(breaks.back() + len);
  }
  if (values.empty()) throw std::invalid_argument("polyline needs at least two distinct points");
  return OrientationProfile(std::move(breaks), std::move(values));
}

PolygonMap::PolygonMap(std::vector<Vec2> vertices, std::string name)
    : original_(vertices), name_(std::move(name))
{
  for (const Vec2& v : vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw std::invalid_argument("map vertex is not finite");

  for (const Vec2& v : vertices) {
    if (!vertices_.empty() && vertices_.back() == v) {
      warnings_.push_back("merged duplicate vertex (" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")");
      continue;
    }
    vertices_.push_back(v);
  }
  while (vertices_.size() > 1 && vertices_.back() == vertices_.front()) {
    warnings_.push_back("merged closing vertex equal to the first vertex");
    vertices_.pop_back();
  }
  const std::size_t n = vertices_.size();
  if (n < 3) throw std::invalid_argument("map needs at least 3 distinct vertices");

  const double area = signed_area(vertices_);
  if (area == 0.0) throw std::invalid_argument("map polygon has zero area");
  if (area < 0.0) {
    std::reverse(vertices_.begin() + 1, vertices_.end());
    reversed_ = true;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i], b = vertices_[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 c = vertices_[j], d = vertices_[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges share one vertex; they must not fold back onto each other.
        const Vec2 shared = (j == i + 1) ? b : a;
        const Vec2 u = ((j == i + 1) ? a : b) - shared;
        const Vec2 w = ((j == i + 1) ? d : c) - shared;
        if (cross(u, w) == 0.0 && dot(u, w) > 0.0)
          throw std::invalid_argument("map polygon folds back on itself at vertex");
        continue;
      }
      if (segments_intersect(a, b, c, d)) throw std::invalid_argument("map polygon is not simple");
    }
  }

  edge_lengths_.resize(n);
  vertex_arclength_.resize(n);
  double acc = 0.0;
  min_ = max_ = vertices_.front();
  for (std::size_t i = 0; i < n; ++i) {
    vertex_arclength_[i] = acc;
    edge_lengths_[i] = distance(vertices_[i], vertices_[(i + 1) % n]);
    acc += edge_lengths_[i];
    min_ = {std::min(min_.x, vertices_[i].x), std::min(min_.y, vertices_[i].y)};
    max_ = {std::max(max_.x, vertices_[i].x), std::max(max_.y, vertices_[i].y)};
  }
  circumference_ = acc;
}

bool point_in_map(const PolygonMap& map, Vec2 p)
{
  const auto& v = map.vertices();
  const std::size_t n = v.size();
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % n];
    const double side = cross(b - a, p - a);
    if (side == 0.0 && on_segment(a, b, p)) return true;
    if (a.y <= p.y) {
      if (b.y > p.y && side > 0.0) ++winding;
    } else if (b.y <= p.y && side < 0.0) {
      --winding;
    }
  }
  return winding != 0;
}

BoundaryPoint closest_boundary_point(const PolygonMap& map, Vec2 p)
{
  const auto& v = map.vertices();
  const std::size_t n = v.size();
  BoundaryPoint best;
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[i];
    const Vec2 ab = v[(i + 1) % n] - a;
    const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
    const Vec2 q = a + t * ab;
    const Vec2 diff = p - q;
    const double sq = dot(diff, diff);
    if (sq < best_sq) {
      best_sq = sq;
      best.point = q;
      best.edge = i;
      best.arclength = map.vertex_arclength(i) + t * map.edge_length(i);
    }
  }
  best.distance = std::sqrt(best_sq);
  if (best.arclength >= map.circumference()) best.arclength -= map.circumference();
  return best;
}

OrientationProfile build_orientation_profile(const PolygonMap& map)
{
  const auto& v = map.vertices();
  std::vector<Vec2> doubled;
  doubled.reserve(2 * v.size() + 1);
  doubled.insert(doubled.end(), v.begin(), v.end());
  doubled.insert(doubled.end(), v.begin(), v.end());
  doubled.push_back(v.front());
  for (std::size_t i = 1; i < doubled.size(); ++i)
    if (doubled[i] == doubled[i - 1]) throw std::invalid_argument("map has a zero-length edge");
  return OrientationProfile::from_polyline(doubled);
}

OrientationProfile shifted_vertex_profile(const OrientationProfile& profile, std::size_t n_vertices,
                                          std::size_t doubled_index)
{
  if (profile.segment_count() != 2 * n_vertices)
    throw std::invalid_argument("profile does not span the doubled vertex list");
  if (doubled_index < n_vertices || doubled_index >= 2 * n_vertices)
    throw std::out_of_range("vertex index must lie in the second copy of the doubled list");
  const double l_i = profile.breakpoints()[doubled_index];
  const double phi_in = profile.values()[doubled_index - 1];
  std::vector<double> breaks(profile.breakpoints());
  std::vector<double> values(profile.values());
  for (double& b : breaks) b -= l_i;
  for (double& val : values) val -= phi_in;
  return OrientationProfile(std::move(breaks), std::move(values));
}

}  // namespace binoloc
