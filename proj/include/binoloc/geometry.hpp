#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace binoloc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline double heading_of(Vec2 v) { return std::atan2(v.y, v.x); }

/// Piecewise-constant heading as a function of arclength (a turning function).
///
/// Segment k covers [breakpoints[k], breakpoints[k+1]) and carries values[k].
/// Evaluation is right-continuous and clamps outside the covered range, so the
/// value exactly at a breakpoint belongs to the segment that starts there.
class OrientationProfile {
 public:
  OrientationProfile() = default;
  OrientationProfile(std::vector<double> breakpoints, std::vector<double> values);

  double value_at(double arclength) const;
  std::size_t segment_count() const { return values_.size(); }
  double total_length() const;
  double start() const { return breakpoints_.front(); }
  double end() const { return breakpoints_.back(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

  /// Builds the profile of an open polyline: phi_1 = 0, l_1 = 0, each further
  /// segment adds the wrapped turn at the shared vertex. Zero-length segments
  /// are skipped. Throws std::invalid_argument for fewer than two distinct points.
  static OrientationProfile from_polyline(const std::vector<Vec2>& points);

 private:
  std::vector<double> breakpoints_;  // size segment_count() + 1, strictly increasing
  std::vector<double> values_;
};

/// A simple closed polygon with counter-clockwise winding.
class PolygonMap {
 public:
  /// Merges duplicate consecutive vertices, rejects degenerate or
  /// self-intersecting input, and normalizes winding to CCW (keeping the
  /// first vertex first). Throws std::invalid_argument.
  explicit PolygonMap(std::vector<Vec2> vertices, std::string name = {});

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Vec2& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

  /// Edge i runs from vertex(i) to vertex(i + 1).
  double edge_length(std::size_t i) const { return edge_lengths_[i]; }
  /// Arclength of vertex i measured from vertex 0 along the CCW boundary.
  double vertex_arclength(std::size_t i) const { return vertex_arclength_[i]; }
  double circumference() const { return circumference_; }

  const std::string& name() const { return name_; }
  /// Vertex list as given, before merging and winding normalization.
  const std::vector<Vec2>& original_vertices() const { return original_; }
  bool winding_reversed() const { return reversed_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  double min_x() const { return min_.x; }
  double min_y() const { return min_.y; }
  double max_x() const { return max_.x; }
  double max_y() const { return max_.y; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Vec2> original_;
  std::vector<double> edge_lengths_;
  std::vector<double> vertex_arclength_;
  std::vector<std::string> warnings_;
  std::string name_;
  double circumference_ = 0.0;
  bool reversed_ = false;
  Vec2 min_;
  Vec2 max_;
};

/// Inside-or-on-boundary test (winding number with an exact on-edge check).
bool point_in_map(const PolygonMap& map, Vec2 p);

struct BoundaryPoint {
  Vec2 point;
  double distance = 0.0;
  std::size_t edge = 0;
  double arclength = 0.0;  // position along the boundary in [0, U)
};

/// Nearest point on the boundary; ties go to the lowest edge index.
BoundaryPoint closest_boundary_point(const PolygonMap& map, Vec2 p);

/// Boundary turning function over the doubled vertex list, 2n segments spanning 2U.
OrientationProfile build_orientation_profile(const PolygonMap& map);

/// The boundary profile re-anchored at doubled-list vertex `doubled_index`:
/// x -> profile(x + l_i) - phi_{i-1}, i.e. relative to the edge arriving at
/// the vertex. `doubled_index` must lie in [n, 2n).
OrientationProfile shifted_vertex_profile(const OrientationProfile& profile, std::size_t n_vertices,
                                          std::size_t doubled_index);

}  // namespace binoloc
