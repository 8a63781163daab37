#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rrrp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Heading of the direction a -> b, degrees in [0, 360).
inline double heading_deg(Vec2 a, Vec2 b) {
  double h = std::atan2(b.y - a.y, b.x - a.x) * 180.0 / M_PI;
  if (h < 0.0) h += 360.0;
  return h;
}

// Closed polyline traversed at constant speed; positions are arc-length
// parameters in [0, length()).  Waypoints are the task / road nodes.
class Tour {
 public:
  Tour() = default;
  explicit Tour(std::vector<Vec2> waypoints) : pts_(std::move(waypoints)) {
    if (pts_.size() < 2) throw std::invalid_argument("tour needs >= 2 waypoints");
    cum_.resize(pts_.size() + 1, 0.0);
    for (size_t i = 0; i < pts_.size(); ++i) {
      size_t j = (i + 1) % pts_.size();
      double d = dist(pts_[i], pts_[j]);
      if (d <= 0.0) throw std::invalid_argument("tour has a zero-length segment");
      cum_[i + 1] = cum_[i] + d;
    }
  }

  const std::vector<Vec2>& waypoints() const { return pts_; }
  size_t size() const { return pts_.size(); }
  double length() const { return cum_.back(); }

  double wrap(double s) const {
    double L = length();
    s = std::fmod(s, L);
    return s < 0.0 ? s + L : s;
  }

  // Arc position of waypoint i.
  double node_arc(size_t i) const { return cum_[i]; }

  Vec2 point_at(double s) const {
    s = wrap(s);
    size_t i = segment_of(s);
    double t = (s - cum_[i]) / (cum_[i + 1] - cum_[i]);
    return pts_[i] + t * (pts_[(i + 1) % pts_.size()] - pts_[i]);
  }

  // Index of the segment [waypoint i, waypoint i+1) containing arc s.
  size_t segment_of(double s) const {
    s = wrap(s);
    size_t lo = 0, hi = pts_.size();
    while (lo + 1 < hi) {
      size_t mid = (lo + hi) / 2;
      if (cum_[mid] <= s) lo = mid; else hi = mid;
    }
    return lo;
  }

  // Heading (degrees) of the segment containing arc s.
  double heading_at(double s) const {
    size_t i = segment_of(s);
    return heading_deg(pts_[i], pts_[(i + 1) % pts_.size()]);
  }

  // Forward arc distance from s to waypoint i (in [0, length)).
  double forward_to_node(double s, size_t i) const {
    double d = node_arc(i) - wrap(s);
    if (d < 0.0) d += length();
    return d;
  }

  // Index of the waypoint the vehicle at arc s is moving toward.  A vehicle
  // sitting exactly on node i is moving toward i+1.
  size_t next_node_index(double s) const {
    return (segment_of(s) + 1) % pts_.size();
  }

 private:
  std::vector<Vec2> pts_;
  std::vector<double> cum_;
};

}  // namespace rrrp
