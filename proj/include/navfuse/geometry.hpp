#pragma once

#include <cmath>

namespace navfuse {

inline constexpr double kPi = 3.14159265358979323846;

// Planar point/vector in the robot's bird's-eye frame: x lateral
// (right-positive), z forward. Also used for world-frame plan coordinates.
struct Vec2 {
  double x{0.0};
  double z{0.0};

  Vec2 operator+(const Vec2& o) const { return {x + o.x, z + o.z}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, z - o.z}; }
  Vec2 operator*(double s) const { return {x * s, z * s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    z += o.z;
    return *this;
  }
  double dot(const Vec2& o) const { return x * o.x + z * o.z; }
  double norm() const { return std::hypot(x, z); }
};

// Camera-frame direction: x right, y up, z forward.
struct Vec3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }
};

// World pose. Heading theta is measured CCW from the world +x axis, so the
// forward unit vector is (cos theta, sin theta) in (x, z).
struct Pose {
  double x{0.0};
  double z{0.0};
  double theta{0.0};
};

// Normalizes to (-pi, pi].
inline double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

inline Vec2 robot_to_world(const Pose& pose, const Vec2& p) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  // forward = (c, s), right = (s, -c)
  return {pose.x + p.z * c + p.x * s, pose.z + p.z * s - p.x * c};
}

inline Vec2 world_to_robot(const Pose& pose, const Vec2& w) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double dx = w.x - pose.x;
  const double dz = w.z - pose.z;
  return {dx * s - dz * c, dx * c + dz * s};
}

// Bearing from the forward axis, positive to the right: atan2(x, z).
inline double bearing_of(const Vec2& p) { return std::atan2(p.x, p.z); }

// Unit direction at a given bearing (right-positive).
inline Vec2 direction_from_bearing(double bearing) {
  return {std::sin(bearing), std::cos(bearing)};
}

// Angle in [0, pi] between two nonzero planar vectors.
inline double angle_between(const Vec2& a, const Vec2& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  double c = a.dot(b) / (na * nb);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c);
}

// Distance from point p to segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 == 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return (p - (a + ab * t)).norm();
}

}  // namespace navfuse
