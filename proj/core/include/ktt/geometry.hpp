#pragma once

#include <cmath>
#include <numbers>

namespace ktt {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double k, Point a) noexcept { return {k * a.x, k * a.y}; }
  friend bool operator==(Point, Point) = default;
};

inline double norm(Point p) noexcept { return std::hypot(p.x, p.y); }
inline double dot(Point a, Point b) noexcept { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) noexcept { return a.x * b.y - a.y * b.x; }
inline double heading(Point p) noexcept { return std::atan2(p.y, p.x); }
inline Point unit(double angle) noexcept { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

}  // namespace ktt
