#pragma once

#include <span>
#include <string>
#include <vector>

#include "ktt/geometry.hpp"

namespace ktt {

struct Sample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  [[nodiscard]] Point p() const noexcept { return {x, y}; }
  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Timestamped 2D samples with strictly increasing time. Immutable after
/// construction.
class Trajectory {
 public:
  inline static constexpr std::size_t kMinSamples = 4;

  /// Validates finiteness, count and strict time ordering.
  explicit Trajectory(std::vector<Sample> samples, std::string meta = {});

  /// Like the constructor, but duplicated timestamps are collapsed to their
  /// mean position (with a warning) instead of being rejected.
  static Trajectory from_raw(std::vector<Sample> samples, std::string meta = {});

  [[nodiscard]] std::span<const Sample> samples() const noexcept { return samples_; }
  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
  [[nodiscard]] const Sample& operator[](std::size_t i) const noexcept { return samples_[i]; }
  [[nodiscard]] const std::string& meta() const noexcept { return meta_; }
  [[nodiscard]] double t_first() const noexcept { return samples_.front().t; }
  [[nodiscard]] double t_last() const noexcept { return samples_.back().t; }
  [[nodiscard]] std::vector<double> times() const;

  /// Polyline length through the samples.
  [[nodiscard]] double path_length() const noexcept;

  /// True when consecutive time steps agree to `rel_tol` of the mean step.
  [[nodiscard]] bool is_uniform(double rel_tol = 1e-6) const noexcept;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<Sample> samples_;
  std::string meta_;
};

struct SpeedProfile {
  std::vector<double> t;
  std::vector<double> v;
};

/// Vector velocity on a time grid.
struct VelocitySeries {
  std::vector<double> t;
  std::vector<double> vx;
  std::vector<double> vy;

  [[nodiscard]] SpeedProfile speed() const;
};

/// Natural cubic spline through (x[i], y[i]) with strictly increasing x.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y);
  [[nodiscard]] double operator()(double x) const;

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

/// Grid over [t_begin, t_end] with round((t_end - t_begin) * rate) steps (at
/// least 3); both endpoints are included exactly.
std::vector<double> uniform_grid(double t_begin, double t_end, double rate);

/// Resamples onto a uniform grid spanning [t_first, t_last]. The step is
/// (t_last - t_first) / round(duration * rate) so both endpoints are kept.
Trajectory resample_uniform(const Trajectory& traj, double rate);

/// Zero-phase second-order Butterworth low-pass (forward and backward pass
/// with odd-reflection padding).
std::vector<double> lowpass_zero_phase(std::span<const double> signal, double rate, double cutoff);

/// Centered differences, one-sided at the endpoints.
std::vector<double> differentiate(std::span<const double> values, double dt);

/// Vector velocity by finite differences on a uniform trajectory, optionally
/// after zero-phase low-pass filtering (cutoff <= 0 disables filtering).
VelocitySeries velocity_series(const Trajectory& traj, double smooth_cutoff = 0.0);

/// Speed of the low-pass filtered trajectory. Requires uniform sampling and
/// 0 < smooth_cutoff < rate / 2.
SpeedProfile speed_profile(const Trajectory& traj, double smooth_cutoff = 10.0);

}  // namespace ktt
