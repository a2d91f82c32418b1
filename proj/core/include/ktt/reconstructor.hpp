#pragma once

#include <span>
#include <vector>

#include "ktt/kernels.hpp"
#include "ktt/link.hpp"
#include "ktt/trajectory.hpp"

namespace ktt {

/// A link traversed under a velocity kernel. The kernel's D always equals the
/// fitted segment length.
struct Stroke {
  KernelParams kernel;
  LinkSpec link;
  ClothoidSegment segment;

  /// Fits the link and ties kernel.D to the resulting length.
  static Stroke make(KernelParams kernel, const LinkSpec& link);
};

/// Start point plus strokes chained through their virtual target points.
struct ActionPlan {
  Point start_point;
  std::vector<Stroke> strokes;

  /// Throws InvalidInput when a link does not start where the previous ended.
  void validate() const;
  /// Last virtual target point (start_point for an empty plan).
  [[nodiscard]] Point end_point() const noexcept;
};

enum class TangentMode {
  LinkTangent,        // direction of the link at the stroke's current arc length
  InterpolatedAngle,  // theta_s + (theta_e - theta_s) * s / L
};

struct ReconstructOptions {
  TangentMode tangent = TangentMode::LinkTangent;
};

/// Arc length travelled along the stroke's link at time t:
/// min(L, cumulative(t) * L / D).
double arclength_position(const Stroke& stroke, double t);

/// Displacement of one stroke from its link origin at time t.
Point stroke_displacement(const Stroke& stroke, double t);

/// Vector sum of the strokes' velocities.
VelocitySeries reconstruct_velocity(const ActionPlan& plan, std::span<const double> times,
                                    const ReconstructOptions& opts = {});

SpeedProfile reconstruct_speed(const ActionPlan& plan, std::span<const double> times,
                               const ReconstructOptions& opts = {});

/// start_point + sum_j (point_at(segment_j, s_j(t)) - origin_j).
std::vector<Point> reconstruct_positions(const ActionPlan& plan, std::span<const double> times);

/// As reconstruct_positions, packaged as a trajectory (needs >= 4 sorted times).
Trajectory reconstruct_trajectory(const ActionPlan& plan, std::span<const double> times);

}  // namespace ktt
