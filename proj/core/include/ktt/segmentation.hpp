#pragma once

#include <cstddef>
#include <vector>

#include "ktt/kernels.hpp"
#include "ktt/trajectory.hpp"

namespace ktt {

struct SalientPoint {
  std::size_t index = 0;
  double t = 0.0;
  Point p;
};

struct SegmentationConfig {
  double min_prominence = 0.05;  // fraction of the profile's peak speed
  double min_gap = 0.04;         // seconds between accepted minima
  double anticipation = 0.2;     // t0 lead, as a fraction of the lobe duration
};

struct AngleEstimate {
  double theta_s = 0.0;
  double theta_e = 0.0;
  Point mp;   // half arc length between the salient points
  Point mp1;  // quarter
  Point mp2;  // three quarters
  bool fallback = false;  // finite-difference tangents were used
};

/// Initial per-stroke estimates delimited by two consecutive salient points.
struct StrokeSeed {
  SalientPoint sp_prev;
  SalientPoint sp;
  Point mp, mp1, mp2;
  double theta_s = 0.0;
  double theta_e = 0.0;
  double t0 = 0.0;
  double lobe_end = 0.0;
  double D_raw = 0.0;
  Moments moments;  // absolute time
};

/// First sample, every speed minimum that passes the prominence and gap
/// filters, and last sample, in time order. Positions are left at the origin;
/// see the overload taking the trajectory.
std::vector<SalientPoint> find_salient_points(const SpeedProfile& sp, double min_prominence = 0.05,
                                              double min_gap = 0.04);

/// Same, with positions taken from `traj` (which must share the profile's grid).
std::vector<SalientPoint> find_salient_points(const Trajectory& traj, const SpeedProfile& sp,
                                              double min_prominence = 0.05, double min_gap = 0.04);

/// Start and end tangents of the stroke between two salient points, each from
/// the circle through the salient point and two arc-length quantile points.
AngleEstimate estimate_angles(const Trajectory& traj, const SalientPoint& sp_prev, const SalientPoint& sp);

/// One seed per pair of consecutive salient points; zero-area lobes are
/// dropped with a warning.
std::vector<StrokeSeed> seed_strokes(const Trajectory& traj, const SpeedProfile& sp,
                                     const std::vector<SalientPoint>& salient, const SegmentationConfig& cfg = {});

}  // namespace ktt
