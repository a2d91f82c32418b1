#include "ktt/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ktt/error.hpp"
#include "ktt/log.hpp"

namespace ktt {
namespace {

struct Candidate {
  std::size_t index;
  double depth;  // speed at the minimum
};

// Topographic prominence of a minimum: how far the speed must rise before a
// lower value is reached on each side, taking the smaller side.
double prominence(const std::vector<double>& v, std::size_t i) {
  double left_peak = v[i];
  for (std::size_t k = i; k-- > 0;) {
    if (v[k] < v[i]) break;
    left_peak = std::max(left_peak, v[k]);
  }
  double right_peak = v[i];
  for (std::size_t k = i + 1; k < v.size(); ++k) {
    if (v[k] < v[i]) break;
    right_peak = std::max(right_peak, v[k]);
  }
  return std::min(left_peak, right_peak) - v[i];
}

// Point at arc-length fraction f along samples [i0, i1].
Point point_along(const Trajectory& traj, std::size_t i0, std::size_t i1, const std::vector<double>& cum, double f) {
  const double target = f * cum.back();
  auto it = std::lower_bound(cum.begin(), cum.end(), target);
  std::size_t k = static_cast<std::size_t>(std::distance(cum.begin(), it));
  if (k == 0) return traj[i0].p();
  if (k >= cum.size()) return traj[i1].p();
  const double seg = cum[k] - cum[k - 1];
  const double w = seg > 0 ? (target - cum[k - 1]) / seg : 0.0;
  const Point a = traj[i0 + k - 1].p();
  const Point b = traj[i0 + k].p();
  return a + w * (b - a);
}

// Tangent at P of the circle through P, Q, R (a = Q - P, b = R - P). The
// combination |b|^2 a - |a|^2 b is perpendicular to the radius at P and
// degenerates to the chord direction for collinear points.
Point circle_tangent(Point a, Point b) {
  const double na = dot(a, a);
  const double nb = dot(b, b);
  Point t = nb * a - na * b;
  const double scale = norm(t);
  if (!(scale > 1e-12 * std::sqrt(na * nb) * (std::sqrt(na) + std::sqrt(nb)))) return b;
  return t;
}

}  // namespace

std::vector<SalientPoint> find_salient_points(const SpeedProfile& sp, double min_prominence, double min_gap) {
  const std::size_t n = sp.v.size();
  if (n < 4 || sp.t.size() != n) throw Error(ErrorCode::InvalidInput, "speed profile needs at least 4 samples");
  const double vmax = *std::max_element(sp.v.begin(), sp.v.end());
  const double threshold = min_prominence * vmax;

  std::vector<Candidate> candidates;
  for (std::size_t i = 1; i + 1 < n;) {
    // Flat runs count as one minimum located at their middle.
    std::size_t j = i;
    while (j + 1 < n && sp.v[j + 1] == sp.v[i]) ++j;
    if (j + 1 < n && sp.v[i - 1] > sp.v[i] && sp.v[j + 1] > sp.v[i]) {
      const std::size_t mid = (i + j) / 2;
      if (vmax > 0 && prominence(sp.v, mid) >= threshold) candidates.push_back({mid, sp.v[mid]});
    }
    i = j + 1;
  }

  // Deepest minima win when two are closer than min_gap.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.depth < b.depth; });
  const double t_first = sp.t.front();
  const double t_last = sp.t.back();
  std::vector<std::size_t> accepted;
  for (const auto& c : candidates) {
    const double tc = sp.t[c.index];
    if (tc - t_first < min_gap || t_last - tc < min_gap) continue;
    const bool clear = std::all_of(accepted.begin(), accepted.end(),
                                   [&](std::size_t a) { return std::abs(sp.t[a] - tc) >= min_gap; });
    if (clear) accepted.push_back(c.index);
  }
  std::sort(accepted.begin(), accepted.end());

  std::vector<SalientPoint> out;
  out.push_back({0, sp.t.front(), {}});
  for (std::size_t i : accepted) out.push_back({i, sp.t[i], {}});
  out.push_back({n - 1, sp.t.back(), {}});
  return out;
}

std::vector<SalientPoint> find_salient_points(const Trajectory& traj, const SpeedProfile& sp, double min_prominence,
                                              double min_gap) {
  if (traj.size() != sp.v.size()) throw Error(ErrorCode::InvalidInput, "trajectory and speed profile grids differ");
  auto out = find_salient_points(sp, min_prominence, min_gap);
  for (auto& s : out) s.p = traj[s.index].p();
  return out;
}

AngleEstimate estimate_angles(const Trajectory& traj, const SalientPoint& sp_prev, const SalientPoint& sp) {
  if (!(sp_prev.index < sp.index) || sp.index >= traj.size())
    throw Error(ErrorCode::InvalidInput, "salient points out of order or outside the trajectory");
  const std::size_t i0 = sp_prev.index;
  const std::size_t i1 = sp.index;
  std::vector<double> cum(i1 - i0 + 1, 0.0);
  for (std::size_t k = i0 + 1; k <= i1; ++k) cum[k - i0] = cum[k - i0 - 1] + norm(traj[k].p() - traj[k - 1].p());

  AngleEstimate est;
  const Point p_start = traj[i0].p();
  const Point p_end = traj[i1].p();
  if (cum.back() > 0.0) {
    est.mp = point_along(traj, i0, i1, cum, 0.5);
    est.mp1 = point_along(traj, i0, i1, cum, 0.25);
    est.mp2 = point_along(traj, i0, i1, cum, 0.75);
  } else {
    est.mp = est.mp1 = est.mp2 = p_start;
  }

  if (i1 - i0 - 1 < 5) {
    est.fallback = true;
    std::ostringstream msg;
    msg << "stroke between samples " << i0 << " and " << i1
        << " has fewer than 5 interior samples; using finite-difference tangents";
    log::warn(msg.str());
    est.theta_s = heading(traj[i0 + 1].p() - p_start);
    est.theta_e = heading(p_end - traj[i1 - 1].p());
    return est;
  }

  Point ts = circle_tangent(est.mp1 - p_start, est.mp - p_start);
  if (dot(ts, est.mp1 - p_start) < 0.0) ts = -1.0 * ts;
  Point te = circle_tangent(est.mp2 - p_end, est.mp - p_end);
  if (dot(te, p_end - est.mp2) < 0.0) te = -1.0 * te;
  est.theta_s = heading(ts);
  est.theta_e = heading(te);
  return est;
}

std::vector<StrokeSeed> seed_strokes(const Trajectory& traj, const SpeedProfile& sp,
                                     const std::vector<SalientPoint>& salient, const SegmentationConfig& cfg) {
  if (salient.size() < 2) throw Error(ErrorCode::InvalidInput, "need at least two salient points");
  if (traj.size() != sp.v.size()) throw Error(ErrorCode::InvalidInput, "trajectory and speed profile grids differ");

  struct Lobe {
    double area, m1, m2;
  };
  auto lobe_stats = [&](std::size_t i0, std::size_t i1) {
    // Moments about the lobe's first sample; m1 is shifted back afterwards.
    Lobe l{0.0, 0.0, 0.0};
    const double ref = sp.t[i0];
    for (std::size_t k = i0 + 1; k <= i1; ++k) {
      const double dt = sp.t[k] - sp.t[k - 1];
      const double a = sp.v[k - 1];
      const double b = sp.v[k];
      const double ta = sp.t[k - 1] - ref;
      const double tb = sp.t[k] - ref;
      l.area += 0.5 * dt * (a + b);
      l.m1 += 0.5 * dt * (a * ta + b * tb);
      l.m2 += 0.5 * dt * (a * ta * ta + b * tb * tb);
    }
    return l;
  };

  double total_area = 0.0;
  std::vector<Lobe> lobes;
  for (std::size_t j = 1; j < salient.size(); ++j) {
    lobes.push_back(lobe_stats(salient[j - 1].index, salient[j].index));
    total_area += lobes.back().area;
  }

  std::vector<StrokeSeed> seeds;
  for (std::size_t j = 1; j < salient.size(); ++j) {
    const Lobe& l = lobes[j - 1];
    if (!(l.area > 1e-9 * total_area) || !(l.area > 0.0)) {
      std::ostringstream msg;
      msg << "dropping zero-area lobe between t=" << salient[j - 1].t << " and t=" << salient[j].t;
      log::warn(msg.str());
      continue;
    }
    StrokeSeed s;
    s.sp_prev = salient[j - 1];
    s.sp = salient[j];
    s.sp_prev.p = traj[s.sp_prev.index].p();
    s.sp.p = traj[s.sp.index].p();
    const double duration = s.sp.t - s.sp_prev.t;
    s.t0 = s.sp_prev.t - cfg.anticipation * duration;
    if (j >= 2) s.t0 = std::max(s.t0, salient[j - 2].t);
    s.lobe_end = s.sp.t;
    s.D_raw = l.area;
    const double M = l.m1 / l.area;
    s.moments = {sp.t[salient[j - 1].index] + M, std::max(l.m2 / l.area - M * M, 0.0)};
    const AngleEstimate a = estimate_angles(traj, s.sp_prev, s.sp);
    s.mp = a.mp;
    s.mp1 = a.mp1;
    s.mp2 = a.mp2;
    s.theta_s = a.theta_s;
    s.theta_e = a.theta_e;
    seeds.push_back(s);
  }
  return seeds;
}

}  // namespace ktt
