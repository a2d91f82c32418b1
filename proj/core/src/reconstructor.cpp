#include "ktt/reconstructor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ktt/error.hpp"

namespace ktt {

Stroke Stroke::make(KernelParams kernel, const LinkSpec& link) {
  Stroke s{kernel, link, fit_link(link)};
  s.kernel.D = s.segment.L;
  s.kernel.validate();
  return s;
}

void ActionPlan::validate() const {
  Point expected = start_point;
  for (std::size_t j = 0; j < strokes.size(); ++j) {
    const auto& link = strokes[j].link;
    const double scale = std::max({1.0, norm(expected), norm(link.p_start)});
    if (norm(link.p_start - expected) > 1e-9 * scale) {
      std::ostringstream msg;
      msg << "stroke " << j << " does not start at the previous virtual target point";
      throw Error(ErrorCode::InvalidInput, msg.str());
    }
    strokes[j].kernel.validate();
    expected = link.p_end;
  }
}

Point ActionPlan::end_point() const noexcept {
  return strokes.empty() ? start_point : strokes.back().link.p_end;
}

double arclength_position(const Stroke& stroke, double t) {
  const double L = stroke.segment.L;
  const double s = cumulative(stroke.kernel, t) * (L / stroke.kernel.D);
  return std::clamp(s, 0.0, L);
}

Point stroke_displacement(const Stroke& stroke, double t) {
  const double s = arclength_position(stroke, t);
  if (s <= 0.0) return {};
  if (s >= stroke.segment.L) return stroke.link.p_end - stroke.segment.origin;
  return point_at(stroke.segment, s).p - stroke.segment.origin;
}

VelocitySeries reconstruct_velocity(const ActionPlan& plan, std::span<const double> times,
                                    const ReconstructOptions& opts) {
  VelocitySeries out{{times.begin(), times.end()}, std::vector<double>(times.size(), 0.0),
                     std::vector<double>(times.size(), 0.0)};
  for (const auto& stroke : plan.strokes) {
    const double L = stroke.segment.L;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double v = eval(stroke.kernel, times[i]) * (L / stroke.kernel.D);
      if (v == 0.0) continue;
      const double s = arclength_position(stroke, times[i]);
      const double theta = opts.tangent == TangentMode::LinkTangent
                               ? stroke.segment.theta_at(s)
                               : stroke.link.theta_s + (stroke.link.theta_e - stroke.link.theta_s) * (s / L);
      out.vx[i] += v * std::cos(theta);
      out.vy[i] += v * std::sin(theta);
    }
  }
  return out;
}

SpeedProfile reconstruct_speed(const ActionPlan& plan, std::span<const double> times, const ReconstructOptions& opts) {
  return reconstruct_velocity(plan, times, opts).speed();
}

std::vector<Point> reconstruct_positions(const ActionPlan& plan, std::span<const double> times) {
  std::vector<Point> out(times.size(), plan.start_point);
  for (const auto& stroke : plan.strokes) {
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = out[i] + stroke_displacement(stroke, times[i]);
  }
  return out;
}

Trajectory reconstruct_trajectory(const ActionPlan& plan, std::span<const double> times) {
  const auto pts = reconstruct_positions(plan, times);
  std::vector<Sample> samples(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) samples[i] = {times[i], pts[i].x, pts[i].y};
  return Trajectory(std::move(samples), "reconstruction");
}

}  // namespace ktt
