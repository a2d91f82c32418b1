#include "ktt/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "ktt/error.hpp"

namespace ktt {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

// Kernel of the given kind with a randomized shape, before time placement.
KernelParams unit_kernel(KernelKind kind, Rng& rng) {
  switch (kind) {
    case KernelKind::Gaussian: return KernelParams::gaussian(1.0, 0.0, 1.0);
    case KernelKind::Lognormal: return KernelParams::lognormal(1.0, 0.0, 0.0, rng.uniform(0.04, 0.16));
    case KernelKind::Gamma: return KernelParams::gamma(1.0, 0.0, rng.uniform(3.0, 8.0), 1.0);
    case KernelKind::Beta: return KernelParams::beta(1.0, 0.0, rng.uniform(2.0, 5.0), rng.uniform(2.0, 5.0), 1.0);
    case KernelKind::DoubleBoundedLognormal:
      return KernelParams::dbl(1.0, 0.0, rng.uniform(-0.4, 0.4), rng.uniform(0.1, 0.4), 1.0);
    case KernelKind::GEV: return KernelParams::gev(1.0, 0.0, rng.uniform(-0.2, 0.2), 1.0, 0.3);
  }
  return KernelParams::gaussian(1.0, 0.0, 1.0);
}

// Stretches the time axis about the kernel's origin by c and shifts it by dt.
KernelParams retime(KernelParams k, double c, double dt) {
  switch (k.kind) {
    case KernelKind::Gaussian:
      k.shape[0] = k.shape[0] * c + dt;
      k.shape[1] *= c * c;
      return k;
    case KernelKind::Lognormal: k.shape[0] += std::log(c); break;
    case KernelKind::Gamma: k.shape[1] /= c; break;
    case KernelKind::Beta: k.shape[2] *= c; break;
    case KernelKind::DoubleBoundedLognormal: k.shape[2] = k.t0 + c * (k.shape[2] - k.t0) + dt; break;
    case KernelKind::GEV:
      k.shape[1] *= c;
      k.shape[2] *= c;
      break;
  }
  k.t0 += dt;
  return k;
}

// Places the kernel so its [0.1%, 99.9%] mass interval is [start, start + duration].
KernelParams place(KernelParams k, double start, double duration) {
  const double lo = quantile(k, 1e-3);
  const double hi = quantile(k, 1.0 - 1e-3);
  k = retime(k, duration / (hi - lo), 0.0);
  return retime(k, 1.0, start - quantile(k, 1e-3));
}

double chord_heading(Point a, Point b) { return heading(b - a); }

SyntheticSample synthesize(ActionPlan plan, double rate) {
  plan.validate();
  const Interval span = plan_time_span(plan);
  const auto times = uniform_grid(span.lo, span.hi, rate);
  Trajectory traj = reconstruct_trajectory(plan, times);
  return {std::move(plan), Trajectory(std::vector<Sample>(traj.samples().begin(), traj.samples().end()), "synthetic")};
}

}  // namespace

Interval plan_time_span(const ActionPlan& plan) {
  if (plan.strokes.empty()) throw Error(ErrorCode::InvalidInput, "plan has no strokes");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : plan.strokes) {
    lo = std::min(lo, quantile(s.kernel, 1e-6));
    hi = std::max(hi, quantile(s.kernel, 1.0 - 1e-9));
  }
  return {lo, hi};
}

SyntheticSample generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_strokes < 1) throw Error(ErrorCode::InvalidInput, "n_strokes must be >= 1");
  if (!(spec.overlap_fraction >= 0.0 && spec.overlap_fraction <= 0.6))
    throw Error(ErrorCode::InvalidInput, "overlap_fraction must lie in [0, 0.6]");
  if (!(spec.rate > 0.0)) throw Error(ErrorCode::InvalidInput, "rate must be > 0");

  Rng rng(spec.seed);
  std::vector<Point> tp{{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)}};
  for (int j = 0; j < spec.n_strokes; ++j) {
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      const Point candidate{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
      if (norm(candidate - tp.back()) >= 0.1) {
        tp.push_back(candidate);
        placed = true;
      }
    }
    if (!placed)
      throw Error(ErrorCode::GenerationFailure,
                  "no target point with chord >= 0.1 after 100 attempts (stroke " + std::to_string(j) + ")");
  }

  ActionPlan plan{tp.front(), {}};
  double start = 0.0;
  for (int j = 0; j < spec.n_strokes; ++j) {
    const Point a = tp[static_cast<std::size_t>(j)];
    const Point b = tp[static_cast<std::size_t>(j) + 1];
    const double chord = chord_heading(a, b);
    LinkSpec link{spec.link_kind, a, b, chord + rng.uniform(-0.7, 0.7), chord + rng.uniform(-0.7, 0.7)};
    if (link.kind == LinkKind::Arc) link.theta_e = 2.0 * chord - link.theta_s;
    const double duration = rng.uniform(0.2, 0.4);
    if (j > 0) start -= spec.overlap_fraction * duration;
    const KernelParams k = place(unit_kernel(spec.kernel_kind, rng), start, duration);
    plan.strokes.push_back(Stroke::make(k, link));
    start += duration;
  }
  return synthesize(std::move(plan), spec.rate);
}

SyntheticSample generate_s_curve(KernelKind kind, std::uint64_t seed, double rate) {
  Rng rng(seed);
  const double lean = (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * rng.uniform(0.4, 0.8);
  const LinkSpec link{LinkKind::Clothoid, {0.0, 0.0}, {1.0, 0.0}, lean, lean};
  const KernelParams k = place(unit_kernel(kind, rng), 0.0, rng.uniform(0.25, 0.4));
  return synthesize(ActionPlan{{0.0, 0.0}, {Stroke::make(k, link)}}, rate);
}

}  // namespace ktt
