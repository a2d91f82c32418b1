#include "ktt/extractor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <sstream>

#include "ktt/log.hpp"
#include "ktt/numeric.hpp"

namespace ktt {
namespace {

constexpr double kAngleMargin = 0.05;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Reference {
  std::vector<double> t;
  std::vector<Point> pos;
  std::vector<double> vx, vy;
  double dt = 0.0;
};

Reference make_reference(const Trajectory& uniform) {
  if (!uniform.is_uniform()) throw Error(ErrorCode::InvalidInput, "reference trajectory must be uniformly sampled");
  Reference r;
  r.t = uniform.times();
  r.dt = (r.t.back() - r.t.front()) / static_cast<double>(r.t.size() - 1);
  std::vector<double> x(uniform.size()), y(uniform.size());
  for (std::size_t i = 0; i < uniform.size(); ++i) {
    x[i] = uniform[i].x;
    y[i] = uniform[i].y;
    r.pos.push_back(uniform[i].p());
  }
  r.vx = differentiate(x, r.dt);
  r.vy = differentiate(y, r.dt);
  return r;
}

struct Score {
  double snr_t = kNegInf;
  double snr_v = kNegInf;
  [[nodiscard]] double objective() const { return std::min(snr_t, snr_v); }
  [[nodiscard]] double sum() const { return snr_t + snr_v; }
  [[nodiscard]] bool valid() const { return std::isfinite(snr_t) && std::isfinite(snr_v); }
};

Score score_positions(const Reference& ref, const std::vector<Point>& pos) {
  std::vector<double> x(pos.size()), y(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    x[i] = pos[i].x;
    y[i] = pos[i].y;
  }
  const VelocitySeries orig{ref.t, ref.vx, ref.vy};
  const VelocitySeries recon{ref.t, differentiate(x, ref.dt), differentiate(y, ref.dt)};
  return {snr_t(ref.pos, pos), snr_v(orig, recon)};
}

// Keeps theta within (-pi, pi) of the chord direction, away from the edges.
double sanitize_angle(double theta, Point a, Point b) {
  const double chord = heading(b - a);
  const double lim = std::numbers::pi - kAngleMargin;
  return chord + std::clamp(wrap_angle(theta - chord), -lim, lim);
}

// Spread of a kernel's central mass, comparable to a standard deviation.
double time_spread(const KernelParams& k) { return (quantile(k, 0.9) - quantile(k, 0.1)) / 2.5631; }

std::optional<Stroke> try_make(const KernelParams& kernel, LinkSpec link) {
  try {
    if (!kernel.valid()) return std::nullopt;
    Stroke s = Stroke::make(kernel, link);
    if (link.kind == LinkKind::Arc) s.link.theta_e = s.segment.theta_at(s.segment.L);
    return s;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<Stroke> with_kernel(const Stroke& s, KernelParams kernel) {
  if (!kernel.valid()) return std::nullopt;
  kernel.D = s.segment.L;
  if (!kernel.valid()) return std::nullopt;
  return Stroke{kernel, s.link, s.segment};
}

// A scalar view of one kernel parameter for the line search.
struct Coordinate {
  std::function<double(const KernelParams&)> get;
  std::function<void(KernelParams&, double)> set;
  double half_width = 0.0;
  double lo = kNegInf;
  double hi = std::numeric_limits<double>::infinity();
};

Coordinate linear(std::size_t i, double half_width, double lo = kNegInf,
                  double hi = std::numeric_limits<double>::infinity()) {
  return {[i](const KernelParams& k) { return k.shape[i]; }, [i](KernelParams& k, double v) { k.shape[i] = v; },
          half_width, lo, hi};
}

Coordinate logarithmic(std::size_t i, double half_width) {
  return {[i](const KernelParams& k) { return std::log(k.shape[i]); },
          [i](KernelParams& k, double v) { k.shape[i] = std::exp(v); }, half_width};
}

// Search order: t0, then shape parameters. GEV's location duplicates t0 and
// is left fixed.
std::vector<Coordinate> kernel_coordinates(const KernelParams& k, const ExtractorConfig& cfg, double shrink) {
  const double tw = cfg.time_step * time_spread(k) * shrink;
  const double lw = cfg.log_step * shrink;
  std::vector<Coordinate> c;
  if (k.kind != KernelKind::Gaussian)
    c.push_back({[](const KernelParams& p) { return p.t0; }, [](KernelParams& p, double v) { p.t0 = v; }, tw});
  switch (k.kind) {
    case KernelKind::Gaussian:
      c.push_back(linear(0, tw));
      c.push_back(logarithmic(1, lw));
      break;
    case KernelKind::Lognormal:
      c.push_back(linear(0, lw));
      c.push_back(logarithmic(1, lw));
      break;
    case KernelKind::Gamma:
      c.push_back(logarithmic(0, lw));
      c.push_back(logarithmic(1, lw));
      break;
    case KernelKind::Beta:
      c.push_back(logarithmic(0, lw));
      c.push_back(logarithmic(1, lw));
      c.push_back(logarithmic(2, lw));
      break;
    case KernelKind::DoubleBoundedLognormal:
      c.push_back(linear(0, lw));
      c.push_back(logarithmic(1, lw));
      c.push_back({[](const KernelParams& p) { return std::log(p.shape[2] - p.t0); },
                   [](KernelParams& p, double v) { p.shape[2] = p.t0 + std::exp(v); }, lw});
      break;
    case KernelKind::GEV:
      c.push_back(linear(0, 0.15 * shrink, -0.45, 0.45));
      c.push_back(logarithmic(2, lw));
      break;
  }
  return c;
}

class Refiner {
 public:
  Refiner(const Reference& ref, ActionPlan plan, std::vector<Point> tp_seed, std::vector<double> drift_radius,
          const ExtractorConfig& cfg)
      : ref_(ref), plan_(std::move(plan)), tp_seed_(std::move(tp_seed)), radius_(std::move(drift_radius)), cfg_(cfg) {
    tracks_.resize(plan_.strokes.size());
    for (std::size_t j = 0; j < plan_.strokes.size(); ++j) track(plan_.strokes[j], tracks_[j]);
    score_ = evaluate(plan_.start_point, {});
    if (!score_.valid()) throw Error(ErrorCode::ExtractionFailure, "initial plan does not produce a finite SNR");
    trace_.push_back(score_.sum());
  }

  int run() {
    int passes = 0;
    for (int pass = 0; pass < cfg_.max_passes; ++pass) {
      const Score before = score_;
      const double shrink = std::pow(0.75, pass);
      for (std::size_t j = 0; j < plan_.strokes.size(); ++j) {
        refine_kernel(j, shrink);
        refine_targets(j, shrink);
        refine_angles(j, shrink);
      }
      ++passes;
      if (score_.snr_t - before.snr_t < cfg_.snr_stop && score_.snr_v - before.snr_v < cfg_.snr_stop) break;
    }
    return passes;
  }

  [[nodiscard]] const ActionPlan& plan() const { return plan_; }
  [[nodiscard]] const Score& score() const { return score_; }
  [[nodiscard]] const std::vector<double>& trace() const { return trace_; }

 private:
  using Change = std::pair<std::size_t, Stroke>;

  void track(const Stroke& s, std::vector<Point>& out) const {
    out.resize(ref_.t.size());
    for (std::size_t i = 0; i < ref_.t.size(); ++i) out[i] = stroke_displacement(s, ref_.t[i]);
  }

  // Score with some strokes replaced; summation order matches
  // reconstruct_positions so the final report is reproducible from the plan.
  Score evaluate(Point start, const std::vector<Change>& changes) {
    scratch_.resize(changes.size());
    for (std::size_t c = 0; c < changes.size(); ++c) track(changes[c].second, scratch_[c]);
    std::vector<Point> pos(ref_.t.size(), start);
    for (std::size_t j = 0; j < tracks_.size(); ++j) {
      const std::vector<Point>* tr = &tracks_[j];
      for (std::size_t c = 0; c < changes.size(); ++c)
        if (changes[c].first == j) tr = &scratch_[c];
      for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = pos[i] + (*tr)[i];
    }
    const Score s = score_positions(ref_, pos);
    return s.valid() ? s : Score{};
  }

  // Golden-section search of one scalar; `build` maps a value to a candidate
  // (start point and replaced strokes) or nothing when infeasible. The best
  // evaluated candidate is kept only if it raises the objective without
  // lowering SNR_t + SNR_v.
  template <class Build>
  void line_search(double lo, double hi, Build build) {
    if (!(hi > lo)) return;
    struct Best {
      double x = 0.0;
      Score score;
      bool found = false;
    } best;
    auto f = [&](double x) {
      Point start = plan_.start_point;
      std::vector<Change> changes;
      if (!build(x, start, changes)) return std::numeric_limits<double>::infinity();
      const Score s = evaluate(start, changes);
      if (!s.valid()) return std::numeric_limits<double>::infinity();
      const bool better = s.objective() > score_.objective() + 1e-12 && s.sum() >= score_.sum();
      if (better && (!best.found || s.objective() > best.score.objective())) best = {x, s, true};
      return -s.objective();
    };
    numeric::golden_section(f, lo, hi, 0.0, cfg_.line_search_iters);
    if (!best.found) return;
    Point start = plan_.start_point;
    std::vector<Change> changes;
    build(best.x, start, changes);
    plan_.start_point = start;
    for (auto& [j, s] : changes) {
      plan_.strokes[j] = s;
      track(s, tracks_[j]);
    }
    score_ = best.score;
    trace_.push_back(score_.sum());
  }

  void refine_kernel(std::size_t j, double shrink) {
    for (const Coordinate& c : kernel_coordinates(plan_.strokes[j].kernel, cfg_, shrink)) {
      const double x0 = c.get(plan_.strokes[j].kernel);
      const double lo = std::max(c.lo, x0 - c.half_width);
      const double hi = std::min(c.hi, x0 + c.half_width);
      line_search(lo, hi, [&](double x, Point&, std::vector<Change>& changes) {
        KernelParams k = plan_.strokes[j].kernel;
        c.set(k, x);
        auto s = with_kernel(plan_.strokes[j], k);
        if (!s) return false;
        changes.emplace_back(j, std::move(*s));
        return true;
      });
    }
  }

  // Moves target point i (0 is the plan start) along one axis, within the
  // drift disk around its seed.
  bool move_target(std::size_t i, Point p, Point& start, std::vector<Change>& changes) const {
    const auto& strokes = plan_.strokes;
    if (i == 0) {
      start = p;
    } else {
      LinkSpec l = strokes[i - 1].link;
      l.p_end = p;
      auto s = try_make(strokes[i - 1].kernel, l);
      if (!s) return false;
      changes.emplace_back(i - 1, std::move(*s));
    }
    if (i < strokes.size()) {
      LinkSpec l = strokes[i].link;
      l.p_start = p;
      auto s = try_make(strokes[i].kernel, l);
      if (!s) return false;
      changes.emplace_back(i, std::move(*s));
    }
    return true;
  }

  Point target(std::size_t i) const { return i == 0 ? plan_.start_point : plan_.strokes[i - 1].link.p_end; }

  void refine_targets(std::size_t j, double shrink) {
    std::vector<std::size_t> points;
    if (j == 0) points.push_back(0);
    points.push_back(j + 1);
    for (std::size_t i : points) {
      for (int axis = 0; axis < 2; ++axis) {
        const Point cur = target(i);
        const Point seed = tp_seed_[i];
        const double r = radius_[i];
        const double other = axis == 0 ? cur.y - seed.y : cur.x - seed.x;
        const double reach = std::sqrt(std::max(0.0, r * r - other * other));
        const double c0 = axis == 0 ? cur.x : cur.y;
        const double s0 = axis == 0 ? seed.x : seed.y;
        const double lo = std::max(s0 - reach, c0 - r * shrink);
        const double hi = std::min(s0 + reach, c0 + r * shrink);
        line_search(lo, hi, [&](double x, Point& start, std::vector<Change>& changes) {
          const Point p = axis == 0 ? Point{x, cur.y} : Point{cur.x, x};
          return move_target(i, p, start, changes);
        });
      }
    }
  }

  void refine_angles(std::size_t j, double shrink) {
    const int n_angles = plan_.strokes[j].link.kind == LinkKind::Arc ? 1 : 2;
    for (int which = 0; which < n_angles; ++which) {
      const LinkSpec& link = plan_.strokes[j].link;
      const double chord = heading(link.p_end - link.p_start);
      const double cur = which == 0 ? link.theta_s : link.theta_e;
      const double rel = wrap_angle(cur - chord);
      const double lim = std::numbers::pi - kAngleMargin;
      const double w = cfg_.angle_step * shrink;
      line_search(std::max(-lim, rel - w), std::min(lim, rel + w),
                  [&](double x, Point&, std::vector<Change>& changes) {
                    LinkSpec l = plan_.strokes[j].link;
                    (which == 0 ? l.theta_s : l.theta_e) = chord + x;
                    auto s = try_make(plan_.strokes[j].kernel, l);
                    if (!s) return false;
                    changes.emplace_back(j, std::move(*s));
                    return true;
                  });
    }
  }

  const Reference& ref_;
  ActionPlan plan_;
  std::vector<Point> tp_seed_;
  std::vector<double> radius_;
  const ExtractorConfig& cfg_;
  std::vector<std::vector<Point>> tracks_;
  std::vector<std::vector<Point>> scratch_;
  Score score_;
  std::vector<double> trace_;
};

KernelParams initial_kernel(const StrokeSeed& seed, const SpeedProfile& sp, const ExtractorConfig& cfg, double dt,
                            std::vector<std::string>& warnings) {
  const double V = std::max(seed.moments.V, dt * dt);
  const std::size_t i0 = seed.sp_prev.index;
  const std::size_t n = seed.sp.index - i0 + 1;
  const LobeSamples lobe{std::span(sp.t).subspan(i0, n), std::span(sp.v).subspan(i0, n)};
  try {
    if (cfg.kernel_kind == KernelKind::Gaussian)
      return moments_to_params(KernelKind::Gaussian, {seed.moments.M, V}, seed.t0, seed.lobe_end, seed.D_raw);
    return moments_to_params(cfg.kernel_kind, {seed.moments.M - seed.t0, V}, seed.t0, seed.lobe_end, seed.D_raw,
                             lobe);
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "stroke at t=" << seed.sp.t << ": " << to_string(cfg.kernel_kind) << " initialization failed ("
        << e.what() << "); using gaussian";
    warnings.push_back(msg.str());
    log::warn(msg.str());
    return moments_to_params(KernelKind::Gaussian, {seed.moments.M, V}, seed.t0, seed.lobe_end, seed.D_raw);
  }
}

// Virtual target points from the salient points, assuming straight links:
// the position at salient time t_i is tp_0 + sum_k F_k(t_i) (tp_k - tp_{k-1})
// with F_k the normalized cumulative of kernel k.
std::vector<Point> solve_targets(const std::vector<KernelParams>& kernels, const std::vector<SalientPoint>& salient) {
  const auto n = static_cast<Eigen::Index>(kernels.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::MatrixXd b(n + 1, 2);
  for (Eigen::Index i = 0; i <= n; ++i) {
    const double t = salient[static_cast<std::size_t>(i)].t;
    A(i, 0) = 1.0;
    for (Eigen::Index k = 1; k <= n; ++k) {
      const KernelParams& kp = kernels[static_cast<std::size_t>(k - 1)];
      const double F = cumulative(kp, t) / kp.D;
      A(i, k) += F;
      A(i, k - 1) -= F;
    }
    b(i, 0) = salient[static_cast<std::size_t>(i)].p.x;
    b(i, 1) = salient[static_cast<std::size_t>(i)].p.y;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) return {};
  const Eigen::MatrixXd x = lu.solve(b);
  if (!x.allFinite()) return {};
  std::vector<Point> tp;
  for (Eigen::Index i = 0; i <= n; ++i) tp.push_back({x(i, 0), x(i, 1)});
  return tp;
}

}  // namespace

void ExtractorConfig::validate() const {
  if (max_passes < 1) throw Error(ErrorCode::InvalidInput, "max_passes must be >= 1");
  if (!(snr_stop > 0.0)) throw Error(ErrorCode::InvalidInput, "snr_stop must be > 0");
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidInput, "rate must be > 0");
  if (!(smooth_cutoff > 0.0 && smooth_cutoff < rate / 2.0))
    throw Error(ErrorCode::InvalidInput, "smooth_cutoff must lie in (0, rate / 2)");
  if (!(tp_drift >= 0.0)) throw Error(ErrorCode::InvalidInput, "tp_drift must be >= 0");
  if (line_search_iters < 1) throw Error(ErrorCode::InvalidInput, "line_search_iters must be >= 1");
  if (!(angle_step > 0.0 && time_step > 0.0 && log_step > 0.0))
    throw Error(ErrorCode::InvalidInput, "search widths must be > 0");
}

std::string ExtractorConfig::id() const {
  return std::string(to_string(kernel_kind)) + "/" + std::string(to_string(link_kind));
}

ReconstructionReport score_plan(const ActionPlan& plan, const Trajectory& uniform_reference) {
  const Reference ref = make_reference(uniform_reference);
  const Score s = score_positions(ref, reconstruct_positions(plan, ref.t));
  return ReconstructionReport::make(s.snr_t, s.snr_v, static_cast<int>(std::max<std::size_t>(1, plan.strokes.size())));
}

ExtractionResult extract(const Trajectory& traj, const ExtractorConfig& cfg) {
  cfg.validate();
  const Trajectory uniform = resample_uniform(traj, cfg.rate);
  if (!(uniform.path_length() > 0.0)) throw Error(ErrorCode::ExtractionFailure, "trajectory does not move");
  const Reference ref = make_reference(uniform);
  const SpeedProfile sp = speed_profile(uniform, cfg.smooth_cutoff);

  const auto salient = find_salient_points(uniform, sp, cfg.segmentation.min_prominence, cfg.segmentation.min_gap);
  const auto seeds = seed_strokes(uniform, sp, salient, cfg.segmentation);
  if (seeds.empty()) throw Error(ErrorCode::ExtractionFailure, "no speed lobes found");

  ExtractionResult result;
  std::vector<KernelParams> kernels;
  for (const auto& seed : seeds) kernels.push_back(initial_kernel(seed, sp, cfg, ref.dt, result.warnings));

  // Salient points of the kept lobes, in order.
  std::vector<SalientPoint> kept{seeds.front().sp_prev};
  for (const auto& seed : seeds) kept.push_back(seed.sp);
  std::vector<Point> tp = solve_targets(kernels, kept);
  std::vector<double> radius(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const std::size_t j = i == 0 ? 0 : i - 1;
    radius[i] = cfg.tp_drift * norm(kept[j + 1].p - kept[j].p);
  }
  // The straight-link estimate is discarded where it leaves the drift disk
  // of its salient point by more than a chord.
  bool usable = !tp.empty();
  for (std::size_t i = 0; usable && i < tp.size(); ++i)
    usable = norm(tp[i] - kept[i].p) <= 10.0 * radius[i] + 1e-12;
  if (!usable) {
    tp.clear();
    for (const auto& s : kept) tp.push_back(s.p);
  }

  ActionPlan plan{tp.front(), {}};
  for (std::size_t j = 0; j < seeds.size(); ++j) {
    LinkSpec link{cfg.link_kind, tp[j], tp[j + 1], 0.0, 0.0};
    link.theta_s = sanitize_angle(seeds[j].theta_s, link.p_start, link.p_end);
    link.theta_e = sanitize_angle(seeds[j].theta_e, link.p_start, link.p_end);
    auto stroke = try_make(kernels[j], link);
    if (!stroke) {
      link.theta_s = link.theta_e = heading(link.p_end - link.p_start);
      stroke = try_make(kernels[j], link);
    }
    if (!stroke) {
      std::ostringstream msg;
      msg << "cannot fit a link for the stroke ending at t=" << seeds[j].sp.t;
      throw Error(ErrorCode::ExtractionFailure, msg.str());
    }
    plan.strokes.push_back(std::move(*stroke));
  }

  Refiner refiner(ref, std::move(plan), tp, radius, cfg);
  result.passes_used = refiner.run();
  result.plan = refiner.plan();
  result.report = ReconstructionReport::make(refiner.score().snr_t, refiner.score().snr_v,
                                             static_cast<int>(result.plan.strokes.size()));
  result.objective_trace = refiner.trace();
  return result;
}

std::vector<ConfigOutcome> compare_configs(const Trajectory& traj, const std::vector<ExtractorConfig>& cfgs) {
  if (cfgs.empty()) throw Error(ErrorCode::InvalidInput, "compare_configs needs at least one config");
  std::vector<std::future<ConfigOutcome>> jobs;
  for (const auto& cfg : cfgs) {
    jobs.push_back(std::async(std::launch::async, [&traj, cfg] {
      ConfigOutcome out{cfg, std::nullopt, ErrorCode::ExtractionFailure, {}};
      try {
        out.result = extract(traj, cfg);
      } catch (const Error& e) {
        out.error_code = e.code();
        out.error = e.what();
      } catch (const std::exception& e) {
        out.error = e.what();
      }
      return out;
    }));
  }
  std::vector<ConfigOutcome> outcomes;
  for (auto& job : jobs) outcomes.push_back(job.get());
  return outcomes;
}

}  // namespace ktt
