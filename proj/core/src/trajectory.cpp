#include "ktt/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ktt/error.hpp"
#include "ktt/log.hpp"

namespace ktt {

Trajectory::Trajectory(std::vector<Sample> samples, std::string meta)
    : samples_(std::move(samples)), meta_(std::move(meta)) {
  if (samples_.size() < kMinSamples) {
    throw Error(ErrorCode::InvalidInput,
                "trajectory needs at least 4 samples, got " + std::to_string(samples_.size()));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.y))
      throw Error(ErrorCode::InvalidInput, "non-finite sample at index " + std::to_string(i));
    if (i > 0 && !(s.t > samples_[i - 1].t))
      throw Error(ErrorCode::InvalidInput, "timestamps not strictly increasing at index " + std::to_string(i));
  }
}

Trajectory Trajectory::from_raw(std::vector<Sample> samples, std::string meta) {
  std::vector<Sample> merged;
  merged.reserve(samples.size());
  std::size_t collapsed = 0;
  for (std::size_t i = 0; i < samples.size();) {
    std::size_t j = i + 1;
    while (j < samples.size() && samples[j].t == samples[i].t) ++j;
    Sample s{samples[i].t, 0.0, 0.0};
    for (std::size_t k = i; k < j; ++k) {
      s.x += samples[k].x;
      s.y += samples[k].y;
    }
    const auto n = static_cast<double>(j - i);
    s.x /= n;
    s.y /= n;
    collapsed += j - i - 1;
    merged.push_back(s);
    i = j;
  }
  if (collapsed > 0) {
    std::ostringstream msg;
    msg << (meta.empty() ? std::string("trajectory") : meta) << ": collapsed " << collapsed
        << " duplicated timestamp(s) to their mean position";
    log::warn(msg.str());
  }
  return Trajectory(std::move(merged), std::move(meta));
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t(samples_.size());
  std::transform(samples_.begin(), samples_.end(), t.begin(), [](const Sample& s) { return s.t; });
  return t;
}

double Trajectory::path_length() const noexcept {
  double len = 0.0;
  for (std::size_t i = 1; i < samples_.size(); ++i) len += norm(samples_[i].p() - samples_[i - 1].p());
  return len;
}

bool Trajectory::is_uniform(double rel_tol) const noexcept {
  const double dt = (t_last() - t_first()) / static_cast<double>(samples_.size() - 1);
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (std::abs((samples_[i].t - samples_[i - 1].t) - dt) > rel_tol * dt) return false;
  }
  return true;
}

SpeedProfile VelocitySeries::speed() const {
  SpeedProfile sp{t, std::vector<double>(t.size())};
  for (std::size_t i = 0; i < t.size(); ++i) sp.v[i] = std::hypot(vx[i], vy[i]);
  return sp;
}

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw Error(ErrorCode::InvalidInput, "spline needs >= 2 matching knots");
  if (n == 2) return;
  // Tridiagonal system for interior second derivatives (Thomas algorithm).
  std::vector<double> c(n, 0.0);
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double a = h0;
    const double b = 2.0 * (h0 + h1);
    const double cc = h1;
    const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (rhs - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
  }
}

double NaturalCubicSpline::operator()(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t hi = static_cast<std::size_t>(std::distance(x_.begin(), it));
  hi = std::clamp<std::size_t>(hi, 1, x_.size() - 1);
  const std::size_t lo = hi - 1;
  const double h = x_[hi] - x_[lo];
  const double a = (x_[hi] - x) / h;
  const double b = (x - x_[lo]) / h;
  return a * y_[lo] + b * y_[hi] + ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
}

std::vector<double> uniform_grid(double t_begin, double t_end, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate) || !(t_end > t_begin))
    throw Error(ErrorCode::InvalidInput, "uniform grid needs rate > 0 and t_end > t_begin");
  const auto steps = std::max<long>(3, std::lround((t_end - t_begin) * rate));
  const double dt = (t_end - t_begin) / static_cast<double>(steps);
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k <= steps; ++k) t[static_cast<std::size_t>(k)] = t_begin + static_cast<double>(k) * dt;
  t.back() = t_end;
  return t;
}

Trajectory resample_uniform(const Trajectory& traj, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw Error(ErrorCode::InvalidInput, "resampling rate must be > 0");
  const auto samples = traj.samples();
  std::vector<double> t(samples.size()), x(samples.size()), y(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    t[i] = samples[i].t;
    x[i] = samples[i].x;
    y[i] = samples[i].y;
  }
  const NaturalCubicSpline sx(t, x);
  const NaturalCubicSpline sy(t, y);
  const auto grid = uniform_grid(traj.t_first(), traj.t_last(), rate);
  std::vector<Sample> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] = {grid[k], sx(grid[k]), sy(grid[k])};
  out.front() = samples.front();
  out.back() = samples.back();
  return Trajectory(std::move(out), traj.meta());
}

std::vector<double> lowpass_zero_phase(std::span<const double> signal, double rate, double cutoff) {
  const std::size_t n = signal.size();
  if (n < 2) return {signal.begin(), signal.end()};
  // Bilinear-transform Butterworth biquad.
  const double k = std::tan(std::numbers::pi * cutoff / rate);
  const double q = std::numbers::sqrt2 / 2.0;
  const double norm_ = 1.0 / (1.0 + k / q + k * k);
  const double b0 = k * k * norm_;
  const double b1 = 2.0 * b0;
  const double b2 = b0;
  const double a1 = 2.0 * (k * k - 1.0) * norm_;
  const double a2 = (1.0 - k / q + k * k) * norm_;

  const auto pad = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(n - 1), std::max(9.0, 6.0 * std::ceil(rate / cutoff))));
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * signal[0] - signal[i]);
  ext.insert(ext.end(), signal.begin(), signal.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * signal[n - 1] - signal[n - 1 - i]);

  // Direct form II transposed, state initialised to the steady state of the
  // first input value.
  auto run = [&](std::vector<double>& v) {
    const double x0 = v.front();
    // Unit DC gain: y = x0 gives z1 = (1 - b0) x0, z2 = (b2 - a2) x0.
    double z1 = (1.0 - b0) * x0;
    double z2 = (b2 - a2) * x0;
    for (double& s : v) {
      const double in = s;
      const double out = b0 * in + z1;
      z1 = b1 * in - a1 * out + z2;
      z2 = b2 * in - a2 * out;
      s = out;
    }
  };
  run(ext);
  std::reverse(ext.begin(), ext.end());
  run(ext);
  std::reverse(ext.begin(), ext.end());
  return {ext.begin() + static_cast<std::ptrdiff_t>(pad), ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

std::vector<double> differentiate(std::span<const double> values, double dt) {
  const std::size_t n = values.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d[0] = (values[1] - values[0]) / dt;
  d[n - 1] = (values[n - 1] - values[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (values[i + 1] - values[i - 1]) / (2.0 * dt);
  return d;
}

VelocitySeries velocity_series(const Trajectory& traj, double smooth_cutoff) {
  if (!traj.is_uniform()) throw Error(ErrorCode::InvalidInput, "velocity estimation needs uniform timestamps");
  const std::size_t n = traj.size();
  const double dt = (traj.t_last() - traj.t_first()) / static_cast<double>(n - 1);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = traj[i].x;
    y[i] = traj[i].y;
  }
  if (smooth_cutoff > 0.0) {
    x = lowpass_zero_phase(x, 1.0 / dt, smooth_cutoff);
    y = lowpass_zero_phase(y, 1.0 / dt, smooth_cutoff);
  }
  return {traj.times(), differentiate(x, dt), differentiate(y, dt)};
}

SpeedProfile speed_profile(const Trajectory& traj, double smooth_cutoff) {
  if (!traj.is_uniform()) throw Error(ErrorCode::InvalidInput, "speed_profile needs uniform timestamps");
  const double rate = static_cast<double>(traj.size() - 1) / (traj.t_last() - traj.t_first());
  if (!(smooth_cutoff > 0.0) || !(smooth_cutoff < rate / 2.0))
    throw Error(ErrorCode::InvalidInput, "smoothing cutoff must lie in (0, rate/2)");
  return velocity_series(traj, smooth_cutoff).speed();
}

}  // namespace ktt
