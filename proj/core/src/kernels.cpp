#include "ktt/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ktt/error.hpp"
#include "ktt/numeric.hpp"

namespace ktt {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<std::string_view, 2> kGaussianNames = {"mu", "sigma2"};
constexpr std::array<std::string_view, 2> kLognormalNames = {"mu", "sigma2"};
constexpr std::array<std::string_view, 2> kGammaNames = {"alpha", "beta"};
constexpr std::array<std::string_view, 3> kBetaNames = {"alpha", "beta", "scale"};
constexpr std::array<std::string_view, 3> kDblNames = {"mu", "sigma2", "te"};
constexpr std::array<std::string_view, 3> kGevNames = {"xi", "mu", "sigma"};

double logistic(double z) noexcept { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// log s(x) for the GEV, x measured from t0; -inf/+inf outside the support.
double gev_log_s(double xi, double mu, double sigma, double x) noexcept {
  const double z = (x - mu) / sigma;
  if (xi == 0.0) return -z;
  const double arg = xi * z;
  if (arg <= -1.0) return xi > 0 ? kInf : -kInf;
  return -std::log1p(arg) / xi;
}

// (Gamma(1 - xi) - 1) / xi and (Gamma(1 - 2 xi) - Gamma(1 - xi)^2) / xi^2,
// both evaluated without cancellation near xi = 0.
struct GevFactors {
  double mean;
  double var;
};

GevFactors gev_factors(double xi) {
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (xi == 0.0) return {numeric::euler_gamma, pi2_6};
  const double l1 = std::lgamma(1.0 - xi);
  const double l2 = std::lgamma(1.0 - 2.0 * xi);
  const double g1 = std::exp(l1);
  return {std::expm1(l1) / xi, g1 * g1 * std::expm1(l2 - 2.0 * l1) / (xi * xi)};
}

// E[(t - t0)^k] for k = 1, 2 of a DBL lobe, via the logit-normal variable.
std::pair<double, double> dbl_raw_moments(double mu, double sigma2, double span) {
  const double s = std::sqrt(sigma2);
  auto phi = [](double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); };
  numeric::QuadratureOptions opts{1e-15, 1e-13, 2000};
  const double e1 =
      numeric::integrate([&](double u) { return phi(u) * logistic(mu + s * u); }, -12.0, 12.0, opts).value;
  const double e2 = numeric::integrate(
                        [&](double u) {
                          const double g = logistic(mu + s * u);
                          return phi(u) * g * g;
                        },
                        -12.0, 12.0, opts)
                        .value;
  return {span * e1, span * span * e2};
}

Moments dbl_moments(double mu, double sigma2, double span) {
  auto [m1, m2] = dbl_raw_moments(mu, sigma2, span);
  return {m1, std::max(m2 - m1 * m1, 0.0)};
}

// Rough location and width used to bracket quantiles.
std::pair<double, double> location_hint(const KernelParams& p) {
  switch (p.kind) {
    case KernelKind::Gaussian: return {p.shape[0], std::sqrt(p.shape[1])};
    case KernelKind::Lognormal: {
      const double med = std::exp(p.shape[0]);
      return {p.t0 + med, med * std::max(std::sqrt(p.shape[1]), 1e-3)};
    }
    case KernelKind::Gamma: return {p.t0 + p.shape[0] / p.shape[1], std::sqrt(p.shape[0]) / p.shape[1]};
    case KernelKind::Beta: return {p.t0 + 0.5 * p.shape[2], 0.25 * p.shape[2]};
    case KernelKind::DoubleBoundedLognormal: return {0.5 * (p.t0 + p.shape[2]), 0.25 * (p.shape[2] - p.t0)};
    case KernelKind::GEV: return {p.t0 + p.shape[1], p.shape[2]};
  }
  return {0.0, 1.0};
}

Interval hard_support(const KernelParams& p) {
  switch (p.kind) {
    case KernelKind::Gaussian: return {-kInf, kInf};
    case KernelKind::Lognormal:
    case KernelKind::Gamma: return {p.t0, kInf};
    case KernelKind::Beta: return {p.t0, p.t0 + p.shape[2]};
    case KernelKind::DoubleBoundedLognormal: return {p.t0, p.shape[2]};
    case KernelKind::GEV: {
      const double xi = p.shape[0];
      if (xi == 0.0) return {-kInf, kInf};
      const double bound = p.t0 + p.shape[1] - p.shape[2] / xi;
      return xi > 0 ? Interval{bound, kInf} : Interval{-kInf, bound};
    }
  }
  return {-kInf, kInf};
}

// Quantile of the normalized lobe; p may be given as its complement to reach
// tails beyond double resolution near 1.
double quantile_impl(const KernelParams& params, double p, bool upper) {
  const auto [center, width] = location_hint(params);
  const Interval hard = hard_support(params);
  // True while t lies left of the requested quantile. In upper mode p is the
  // mass to the right of the quantile.
  auto left_of = [&](double t) {
    const double c = cumulative(params, t) / params.D;
    return upper ? (1.0 - c) > p : c < p;
  };
  double lo = center;
  double step = width;
  for (int i = 0; i < 2000 && !left_of(lo); ++i) {
    lo = std::isfinite(hard.lo) ? std::max(hard.lo, lo - step) : lo - step;
    step *= 2.0;
    if (lo == hard.lo) break;
  }
  double hi = center;
  step = width;
  for (int i = 0; i < 2000 && left_of(hi); ++i) {
    hi = std::isfinite(hard.hi) ? std::min(hard.hi, hi + step) : hi + step;
    step *= 2.0;
    if (hi == hard.hi) break;
  }
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (left_of(mid)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

KernelParams fit_dbl(const Moments& m, double t0, double lobe_end, double D) {
  if (!(m.M > 0.0) || !(m.V > 0.0)) throw Error(ErrorCode::InfeasibleMoments, "DBL needs M > 0 and V > 0");
  double te = lobe_end;
  // The lobe must fit inside (t0, te): M < span and V < M (span - M).
  auto feasible_span = [&](double span) { return m.M < span && m.V < m.M * (span - m.M); };
  if (!(te > t0) || !feasible_span(te - t0)) {
    double span = std::max(te - t0, 2.0 * m.M);
    while (!feasible_span(span)) span *= 1.5;
    te = t0 + 1.5 * span;
  }
  std::array<double, 3> x = {0.6, 0.2, te};
  auto objective = [&](const std::array<double, 3>& p) {
    if (!(p[1] > 0.0) || !(p[2] > t0) || !feasible_span(p[2] - t0)) return kInf;
    const Moments got = dbl_moments(p[0], p[1], p[2] - t0);
    const double dm = (got.M - m.M) / m.M;
    const double dv = (got.V - m.V) / m.V;
    return dm * dm + dv * dv;
  };
  double best = objective(x);
  std::array<double, 3> step = {0.5, 0.1, 0.25 * (te - t0)};
  for (int iter = 0; iter < 200 && best > 1e-20; ++iter) {
    bool moved = false;
    for (std::size_t c = 0; c < 3; ++c) {
      double lo = x[c] - step[c];
      double hi = x[c] + step[c];
      if (c == 1) lo = std::max(lo, 1e-6);
      if (c == 2) lo = std::max(lo, t0 + m.M * (1.0 + 1e-9));
      auto line = [&](double v) {
        auto trial = x;
        trial[c] = v;
        return objective(trial);
      };
      const auto found = numeric::golden_section(line, lo, hi, 1e-3 * step[c], 60);
      if (found.fx < best) {
        moved = moved || std::abs(found.x - x[c]) > 0.25 * step[c];
        x[c] = found.x;
        best = found.fx;
      }
    }
    if (!moved) {
      for (auto& s : step) s *= 0.5;
    }
    if (*std::max_element(step.begin(), step.end()) < 1e-6) break;
  }

  // Newton polish on (mu, sigma2) with te fixed; the logit-normal family on a
  // fixed span reaches every feasible (M, V).
  const double span = x[2] - t0;
  for (int iter = 0; iter < 30 && best > 1e-24; ++iter) {
    const Moments f0 = dbl_moments(x[0], x[1], span);
    const double r0 = f0.M - m.M;
    const double r1 = f0.V - m.V;
    const double h0 = 1e-6 * std::max(1.0, std::abs(x[0]));
    const double h1 = 1e-6 * x[1];
    const Moments fa = dbl_moments(x[0] + h0, x[1], span);
    const Moments fb = dbl_moments(x[0], x[1] + h1, span);
    const double j00 = (fa.M - f0.M) / h0, j01 = (fb.M - f0.M) / h1;
    const double j10 = (fa.V - f0.V) / h0, j11 = (fb.V - f0.V) / h1;
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0 || !std::isfinite(det)) break;
    double d0 = -(j11 * r0 - j01 * r1) / det;
    double d1 = -(-j10 * r0 + j00 * r1) / det;
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      std::array<double, 3> trial = {x[0] + d0, x[1] + d1, x[2]};
      const double f = objective(trial);
      if (f < best) {
        x = trial;
        best = f;
        accepted = true;
        break;
      }
      d0 *= 0.5;
      d1 *= 0.5;
    }
    if (!accepted) break;
  }
  return KernelParams::dbl(D, t0, x[0], x[1], x[2]);
}

KernelParams fit_gev(const Moments& m, double t0, double D, const std::optional<LobeSamples>& lobe) {
  if (!(m.V > 0.0)) throw Error(ErrorCode::InfeasibleMoments, "GEV needs V > 0");
  auto with_xi = [&](double xi) {
    const GevFactors f = gev_factors(xi);
    const double sigma = std::sqrt(m.V / f.var);
    return KernelParams::gev(D, t0, xi, m.M - sigma * f.mean, sigma);
  };
  if (!lobe || lobe->t.size() < 3) return with_xi(0.0);

  // Moments are conserved exactly for every xi; the lobe decides the shape.
  const double area = [&] {
    double a = 0.0;
    for (std::size_t i = 1; i < lobe->t.size(); ++i)
      a += 0.5 * (lobe->v[i] + lobe->v[i - 1]) * (lobe->t[i] - lobe->t[i - 1]);
    return a;
  }();
  auto sse = [&](double xi) {
    auto p = with_xi(xi);
    p.D = area > 0 ? area : D;
    double e = 0.0;
    for (std::size_t i = 0; i < lobe->t.size(); ++i) {
      const double r = eval(p, lobe->t[i]) - lobe->v[i];
      e += r * r;
    }
    return e;
  };
  constexpr double lo_bound = -0.45;
  constexpr double hi_bound = 0.45;
  // Hill-climb outwards from xi = 0 to bracket the best fit, then refine.
  double xi = 0.0;
  double best = sse(0.0);
  double h = 0.05;
  int direction = sse(h) < sse(-h) ? 1 : -1;
  while (true) {
    const double next = std::clamp(xi + direction * h, lo_bound, hi_bound);
    if (next == xi) break;
    const double f = sse(next);
    if (!(f < best)) break;
    xi = next;
    best = f;
  }
  const auto found = numeric::golden_section(sse, std::max(lo_bound, xi - h), std::min(hi_bound, xi + h), 1e-6);
  if (found.fx < best) xi = found.x;
  return with_xi(xi);
}

}  // namespace

std::string_view to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::Lognormal: return "lognormal";
    case KernelKind::Gamma: return "gamma";
    case KernelKind::Beta: return "beta";
    case KernelKind::DoubleBoundedLognormal: return "dbl";
    case KernelKind::GEV: return "gev";
  }
  return "unknown";
}

std::optional<KernelKind> kernel_kind_from_string(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "double-bounded-lognormal") return KernelKind::DoubleBoundedLognormal;
  for (KernelKind k : kAllKernelKinds)
    if (to_string(k) == lower) return k;
  return std::nullopt;
}

std::span<const std::string_view> shape_names(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::Gaussian: return kGaussianNames;
    case KernelKind::Lognormal: return kLognormalNames;
    case KernelKind::Gamma: return kGammaNames;
    case KernelKind::Beta: return kBetaNames;
    case KernelKind::DoubleBoundedLognormal: return kDblNames;
    case KernelKind::GEV: return kGevNames;
  }
  return {};
}

KernelParams KernelParams::gaussian(double D, double mu, double sigma2) {
  return {KernelKind::Gaussian, 0.0, D, {mu, sigma2, 0.0, 0.0}};
}
KernelParams KernelParams::lognormal(double D, double t0, double mu, double sigma2) {
  return {KernelKind::Lognormal, t0, D, {mu, sigma2, 0.0, 0.0}};
}
KernelParams KernelParams::gamma(double D, double t0, double alpha, double beta) {
  return {KernelKind::Gamma, t0, D, {alpha, beta, 0.0, 0.0}};
}
KernelParams KernelParams::beta(double D, double t0, double alpha, double beta, double scale) {
  return {KernelKind::Beta, t0, D, {alpha, beta, scale, 0.0}};
}
KernelParams KernelParams::dbl(double D, double t0, double mu, double sigma2, double te) {
  return {KernelKind::DoubleBoundedLognormal, t0, D, {mu, sigma2, te, 0.0}};
}
KernelParams KernelParams::gev(double D, double t0, double xi, double mu, double sigma) {
  return {KernelKind::GEV, t0, D, {xi, mu, sigma, 0.0}};
}

double KernelParams::param(std::string_view name) const {
  const auto names = shape_names(kind);
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return shape[i];
  throw Error(ErrorCode::InvalidInput, "kernel " + std::string(to_string(kind)) + " has no parameter '" +
                                           std::string(name) + "'");
}

void KernelParams::set_param(std::string_view name, double value) {
  const auto names = shape_names(kind);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) {
      shape[i] = value;
      return;
    }
  }
  throw Error(ErrorCode::InvalidInput, "kernel " + std::string(to_string(kind)) + " has no parameter '" +
                                           std::string(name) + "'");
}

bool KernelParams::valid() const noexcept {
  try {
    validate();
    return true;
  } catch (const Error&) {
    return false;
  }
}

void KernelParams::validate() const {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidInput, std::string(to_string(kind)) + " kernel: " + why);
  };
  if (!std::isfinite(t0) || !std::isfinite(D)) fail("non-finite t0 or D");
  for (std::size_t i = 0; i < shape_size(); ++i)
    if (!std::isfinite(shape[i])) fail("non-finite shape parameter");
  if (!(D > 0.0)) fail("D must be > 0");
  switch (kind) {
    case KernelKind::Gaussian:
    case KernelKind::Lognormal:
      if (!(shape[1] > 0.0)) fail("sigma2 must be > 0");
      break;
    case KernelKind::Gamma:
      if (!(shape[0] > 0.0) || !(shape[1] > 0.0)) fail("alpha and beta must be > 0");
      break;
    case KernelKind::Beta:
      if (!(shape[0] > 0.0) || !(shape[1] > 0.0)) fail("alpha and beta must be > 0");
      if (!(shape[2] > 0.0)) fail("scale must be > 0");
      break;
    case KernelKind::DoubleBoundedLognormal:
      if (!(shape[1] > 0.0)) fail("sigma2 must be > 0");
      if (!(shape[2] > t0)) fail("te must be > t0");
      break;
    case KernelKind::GEV:
      if (!(shape[2] > 0.0)) fail("sigma must be > 0");
      if (!(shape[0] < 0.5)) fail("xi must be < 0.5");
      break;
  }
}

double moment_origin(const KernelParams& params) noexcept {
  return params.kind == KernelKind::Gaussian ? 0.0 : params.t0;
}

double eval(const KernelParams& p, double t) noexcept {
  switch (p.kind) {
    case KernelKind::Gaussian: {
      const double sigma = std::sqrt(p.shape[1]);
      const double z = (t - p.shape[0]) / sigma;
      return p.D * kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
    }
    case KernelKind::Lognormal: {
      const double x = t - p.t0;
      if (x <= 0.0) return 0.0;
      const double sigma = std::sqrt(p.shape[1]);
      const double z = (std::log(x) - p.shape[0]) / sigma;
      return p.D * kInvSqrt2Pi / (sigma * x) * std::exp(-0.5 * z * z);
    }
    case KernelKind::Gamma: {
      const double x = t - p.t0;
      if (x <= 0.0) return 0.0;
      const double a = p.shape[0];
      const double b = p.shape[1];
      return p.D * std::exp(a * std::log(b) + (a - 1.0) * std::log(x) - b * x - std::lgamma(a));
    }
    case KernelKind::Beta: {
      const double scale = p.shape[2];
      const double u = (t - p.t0) / scale;
      if (u <= 0.0 || u >= 1.0) return 0.0;
      const double a = p.shape[0];
      const double b = p.shape[1];
      const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
      return p.D / scale * std::exp((a - 1.0) * std::log(u) + (b - 1.0) * std::log1p(-u) - log_beta);
    }
    case KernelKind::DoubleBoundedLognormal: {
      const double te = p.shape[2];
      if (t <= p.t0 || t >= te) return 0.0;
      const double x = t - p.t0;
      const double y = te - t;
      const double sigma = std::sqrt(p.shape[1]);
      const double z = (std::log(x / y) - p.shape[0]) / sigma;
      return p.D * (te - p.t0) * kInvSqrt2Pi / (sigma * x * y) * std::exp(-0.5 * z * z);
    }
    case KernelKind::GEV: {
      const double xi = p.shape[0];
      const double sigma = p.shape[2];
      const double log_s = gev_log_s(xi, p.shape[1], sigma, t - p.t0);
      if (!std::isfinite(log_s)) return 0.0;
      const double s = std::exp(log_s);
      return p.D / sigma * std::exp((xi + 1.0) * log_s - s);
    }
  }
  return 0.0;
}

double cumulative(const KernelParams& p, double t) noexcept {
  switch (p.kind) {
    case KernelKind::Gaussian:
      return p.D * numeric::normal_cdf((t - p.shape[0]) / std::sqrt(p.shape[1]));
    case KernelKind::Lognormal: {
      const double x = t - p.t0;
      if (x <= 0.0) return 0.0;
      return p.D * numeric::normal_cdf((std::log(x) - p.shape[0]) / std::sqrt(p.shape[1]));
    }
    case KernelKind::Gamma: {
      const double x = t - p.t0;
      if (x <= 0.0) return 0.0;
      return p.D * numeric::gamma_p(p.shape[0], p.shape[1] * x);
    }
    case KernelKind::Beta: {
      const double u = (t - p.t0) / p.shape[2];
      if (u <= 0.0) return 0.0;
      if (u >= 1.0) return p.D;
      return p.D * numeric::beta_inc(p.shape[0], p.shape[1], u);
    }
    case KernelKind::DoubleBoundedLognormal: {
      const double te = p.shape[2];
      if (t <= p.t0) return 0.0;
      if (t >= te) return p.D;
      return p.D * numeric::normal_cdf((std::log((t - p.t0) / (te - t)) - p.shape[0]) / std::sqrt(p.shape[1]));
    }
    case KernelKind::GEV: {
      const double log_s = gev_log_s(p.shape[0], p.shape[1], p.shape[2], t - p.t0);
      if (log_s == kInf) return 0.0;
      if (log_s == -kInf) return p.D;
      return p.D * std::exp(-std::exp(log_s));
    }
  }
  return 0.0;
}

double quantile(const KernelParams& params, double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidInput, "quantile level must be in (0, 1)");
  params.validate();
  return quantile_impl(params, p, false);
}

Interval support_interval(const KernelParams& params, double tail) {
  params.validate();
  const Interval hard = hard_support(params);
  Interval out;
  out.lo = std::isfinite(hard.lo) ? hard.lo : quantile_impl(params, tail, false);
  out.hi = std::isfinite(hard.hi) ? hard.hi : quantile_impl(params, tail, true);
  return out;
}

Moments params_to_moments(const KernelParams& p) {
  if (p.kind == KernelKind::GEV && !(p.shape[0] < 0.5))
    throw Error(ErrorCode::UndefinedVariance, "GEV variance undefined for xi >= 0.5");
  p.validate();
  switch (p.kind) {
    case KernelKind::Gaussian: return {p.shape[0], p.shape[1]};
    case KernelKind::Lognormal: {
      const double mu = p.shape[0];
      const double s2 = p.shape[1];
      return {std::exp(mu + 0.5 * s2), std::expm1(s2) * std::exp(2.0 * mu + s2)};
    }
    case KernelKind::Gamma: {
      const double a = p.shape[0];
      const double b = p.shape[1];
      return {a / b, a / (b * b)};
    }
    case KernelKind::Beta: {
      const double a = p.shape[0];
      const double b = p.shape[1];
      const double T = p.shape[2];
      const double ab = a + b;
      return {T * a / ab, T * T * a * b / (ab * ab * (ab + 1.0))};
    }
    case KernelKind::DoubleBoundedLognormal: return dbl_moments(p.shape[0], p.shape[1], p.shape[2] - p.t0);
    case KernelKind::GEV: {
      const double xi = p.shape[0];
      if (!(xi < 0.5)) throw Error(ErrorCode::UndefinedVariance, "GEV variance undefined for xi >= 0.5");
      const GevFactors f = gev_factors(xi);
      const double sigma = p.shape[2];
      return {p.shape[1] + sigma * f.mean, sigma * sigma * f.var};
    }
  }
  return {};
}

KernelParams moments_to_params(KernelKind kind, const Moments& m, double t0, double lobe_end, double D,
                               std::optional<LobeSamples> lobe) {
  if (!std::isfinite(m.M) || !std::isfinite(m.V) || !(m.V > 0.0))
    throw Error(ErrorCode::InfeasibleMoments, "moments must be finite with V > 0");
  switch (kind) {
    case KernelKind::Gaussian: {
      auto p = KernelParams::gaussian(D, m.M, m.V);
      p.t0 = t0;
      return p;
    }
    case KernelKind::Lognormal: {
      if (!(m.M > 0.0)) throw Error(ErrorCode::InfeasibleMoments, "lognormal needs M > 0 after t0");
      const double r = m.V / (m.M * m.M);
      return KernelParams::lognormal(D, t0, std::log(m.M) - 0.5 * std::log1p(r), std::log1p(r));
    }
    case KernelKind::Gamma: {
      if (!(m.M > 0.0)) throw Error(ErrorCode::InfeasibleMoments, "gamma needs M > 0 after t0");
      return KernelParams::gamma(D, t0, m.M * m.M / m.V, m.M / m.V);
    }
    case KernelKind::Beta: {
      const double T = lobe_end - t0;
      if (!(T > 0.0)) throw Error(ErrorCode::InfeasibleMoments, "beta needs lobe_end > t0");
      const double mn = m.M / T;
      const double vn = m.V / (T * T);
      if (!(mn > 0.0 && mn < 1.0) || !(vn < mn * (1.0 - mn)))
        throw Error(ErrorCode::InfeasibleMoments, "beta needs 0 < M < 1 and V < M(1 - M) on the normalized axis");
      const double k = mn * (1.0 - mn) / vn - 1.0;
      return KernelParams::beta(D, t0, k * mn, k * (1.0 - mn), T);
    }
    case KernelKind::DoubleBoundedLognormal: return fit_dbl(m, t0, lobe_end, D);
    case KernelKind::GEV: return fit_gev(m, t0, D, lobe);
  }
  throw Error(ErrorCode::UnsupportedKind, "unknown kernel kind");
}

Moments numeric_moments(const KernelParams& params) {
  params.validate();
  numeric::QuadratureOptions opts{1e-300, 1e-11, 4000};

  if (params.kind == KernelKind::GEV) {
    // Substituting s = exp(w) maps the lobe onto a smooth, rapidly decaying
    // integrand on the whole line even for heavy Frechet tails.
    const double xi = params.shape[0];
    const double mu = params.shape[1];
    const double sigma = params.shape[2];
    auto time_at = [&](double w) {
      const double offset = xi == 0.0 ? -w : std::expm1(-xi * w) / xi;
      return params.t0 + mu + sigma * offset;
    };
    auto weight = [](double w) { return std::exp(w - std::exp(w)); };
    const double w_lo = -40.0 / std::max(1.0 - 2.0 * std::max(xi, 0.0), 0.05);
    const double w_hi = std::log(60.0);
    const std::array<double, 3> cuts = {-3.0, 0.0, 1.5};
    const auto m0 = numeric::integrate(weight, w_lo, w_hi, opts, cuts);
    const auto m1 = numeric::integrate([&](double w) { return time_at(w) * weight(w); }, w_lo, w_hi, opts, cuts);
    if (!m0.converged || !m1.converged) throw Error(ErrorCode::NumericFailure, "GEV moment quadrature did not converge");
    const double M = m1.value / m0.value;
    const auto m2 = numeric::integrate(
        [&](double w) {
          const double d = time_at(w) - M;
          return d * d * weight(w);
        },
        w_lo, w_hi, opts, cuts);
    if (!m2.converged) throw Error(ErrorCode::NumericFailure, "GEV moment quadrature did not converge");
    return {M, m2.value / m0.value};
  }

  const Interval range = support_interval(params, 1e-15);
  std::vector<double> cuts;
  for (double q : {1e-6, 1e-3, 0.02, 0.1, 0.25, 0.5, 0.75, 0.9, 0.98, 0.999, 1.0 - 1e-6})
    cuts.push_back(quantile_impl(params, q, false));
  auto f = [&](double t) { return eval(params, t); };
  const auto m0 = numeric::integrate(f, range.lo, range.hi, opts, cuts);
  const auto m1 = numeric::integrate([&](double t) { return t * f(t); }, range.lo, range.hi, opts, cuts);
  if (!m0.converged || !m1.converged || !(m0.value > 0.0))
    throw Error(ErrorCode::NumericFailure, "moment quadrature did not converge");
  const double M = m1.value / m0.value;
  const auto m2 = numeric::integrate(
      [&](double t) {
        const double d = t - M;
        return d * d * f(t);
      },
      range.lo, range.hi, opts, cuts);
  if (!m2.converged) throw Error(ErrorCode::NumericFailure, "moment quadrature did not converge");
  return {M, m2.value / m0.value};
}

}  // namespace ktt
