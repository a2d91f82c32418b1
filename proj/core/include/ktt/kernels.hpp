#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace ktt {

enum class KernelKind { Gaussian, Lognormal, Gamma, Beta, DoubleBoundedLognormal, GEV };

inline constexpr std::array<KernelKind, 6> kAllKernelKinds = {
    KernelKind::Gaussian, KernelKind::Lognormal, KernelKind::Gamma,
    KernelKind::Beta,     KernelKind::DoubleBoundedLognormal, KernelKind::GEV};

/// Lower-case canonical name: gaussian, lognormal, gamma, beta, dbl, gev.
std::string_view to_string(KernelKind kind) noexcept;
/// Case-insensitive; also accepts "double-bounded-lognormal".
std::optional<KernelKind> kernel_kind_from_string(std::string_view name) noexcept;

/// Names of the shape parameters of each kind, in storage order.
///   Gaussian  {mu, sigma2}          absolute time
///   Lognormal {mu, sigma2}          on log(t - t0)
///   Gamma     {alpha, beta}         beta is a rate (1/s)
///   Beta      {alpha, beta, scale}  support (t0, t0 + scale)
///   DBL       {mu, sigma2, te}      on log((t - t0) / (te - t))
///   GEV       {xi, mu, sigma}       mu measured from t0
std::span<const std::string_view> shape_names(KernelKind kind) noexcept;

/// One stroke's velocity parameters: a bell-shaped lobe of area D.
struct KernelParams {
  KernelKind kind = KernelKind::Gaussian;
  double t0 = 0.0;
  double D = 1.0;
  std::array<double, 4> shape{};

  static KernelParams gaussian(double D, double mu, double sigma2);
  static KernelParams lognormal(double D, double t0, double mu, double sigma2);
  static KernelParams gamma(double D, double t0, double alpha, double beta);
  static KernelParams beta(double D, double t0, double alpha, double beta, double scale = 1.0);
  static KernelParams dbl(double D, double t0, double mu, double sigma2, double te);
  static KernelParams gev(double D, double t0, double xi, double mu, double sigma);

  /// Shape parameter by name; throws InvalidInput for unknown names.
  [[nodiscard]] double param(std::string_view name) const;
  void set_param(std::string_view name, double value);
  [[nodiscard]] std::size_t shape_size() const noexcept { return shape_names(kind).size(); }

  [[nodiscard]] bool valid() const noexcept;
  /// Throws InvalidInput naming the violated constraint.
  void validate() const;

  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// First moment and variance of the normalized lobe.
struct Moments {
  double M = 0.0;
  double V = 0.0;
};

/// Samples of an observed lobe, used as the hill-climbing target for GEV.
struct LobeSamples {
  std::span<const double> t;
  std::span<const double> v;
};

/// Origin the closed-form moments are measured from: 0 for Gaussian, t0 otherwise.
double moment_origin(const KernelParams& params) noexcept;

/// Speed of the stroke at time t; exactly 0 outside the kernel's support.
double eval(const KernelParams& params, double t) noexcept;

/// Integral of eval from -inf to t.
double cumulative(const KernelParams& params, double t) noexcept;

/// Time at which cumulative reaches p * D, 0 < p < 1 (bisection on cumulative).
double quantile(const KernelParams& params, double p);

/// Interval holding all but `tail` of the mass on each side, clipped to the
/// kernel's support bounds.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval support_interval(const KernelParams& params, double tail = 1e-12);

/// Closed-form moments relative to moment_origin(). DBL moments are computed
/// by quadrature in the logit-normal variable. GEV requires xi < 0.5.
Moments params_to_moments(const KernelParams& params);

/// Inverse of params_to_moments. `m` is relative to t0 (absolute for
/// Gaussian). Beta rescales its time axis to (t0, lobe_end). GEV refines xi
/// by hill-climbing against `lobe` when given (xi = 0 otherwise); DBL is fitted
/// by coordinate-wise golden-section hill-climbing on the moment mismatch.
KernelParams moments_to_params(KernelKind kind, const Moments& m, double t0, double lobe_end, double D = 1.0,
                               std::optional<LobeSamples> lobe = std::nullopt);

/// Absolute-time moments by adaptive quadrature of the lobe.
Moments numeric_moments(const KernelParams& params);

}  // namespace ktt
