#pragma once

#include <optional>
#include <string_view>

#include "ktt/geometry.hpp"

namespace ktt {

enum class LinkKind { Arc, Clothoid };

std::string_view to_string(LinkKind kind) noexcept;
std::optional<LinkKind> link_kind_from_string(std::string_view name) noexcept;

/// Geometry of one stroke: virtual target points and tangent angles.
struct LinkSpec {
  LinkKind kind = LinkKind::Clothoid;
  Point p_start;
  Point p_end;
  double theta_s = 0.0;
  double theta_e = 0.0;

  friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

/// Arc-length parameterized curve with linearly varying curvature. Positive
/// curvature turns counterclockwise. A circular arc has kappa_rate == 0.
struct ClothoidSegment {
  Point origin;
  double theta0 = 0.0;
  double kappa0 = 0.0;
  double kappa_rate = 0.0;
  double L = 0.0;

  [[nodiscard]] double theta_at(double s) const noexcept { return theta0 + s * (kappa0 + 0.5 * kappa_rate * s); }
  [[nodiscard]] double curvature_at(double s) const noexcept { return kappa0 + kappa_rate * s; }
};

struct Pose {
  Point p;
  double theta = 0.0;  // unwrapped tangent angle
};

struct Fresnel {
  double C = 0.0;
  double S = 0.0;
};

/// C(u) = int_0^u cos(pi v^2 / 2) dv and S(u) = int_0^u sin(pi v^2 / 2) dv.
/// Maclaurin series for |u| <= 1.6, continued fraction of the complementary
/// error function beyond.
Fresnel fresnel(double u) noexcept;

/// int_0^1 exp(i (a tau^2 / 2 + b tau)) dtau, returned as (real, imag).
Fresnel fresnel_generalized(double a, double b) noexcept;

struct G1FitStats {
  int newton_iterations = 0;
  bool used_bracketing = false;
};

/// G1 Hermite clothoid from p_start/theta_s to p_end/theta_e. Both tangents
/// must differ from the chord direction by less than pi.
ClothoidSegment fit_g1(const LinkSpec& spec, G1FitStats* stats = nullptr);

/// Circular arc through p_start and p_end with start tangent theta_s
/// (theta_e is not used).
ClothoidSegment make_arc(const LinkSpec& spec);

/// fit_g1 or make_arc depending on spec.kind.
ClothoidSegment fit_link(const LinkSpec& spec);

double length(const ClothoidSegment& seg) noexcept;

/// Position and tangent at arc length s in [0, L].
Pose point_at(const ClothoidSegment& seg, double s);

}  // namespace ktt
