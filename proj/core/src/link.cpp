#include "ktt/link.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "ktt/error.hpp"
#include "ktt/numeric.hpp"

namespace ktt {
namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// exp(i pi x^2 / 2) with the phase reduced through x^2 mod 4.
cplx unit_phase(double x) {
  const double hi = x * x;
  const double lo = std::fma(x, x, -hi);
  const double r = std::fmod(hi, 4.0) + lo;
  const double phase = 0.5 * pi * r;
  return {std::cos(phase), std::sin(phase)};
}

Fresnel fresnel_series(double x) {
  // C = sum (-1)^n (pi/2)^(2n) x^(4n+1) / ((2n)! (4n+1))
  // S = sum (-1)^n (pi/2)^(2n+1) x^(4n+3) / ((2n+1)! (4n+3))
  const double t = 0.5 * pi * x * x;
  double term = x;  // t^k x / k!
  double c = 0.0;
  double s = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double contrib = term / (2.0 * k + 1.0);
    const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
    if (k % 2 == 0) c += sign * contrib;
    else s += sign * contrib;
    term *= t / (k + 1.0);
    if (std::abs(term) < 1e-18 * std::max(std::abs(c), 1e-300) && k > 2) break;
  }
  return {c, s};
}

Fresnel fresnel_cont_frac(double x) {
  constexpr double tiny = 1e-300;
  cplx b(1.0, -pi * x * x);
  cplx cc = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  double n = -1.0;
  for (int k = 2; k < 1000; ++k) {
    n += 2.0;
    const double a = -n * (n + 1.0);
    b += 4.0;
    d = 1.0 / (a * d + b);
    cc = b + a / cc;
    const cplx del = cc * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
  }
  h *= cplx(x, -x);
  const cplx cs = cplx(0.5, 0.5) * (1.0 - unit_phase(x) * h);
  return {cs.real(), cs.imag()};
}

// Composite Gauss-Legendre for int_0^1 w(tau) exp(i phase(tau)) dtau with a
// quadratic phase; the panel count follows the phase excursion.
template <class Weight>
cplx oscillatory_integral(double a2, double b1, double c0, Weight&& weight) {
  const auto& rule = numeric::gauss_legendre(16);
  const double excursion = std::abs(b1) + 2.0 * std::abs(a2);
  const int panels = std::max(1, static_cast<int>(std::ceil(excursion / 2.0)));
  cplx sum = 0.0;
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double center = (p + 0.5) * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double tau = center + 0.5 * h * rule.nodes[i];
      const double phase = c0 + tau * (b1 + a2 * tau);
      sum += rule.weights[i] * weight(tau) * cplx(std::cos(phase), std::sin(phase));
    }
  }
  return 0.5 * h * sum;
}

double guess_a(double phi0, double phi1) {
  constexpr double cf[] = {2.989696028701907,  0.716228953608281, -0.458969738821509,
                           -0.502821153340377, 0.261062141752652, -0.045854475238709};
  double x = phi0 / pi;
  double y = phi1 / pi;
  const double xy = x * y;
  x *= x;
  y *= y;
  return (phi0 + phi1) * (cf[0] + xy * (cf[1] + xy * cf[2]) + (cf[3] + xy * cf[4]) * (x + y) + cf[5] * (x * x + y * y));
}

struct Residual {
  double g;       // int sin(theta(tau)) dtau, zero at the solution
  double dg;      // d g / d A
  double chord;   // int cos(theta(tau)) dtau, must be positive
};

// theta(tau) = A tau^2 + (delta - A) tau + phi0, all relative to the chord.
Residual residual(double A, double delta, double phi0) {
  const cplx base = oscillatory_integral(A, delta - A, phi0, [](double) { return 1.0; });
  const cplx moment = oscillatory_integral(A, delta - A, phi0, [](double t) { return t * t - t; });
  return {base.imag(), moment.real(), base.real()};
}

void check_point(Point p, const char* what) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw Error(ErrorCode::InvalidInput, std::string("non-finite ") + what);
}

}  // namespace

std::string_view to_string(LinkKind kind) noexcept { return kind == LinkKind::Arc ? "arc" : "clothoid"; }

std::optional<LinkKind> link_kind_from_string(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "arc" || lower == "circle" || lower == "circumference") return LinkKind::Arc;
  if (lower == "clothoid" || lower == "euler") return LinkKind::Clothoid;
  return std::nullopt;
}

Fresnel fresnel(double u) noexcept {
  const double x = std::abs(u);
  Fresnel f = x <= 1.6 ? fresnel_series(x) : fresnel_cont_frac(x);
  if (u < 0) {
    f.C = -f.C;
    f.S = -f.S;
  }
  return f;
}

Fresnel fresnel_generalized(double a, double b) noexcept {
  if (a == 0.0) {
    if (std::abs(b) < 1e-4) {
      // (e^{ib} - 1) / (ib) = sum (ib)^k / (k+1)!
      const double b2 = b * b;
      return {1.0 - b2 / 6.0 + b2 * b2 / 120.0, b / 2.0 - b * b2 / 24.0 + b * b2 * b2 / 720.0};
    }
    return {std::sin(b) / b, (1.0 - std::cos(b)) / b};
  }
  if (std::abs(a) < 1e-2) {
    const cplx r = oscillatory_integral(0.5 * a, b, 0.0, [](double) { return 1.0; });
    return {r.real(), r.imag()};
  }
  // Complete the square: a/2 (tau + b/a)^2 - b^2 / (2a).
  const double sign = a > 0 ? 1.0 : -1.0;
  const double k = std::sqrt(std::abs(a) / pi);
  const double w0 = k * b / a;
  const double w1 = k * (1.0 + b / a);
  const Fresnel f0 = fresnel(w0);
  const Fresnel f1 = fresnel(w1);
  const cplx diff(f1.C - f0.C, sign * (f1.S - f0.S));
  const double shift = -b * b / (2.0 * a);
  const cplx r = cplx(std::cos(shift), std::sin(shift)) * diff / k;
  return {r.real(), r.imag()};
}

ClothoidSegment fit_g1(const LinkSpec& spec, G1FitStats* stats) {
  check_point(spec.p_start, "start point");
  check_point(spec.p_end, "end point");
  const Point chord = spec.p_end - spec.p_start;
  const double r = norm(chord);
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidInput, "link endpoints coincide");
  const double chord_angle = heading(chord);
  const double phi0 = wrap_angle(spec.theta_s - chord_angle);
  const double phi1 = wrap_angle(spec.theta_e - chord_angle);
  if (std::abs(phi0) >= pi * (1.0 - 1e-9) || std::abs(phi1) >= pi * (1.0 - 1e-9))
    throw Error(ErrorCode::InvalidInput, "tangent angles must differ from the chord direction by less than pi");
  const double delta = phi1 - phi0;

  G1FitStats local;
  G1FitStats& st = stats ? *stats : local;
  st = {};

  ClothoidSegment seg{spec.p_start, spec.theta_s, 0.0, 0.0, r};
  if (phi0 == 0.0 && phi1 == 0.0) return seg;

  const double guess = guess_a(phi0, phi1);
  double A = guess;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    st.newton_iterations = it + 1;
    const Residual res = residual(A, delta, phi0);
    if (std::abs(res.g) < 4.0 * kEps) {
      converged = res.chord > 0.0;
      break;
    }
    if (res.dg == 0.0 || !std::isfinite(res.dg)) break;
    const double step = res.g / res.dg;
    A -= step;
    if (!std::isfinite(A) || std::abs(A - guess) > 8.0 * pi) break;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(A))) {
      converged = residual(A, delta, phi0).chord > 0.0;
      break;
    }
  }

  if (!converged) {
    // Bracket the sign change nearest the guess with a positive chord
    // projection, then bisect.
    st.used_bracketing = true;
    const double h = pi / 16.0;
    bool found = false;
    double lo = 0.0;
    double hi = 0.0;
    for (int k = 0; k < 256 && !found; ++k) {
      for (int dir : {1, -1}) {
        const double a0 = guess + dir * k * h;
        const double a1 = a0 + dir * h;
        const Residual r0 = residual(a0, delta, phi0);
        const Residual r1 = residual(a1, delta, phi0);
        if ((r0.g <= 0.0) != (r1.g <= 0.0) && (r0.chord > 0.0 || r1.chord > 0.0)) {
          lo = std::min(a0, a1);
          hi = std::max(a0, a1);
          found = true;
          break;
        }
      }
    }
    if (!found) throw Error(ErrorCode::FitFailure, "G1 clothoid fit: no admissible root");
    double glo = residual(lo, delta, phi0).g;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double gm = residual(mid, delta, phi0).g;
      if ((gm <= 0.0) == (glo <= 0.0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    A = 0.5 * (lo + hi);
    if (!(residual(A, delta, phi0).chord > 0.0))
      throw Error(ErrorCode::FitFailure, "G1 clothoid fit did not converge");
  }

  const Fresnel xy = fresnel_generalized(2.0 * A, delta - A);
  const double x = std::cos(phi0) * xy.C - std::sin(phi0) * xy.S;
  seg.L = r / x;
  seg.kappa0 = (delta - A) / seg.L;
  seg.kappa_rate = 2.0 * A / (seg.L * seg.L);
  return seg;
}

ClothoidSegment make_arc(const LinkSpec& spec) {
  check_point(spec.p_start, "start point");
  check_point(spec.p_end, "end point");
  const Point chord = spec.p_end - spec.p_start;
  const double r = norm(chord);
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidInput, "link endpoints coincide");
  const double phi0 = wrap_angle(spec.theta_s - heading(chord));
  if (std::abs(phi0) >= pi * (1.0 - 1e-12))
    throw Error(ErrorCode::InvalidInput, "arc start tangent points away from the end point");
  ClothoidSegment seg{spec.p_start, spec.theta_s, 0.0, 0.0, r};
  if (phi0 != 0.0) {
    seg.kappa0 = -2.0 * std::sin(phi0) / r;
    seg.L = r * phi0 / std::sin(phi0);
  }
  return seg;
}

ClothoidSegment fit_link(const LinkSpec& spec) {
  return spec.kind == LinkKind::Arc ? make_arc(spec) : fit_g1(spec);
}

double length(const ClothoidSegment& seg) noexcept { return seg.L; }

Pose point_at(const ClothoidSegment& seg, double s) {
  const double slack = 1e-12 * std::max(1.0, seg.L);
  if (!(s >= -slack && s <= seg.L + slack))
    throw Error(ErrorCode::OutOfRange, "arc length " + std::to_string(s) + " outside [0, " + std::to_string(seg.L) + "]");
  s = std::clamp(s, 0.0, seg.L);
  const Fresnel g = fresnel_generalized(seg.kappa_rate * s * s, seg.kappa0 * s);
  const double c = std::cos(seg.theta0);
  const double sn = std::sin(seg.theta0);
  const Point d{s * (c * g.C - sn * g.S), s * (sn * g.C + c * g.S)};
  return {seg.origin + d, seg.theta_at(s)};
}

}  // namespace ktt
