#pragma once

#include <span>

#include "ktt/trajectory.hpp"

namespace ktt {

/// SNRs above this are reported as the cap (exact reconstructions).
inline constexpr double kSnrCapDb = 120.0;

struct ReconstructionReport {
  double snr_t = 0.0;
  double snr_v = 0.0;
  int n_strokes = 1;
  double snr_t_per_n = 0.0;
  double snr_v_per_n = 0.0;

  static ReconstructionReport make(double snr_t, double snr_v, int n_strokes);
};

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject_at_5pct = false;
};

/// 10 log10 of signal power over error power, capped at kSnrCapDb. Returns
/// kSnrCapDb when the error power is zero.
double snr_db(double signal_power, double error_power) noexcept;

/// Trajectory-domain SNR; signal power is measured about the original's
/// centroid. Both trajectories must share the time grid.
double snr_t(const Trajectory& original, const Trajectory& reconstructed);
double snr_t(std::span<const Point> original, std::span<const Point> reconstructed);

/// Velocity-domain SNR on a shared time grid.
double snr_v(const VelocitySeries& original, const VelocitySeries& reconstructed);

/// Jarque-Bera normality test (chi-squared with 2 degrees of freedom). n >= 8.
TestResult jarque_bera(std::span<const double> samples);

enum class MannWhitneyMethod {
  Auto,    // exact for n_a + n_b <= 20, normal approximation above
  Exact,   // permutation distribution of the midrank sum
  Normal,  // normal approximation with tie and continuity correction
};

/// Two-sided Mann-Whitney U test; the statistic is U of sample `a`.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          MannWhitneyMethod method = MannWhitneyMethod::Auto);

}  // namespace ktt
