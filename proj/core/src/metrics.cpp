#include "ktt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ktt/error.hpp"
#include "ktt/numeric.hpp"

namespace ktt {
namespace {

void check_grids(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidInput, "SNR inputs are on different time grids");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9 * std::max(1.0, std::abs(a[i])))
      throw Error(ErrorCode::InvalidInput, "SNR inputs are on different time grids");
  }
}

// Midranks doubled so that every rank is an integer.
std::vector<std::int64_t> doubled_midranks(const std::vector<double>& pooled, std::vector<std::int64_t>* tie_sizes) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<std::int64_t> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // ranks i+1 .. j+1 averaged, doubled: (i + 1) + (j + 1)
    const auto r2 = static_cast<std::int64_t>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r2;
    if (tie_sizes) tie_sizes->push_back(static_cast<std::int64_t>(j - i + 1));
    i = j + 1;
  }
  return ranks;
}

}  // namespace

ReconstructionReport ReconstructionReport::make(double snr_t, double snr_v, int n_strokes) {
  if (n_strokes < 1) throw Error(ErrorCode::InvalidInput, "report needs at least one stroke");
  return {snr_t, snr_v, n_strokes, snr_t / n_strokes, snr_v / n_strokes};
}

double snr_db(double signal_power, double error_power) noexcept {
  if (!(error_power > 0.0)) return kSnrCapDb;
  if (!(signal_power > 0.0)) return -kSnrCapDb;
  return std::min(kSnrCapDb, 10.0 * std::log10(signal_power / error_power));
}

double snr_t(std::span<const Point> original, std::span<const Point> reconstructed) {
  if (original.size() != reconstructed.size() || original.empty())
    throw Error(ErrorCode::InvalidInput, "SNR inputs differ in length");
  Point c{};
  for (Point p : original) c = c + p;
  c = (1.0 / static_cast<double>(original.size())) * c;
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const Point d = original[i] - c;
    const Point e = original[i] - reconstructed[i];
    signal += dot(d, d);
    error += dot(e, e);
  }
  return snr_db(signal, error);
}

double snr_t(const Trajectory& original, const Trajectory& reconstructed) {
  const auto to = original.times();
  const auto tr = reconstructed.times();
  check_grids(to, tr);
  std::vector<Point> a(original.size()), b(reconstructed.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = original[i].p();
    b[i] = reconstructed[i].p();
  }
  return snr_t(a, b);
}

double snr_v(const VelocitySeries& original, const VelocitySeries& reconstructed) {
  check_grids(original.t, reconstructed.t);
  if (original.vx.size() != original.t.size() || reconstructed.vx.size() != reconstructed.t.size())
    throw Error(ErrorCode::InvalidInput, "malformed velocity series");
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < original.t.size(); ++i) {
    signal += original.vx[i] * original.vx[i] + original.vy[i] * original.vy[i];
    const double ex = original.vx[i] - reconstructed.vx[i];
    const double ey = original.vy[i] - reconstructed.vy[i];
    error += ex * ex + ey * ey;
  }
  return snr_db(signal, error);
}

TestResult jarque_bera(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 8) throw Error(ErrorCode::InvalidInput, "Jarque-Bera needs at least 8 samples");
  const double nd = static_cast<double>(n);
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / nd;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  if (!(m2 > 0.0)) throw Error(ErrorCode::DegenerateSample, "Jarque-Bera: zero-variance sample");
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  const double jb = nd / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
  const double p = std::exp(-0.5 * jb);  // chi-squared(2) upper tail
  return {jb, p, p < 0.05};
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, MannWhitneyMethod method) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  if (na == 0 || nb == 0) throw Error(ErrorCode::InvalidInput, "Mann-Whitney needs non-empty samples");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  for (double x : pooled)
    if (std::isnan(x)) throw Error(ErrorCode::InvalidInput, "Mann-Whitney: NaN sample");
  const std::size_t n = na + nb;

  std::vector<std::int64_t> ties;
  const auto ranks = doubled_midranks(pooled, &ties);
  std::int64_t ra2 = 0;
  for (std::size_t i = 0; i < na; ++i) ra2 += ranks[i];
  const auto na64 = static_cast<std::int64_t>(na);
  const auto nb64 = static_cast<std::int64_t>(nb);
  // 2U = 2R - n_a (n_a + 1); distances from the mean n_a n_b / 2 kept doubled.
  const std::int64_t u2 = ra2 - na64 * (na64 + 1);
  const std::int64_t dev2 = std::abs(u2 - na64 * nb64);
  const double u = 0.5 * static_cast<double>(u2);

  const bool exact = method == MannWhitneyMethod::Exact || (method == MannWhitneyMethod::Auto && n <= 20);
  double p = 1.0;
  if (exact) {
    // Count subsets of size n_a by doubled rank sum: counts[k][s].
    const std::int64_t max_sum = std::accumulate(ranks.begin(), ranks.end(), std::int64_t{0});
    const std::size_t width = static_cast<std::size_t>(max_sum) + 1;
    std::vector<std::vector<double>> counts(na + 1, std::vector<double>(width, 0.0));
    counts[0][0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<std::size_t>(ranks[i]);
      for (std::size_t k = std::min(i + 1, na); k >= 1; --k) {
        auto& dst = counts[k];
        const auto& src = counts[k - 1];
        for (std::size_t s = width; s-- > r;) dst[s] += src[s - r];
      }
    }
    double extreme = 0.0;
    double total = 0.0;
    const std::int64_t offset = na64 * (na64 + 1) + na64 * nb64;
    for (std::size_t s = 0; s < width; ++s) {
      const double c = counts[na][s];
      if (c == 0.0) continue;
      total += c;
      if (std::abs(static_cast<std::int64_t>(s) - offset) >= dev2) extreme += c;
    }
    p = extreme / total;
  } else {
    const double nd = static_cast<double>(n);
    double tie_term = 0.0;
    for (std::int64_t t : ties) tie_term += static_cast<double>(t * t * t - t);
    const double var = static_cast<double>(na64 * nb64) / 12.0 * ((nd + 1.0) - tie_term / (nd * (nd - 1.0)));
    if (var > 0.0) {
      const double dev = std::max(0.0, 0.5 * static_cast<double>(dev2) - 0.5);
      p = std::min(1.0, std::erfc(dev / std::sqrt(var) / std::sqrt(2.0)));
    }
  }
  return {u, p, p < 0.05};
}

}  // namespace ktt
