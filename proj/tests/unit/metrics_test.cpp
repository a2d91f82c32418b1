#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "test_util.hpp"

namespace ktt {
namespace {

std::vector<Point> circle(double R, int n) {
  std::vector<Point> p;
  for (int i = 0; i < n; ++i) p.push_back(R * unit(2 * std::numbers::pi * i / n));
  return p;
}

// Two-sided p over all splits of the pooled sample, by direct enumeration.
double brute_force_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size(), na = a.size();
  auto u_of = [&](const std::vector<bool>& in_a) {
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_a[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (in_a[j]) continue;
        u += pooled[i] > pooled[j] ? 1.0 : pooled[i] == pooled[j] ? 0.5 : 0.0;
      }
    }
    return u;
  };
  std::vector<bool> observed(n, false);
  std::fill(observed.begin(), observed.begin() + static_cast<long>(na), true);
  const double mu = 0.5 * static_cast<double>(na * b.size());
  const double dev = std::abs(u_of(observed) - mu);
  std::vector<bool> mask(n, false);
  std::fill(mask.end() - static_cast<long>(na), mask.end(), true);
  long total = 0, extreme = 0;
  do {
    ++total;
    extreme += std::abs(u_of(mask) - mu) >= dev - 1e-9;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

TEST(Snr, TrajectoryExamples) {
  const auto c = circle(1.0, 360);
  EXPECT_EQ(snr_t(c, c), kSnrCapDb);
  EXPECT_NEAR(snr_t(c, std::vector<Point>(c.size(), Point{})), 0.0, 1e-12);
  EXPECT_NEAR(snr_t(c, circle(0.9, 360)), 20.0, 1e-9);
}

TEST(Snr, VelocityExamples) {
  VelocitySeries a{{0, 1, 2, 3}, {1, -2, 0.5, 3}, {0, 1, -1, 2}};
  EXPECT_EQ(snr_v(a, a), kSnrCapDb);
  VelocitySeries zero{a.t, {0, 0, 0, 0}, {0, 0, 0, 0}};
  EXPECT_NEAR(snr_v(a, zero), 0.0, 1e-12);
  VelocitySeries half = a;
  for (auto& v : half.vx) v *= 0.5;
  for (auto& v : half.vy) v *= 0.5;
  EXPECT_NEAR(snr_v(a, half), 10 * std::log10(4.0), 1e-12);
  VelocitySeries shifted = a;
  shifted.t[2] += 0.1;
  EXPECT_KTT_ERROR(snr_v(a, shifted), ErrorCode::InvalidInput);
}

TEST(Snr, GridMismatchIsRejected) {
  const Trajectory a({{0, 0, 0}, {1, 1, 0}, {2, 2, 1}, {3, 3, 3}});
  const Trajectory b({{0, 0, 0}, {1, 1, 0}, {2.5, 2, 1}, {3, 3, 3}});
  EXPECT_KTT_ERROR(snr_t(a, b), ErrorCode::InvalidInput);
  EXPECT_KTT_ERROR(snr_t(circle(1, 4), circle(1, 5)), ErrorCode::InvalidInput);
}

TEST(Snr, TranslationInvariant) {
  std::mt19937_64 rng(5);
  auto o = circle(1.0, 100), r = circle(1.0, 100);
  for (auto& p : r) p = p + Point{test::uniform(rng, -0.1, 0.1), test::uniform(rng, -0.1, 0.1)};
  const double base = snr_t(o, r);
  for (auto& p : o) p = p + Point{5, -3};
  for (auto& p : r) p = p + Point{5, -3};
  EXPECT_NEAR(snr_t(o, r), base, 1e-9);
}

TEST(Snr, VelocityNoiseLadderIsMonotone) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> noise;
  VelocitySeries a;
  for (int i = 0; i < 500; ++i) {
    a.t.push_back(i * 0.005);
    a.vx.push_back(std::sin(i * 0.05));
    a.vy.push_back(std::cos(i * 0.03));
  }
  std::vector<double> nx, ny;
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    nx.push_back(noise(rng));
    ny.push_back(noise(rng));
  }
  double prev = kSnrCapDb + 1;
  for (double amp : {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.5}) {
    VelocitySeries r = a;
    for (std::size_t i = 0; i < a.t.size(); ++i) {
      r.vx[i] += amp * nx[i];
      r.vy[i] += amp * ny[i];
    }
    const double s = snr_v(a, r);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(Report, PerStrokeRatios) {
  const auto r = ReconstructionReport::make(30.0, 21.0, 3);
  EXPECT_EQ(r.snr_t_per_n, 10.0);
  EXPECT_EQ(r.snr_v_per_n, 7.0);
  EXPECT_KTT_ERROR(ReconstructionReport::make(1, 1, 0), ErrorCode::InvalidInput);
}

TEST(JarqueBera, NormalSamplesRarelyReject) {
  int accepted = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    std::mt19937_64 rng(1000 + rep);
    std::normal_distribution<double> n;
    std::vector<double> x(10000);
    for (double& v : x) v = n(rng);
    const auto r = jarque_bera(x);
    EXPECT_EQ(r.reject_at_5pct, r.p_value < 0.05);
    accepted += !r.reject_at_5pct;
  }
  EXPECT_GE(accepted, 90);
}

TEST(JarqueBera, SkewedSamplesReject) {
  std::mt19937_64 rng(2);
  std::lognormal_distribution<double> ln;
  std::vector<double> x(500);
  for (double& v : x) v = ln(rng);
  const auto r = jarque_bera(x);
  EXPECT_TRUE(r.reject_at_5pct);
  EXPECT_GT(r.statistic, 5.99);
}

TEST(JarqueBera, SymmetricSetHasOnlyKurtosisTerm) {
  const std::vector<double> x{-1, -1, 1, 1, -1, -1, 1, 1};
  const auto r = jarque_bera(x);
  // S = 0, K = 1 for a two-point symmetric set.
  EXPECT_NEAR(r.statistic, 8.0 / 6.0 * (4.0 / 4.0), 1e-14);
  EXPECT_NEAR(r.p_value, std::exp(-r.statistic / 2), 1e-15);
  EXPECT_KTT_ERROR(jarque_bera(std::vector<double>(10, 3.0)), ErrorCode::DegenerateSample);
  EXPECT_KTT_ERROR(jarque_bera(std::vector<double>{1, 2, 3}), ErrorCode::InvalidInput);
}

TEST(MannWhitney, Examples) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const auto same = mann_whitney_u(a, a);
  EXPECT_EQ(same.statistic, 12.5);
  EXPECT_NEAR(same.p_value, 1.0, 1e-12);
  const auto sep = mann_whitney_u(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6});
  EXPECT_EQ(sep.statistic, 0.0);
  EXPECT_NEAR(sep.p_value, 0.1, 1e-15);
  EXPECT_FALSE(sep.reject_at_5pct);
}

TEST(MannWhitney, ExactMatchesBruteForce) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> a(4), b(4);
    for (double& v : a) v = std::round(test::uniform(rng, 0, 6));
    for (double& v : b) v = std::round(test::uniform(rng, 0, 6));
    EXPECT_NEAR(mann_whitney_u(a, b, MannWhitneyMethod::Exact).p_value, brute_force_p(a, b), 1e-15);
  }
}

TEST(MannWhitney, SymmetricInArguments) {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> a(7), b(12);
    for (double& v : a) v = std::round(test::uniform(rng, 0, 10));
    for (double& v : b) v = std::round(test::uniform(rng, 0, 10));
    const auto ab = mann_whitney_u(a, b), ba = mann_whitney_u(b, a);
    EXPECT_EQ(ba.statistic, 7.0 * 12.0 - ab.statistic);
    EXPECT_EQ(ba.p_value, ab.p_value);
  }
}

TEST(MannWhitney, ExactAndNormalAgreeAtTenVersusTen) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> a(10), b(10);
    for (double& v : a) v = n(rng);
    for (double& v : b) v = n(rng) + 0.5;
    const double pe = mann_whitney_u(a, b, MannWhitneyMethod::Exact).p_value;
    const double pn = mann_whitney_u(a, b, MannWhitneyMethod::Normal).p_value;
    EXPECT_NEAR(pe, pn, 0.02);
    EXPECT_EQ(mann_whitney_u(a, b).p_value, pe);
  }
}

}  // namespace
}  // namespace ktt
