#include <cmath>
#include <numbers>

#include "test_util.hpp"

namespace ktt {
namespace {

SpeedProfile bumps(const std::vector<std::pair<double, double>>& centers_sigmas, double rate, double duration) {
  SpeedProfile sp;
  const int n = static_cast<int>(std::lround(duration * rate));
  for (int i = 0; i <= n; ++i) {
    const double t = i / rate;
    double v = 0.0;
    for (auto [c, s] : centers_sigmas) v += std::exp(-0.5 * (t - c) * (t - c) / (s * s));
    sp.t.push_back(t);
    sp.v.push_back(v);
  }
  return sp;
}

// Straight-line trajectory along x whose speed is `sp`.
Trajectory along_x(const SpeedProfile& sp) {
  std::vector<double> x{0.0}, y(sp.t.size(), 0.0);
  for (std::size_t i = 1; i < sp.t.size(); ++i) x.push_back(x.back() + 0.5 * (sp.v[i] + sp.v[i - 1]) * (sp.t[i] - sp.t[i - 1]));
  return test::make_trajectory(sp.t, x, y);
}

TEST(SalientPoints, SingleLobeGivesEndpoints) {
  const auto s = find_salient_points(bumps({{0.5, 0.1}}, 200, 1.0));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.front().index, 0u);
  EXPECT_EQ(s.back().index, 200u);
}

TEST(SalientPoints, TwoLobesGiveTheMinimum) {
  const auto sp = bumps({{0.3, 0.06}, {0.8, 0.1}}, 200, 1.2);
  std::size_t argmin = 0;
  for (std::size_t i = 60; i < 160; ++i)
    if (sp.v[i] < sp.v[argmin] || argmin == 0) argmin = i;
  const auto s = find_salient_points(sp);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_LE(std::abs(static_cast<long>(s[1].index) - static_cast<long>(argmin)), 1);
  EXPECT_LT(s[0].t, s[1].t);
  EXPECT_LT(s[1].t, s[2].t);
}

TEST(SalientPoints, FlatProfileGivesEndpoints) {
  SpeedProfile sp;
  for (int i = 0; i < 100; ++i) {
    sp.t.push_back(i * 0.01);
    sp.v.push_back(2.0);
  }
  EXPECT_EQ(find_salient_points(sp).size(), 2u);
  EXPECT_KTT_ERROR(find_salient_points(SpeedProfile{{0, 1, 2}, {0, 1, 0}}), ErrorCode::InvalidInput);
}

TEST(SalientPoints, ProminenceAndGapFilters) {
  // A shallow ripple on one lobe is ignored; two close minima keep one.
  auto sp = bumps({{0.5, 0.15}}, 200, 1.0);
  for (std::size_t i = 0; i < sp.v.size(); ++i) sp.v[i] += 0.01 * std::sin(sp.t[i] * 90.0);
  EXPECT_EQ(find_salient_points(sp).size(), 2u);
  const auto three = bumps({{0.3, 0.03}, {0.37, 0.03}, {0.44, 0.03}}, 200, 0.8);
  EXPECT_EQ(find_salient_points(three, 0.05, 0.0).size(), 4u);
  EXPECT_EQ(find_salient_points(three, 0.05, 0.1).size(), 3u);
}

Trajectory arc_trajectory(double R, double a0, double a1, int n, double rot = 0.0) {
  std::vector<double> t, x, y;
  for (int i = 0; i <= n; ++i) {
    const double a = a0 + (a1 - a0) * i / n;
    t.push_back(i * 0.005);
    x.push_back(R * std::cos(a + rot));
    y.push_back(R * std::sin(a + rot));
  }
  return test::make_trajectory(t, x, y);
}

SalientPoint at(const Trajectory& tr, std::size_t i) { return {i, tr[i].t, tr[i].p()}; }

TEST(EstimateAngles, StraightLine) {
  std::vector<double> t, x, y;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(i * 0.01);
    x.push_back(1.0 + 0.5 * i * i * 0.001);
    y.push_back(2.0 + 0.5 * i * i * 0.001);
  }
  const auto tr = test::make_trajectory(t, x, y);
  const auto a = estimate_angles(tr, at(tr, 0), at(tr, 40));
  EXPECT_NEAR(a.theta_s, std::numbers::pi / 4, 1e-12);
  EXPECT_NEAR(a.theta_e, std::numbers::pi / 4, 1e-12);
  EXPECT_FALSE(a.fallback);
}

TEST(EstimateAngles, CircleTangents) {
  const double a0 = 0.2, a1 = 2.0;
  const auto tr = arc_trajectory(3.0, a0, a1, 100);
  const auto a = estimate_angles(tr, at(tr, 0), at(tr, 100));
  const double tol = 0.5 * std::numbers::pi / 180.0;
  EXPECT_NEAR(wrap_angle(a.theta_s - (a0 + std::numbers::pi / 2)), 0.0, tol);
  EXPECT_NEAR(wrap_angle(a.theta_e - (a1 + std::numbers::pi / 2)), 0.0, tol);
  const double mid = 0.5 * (a0 + a1);
  EXPECT_NEAR(norm(a.mp - Point{3 * std::cos(mid), 3 * std::sin(mid)}), 0.0, 1e-3);
}

TEST(EstimateAngles, RotationEquivariant) {
  const double phi = 1.1;
  const auto a = arc_trajectory(2.0, 0.0, 1.5, 80);
  const auto b = arc_trajectory(2.0, 0.0, 1.5, 80, phi);
  const auto ea = estimate_angles(a, at(a, 0), at(a, 80));
  const auto eb = estimate_angles(b, at(b, 0), at(b, 80));
  EXPECT_NEAR(wrap_angle(eb.theta_s - ea.theta_s - phi), 0.0, 1e-9);
  EXPECT_NEAR(wrap_angle(eb.theta_e - ea.theta_e - phi), 0.0, 1e-9);
}

TEST(EstimateAngles, FallsBackWithFewSamples) {
  test::WarningCapture warnings;
  const auto tr = arc_trajectory(1.0, 0.0, 1.0, 20);
  const auto a = estimate_angles(tr, at(tr, 3), at(tr, 7));
  EXPECT_TRUE(a.fallback);
  EXPECT_FALSE(warnings.messages.empty());
  EXPECT_NEAR(wrap_angle(a.theta_s - (0.15 + std::numbers::pi / 2)), 0.0, 0.1);
}

TEST(SeedStrokes, SingleGaussianLobe) {
  SpeedProfile sp;
  for (int i = 0; i <= 200; ++i) {
    const double t = i / 200.0;
    sp.t.push_back(t);
    sp.v.push_back(eval(KernelParams::gaussian(1.0, 0.5, 0.01), t));
  }
  const auto tr = along_x(sp);
  const auto seeds = seed_strokes(tr, sp, find_salient_points(tr, sp));
  ASSERT_EQ(seeds.size(), 1u);
  EXPECT_NEAR(seeds[0].D_raw, 1.0, 0.01);
  EXPECT_NEAR(seeds[0].moments.M, 0.5, 0.005);
  EXPECT_LT(seeds[0].t0, seeds[0].lobe_end);
  EXPECT_NEAR(seeds[0].t0, -0.2, 1e-12);
}

TEST(SeedStrokes, DisjointLobesConservePathLength) {
  const auto sp = bumps({{0.3, 0.05}, {0.8, 0.07}}, 200, 1.1);
  const auto tr = along_x(sp);
  const auto seeds = seed_strokes(tr, sp, find_salient_points(tr, sp));
  ASSERT_EQ(seeds.size(), 2u);
  EXPECT_NEAR((seeds[0].D_raw + seeds[1].D_raw) / tr.path_length(), 1.0, 0.01);
  EXPECT_GE(seeds[1].t0, seeds[0].sp_prev.t);
}

TEST(SeedStrokes, ZeroAreaLobeIsDropped) {
  auto sp = bumps({{0.2, 0.04}, {0.9, 0.04}}, 200, 1.1);
  for (std::size_t i = 0; i < sp.v.size(); ++i)
    if (sp.t[i] > 0.4 && sp.t[i] < 0.7) sp.v[i] = 0.0;
  const auto tr = along_x(sp);
  std::vector<SalientPoint> s{at(tr, 0), at(tr, 90), at(tr, 130), at(tr, sp.t.size() - 1)};
  test::WarningCapture warnings;
  const auto seeds = seed_strokes(tr, sp, s);
  ASSERT_EQ(seeds.size(), 2u);
  EXPECT_EQ(seeds[0].sp.index, 90u);
  EXPECT_EQ(seeds[1].sp_prev.index, 130u);
  EXPECT_EQ(warnings.messages.size(), 1u);
  EXPECT_KTT_ERROR(seed_strokes(tr, sp, {s[0]}), ErrorCode::InvalidInput);
}

}  // namespace
}  // namespace ktt
