#include <cmath>
#include <numbers>

#include "test_util.hpp"

namespace ktt {
namespace {

Trajectory circle(double R, double omega, double rate, double duration) {
  std::vector<double> t, x, y;
  const int n = static_cast<int>(std::lround(duration * rate));
  for (int i = 0; i <= n; ++i) {
    const double ti = i / rate;
    t.push_back(ti);
    x.push_back(R * std::cos(omega * ti));
    y.push_back(R * std::sin(omega * ti));
  }
  return test::make_trajectory(t, x, y);
}

TEST(Trajectory, RejectsTooFewSamplesAndBadTimes) {
  EXPECT_KTT_ERROR(Trajectory({{0, 0, 0}, {1, 1, 1}}), ErrorCode::InvalidInput);
  EXPECT_KTT_ERROR(Trajectory({{0, 0, 0}, {1, 1, 1}, {1, 2, 2}, {2, 3, 3}}), ErrorCode::InvalidInput);
  EXPECT_KTT_ERROR(Trajectory({{0, 0, 0}, {1, NAN, 1}, {2, 2, 2}, {3, 3, 3}}), ErrorCode::InvalidInput);
}

TEST(Trajectory, FromRawCollapsesDuplicateTimestamps) {
  test::WarningCapture warnings;
  const auto t = Trajectory::from_raw({{0, 0, 0}, {1, 1, 0}, {1, 3, 2}, {2, 4, 4}, {3, 5, 5}});
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[1].x, 2.0);
  EXPECT_EQ(t[1].y, 1.0);
  EXPECT_FALSE(warnings.messages.empty());
}

TEST(ResampleUniform, IdentityOnUniformInput) {
  const Trajectory c = circle(1.0, 3.0, 100.0, 1.0);
  const Trajectory r = resample_uniform(c, 100.0);
  ASSERT_EQ(r.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(r[i].t, c[i].t, 1e-12);
    EXPECT_NEAR(r[i].x, c[i].x, 1e-12);
    EXPECT_NEAR(r[i].y, c[i].y, 1e-12);
  }
}

TEST(ResampleUniform, IrregularLineStaysOnLine) {
  std::mt19937_64 rng(3);
  std::vector<double> t{0.0}, x{0.0}, y{0.0};
  while (t.back() < 1.0) {
    t.push_back(t.back() + test::uniform(rng, 0.001, 0.03));
    x.push_back(t.back());
    y.push_back(2.0 * t.back());
  }
  const Trajectory r = resample_uniform(test::make_trajectory(t, x, y), 100.0);
  EXPECT_TRUE(r.is_uniform());
  EXPECT_EQ(r.t_first(), t.front());
  EXPECT_EQ(r.t_last(), t.back());
  EXPECT_EQ(r[r.size() - 1].x, x.back());
  for (const Sample& s : r.samples()) EXPECT_NEAR(s.y, 2.0 * s.x, 1e-9);
}

TEST(ResampleUniform, PreservesArcLength) {
  std::mt19937_64 rng(4);
  std::vector<double> t{0.0};
  while (t.back() < 2.0) t.push_back(t.back() + test::uniform(rng, 0.002, 0.01));
  std::vector<double> x, y;
  for (double ti : t) {
    x.push_back(std::cos(2.0 * ti));
    y.push_back(std::sin(2.0 * ti));
  }
  const Trajectory src = test::make_trajectory(t, x, y);
  const Trajectory r = resample_uniform(src, 200.0);
  EXPECT_NEAR(r.path_length() / src.path_length(), 1.0, 5e-3);
}

TEST(SpeedProfile, ZeroForConstantPosition) {
  std::vector<double> t, x, y;
  for (int i = 0; i < 50; ++i) {
    t.push_back(i / 100.0);
    x.push_back(1.5);
    y.push_back(-2.0);
  }
  for (double v : speed_profile(test::make_trajectory(t, x, y), 10.0).v) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(SpeedProfile, LinearMotion) {
  std::vector<double> t, x, y;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(i / 200.0);
    x.push_back(3.0 * 0.6 * t.back());
    y.push_back(3.0 * 0.8 * t.back() + 1.0);
  }
  const auto sp = speed_profile(test::make_trajectory(t, x, y), 10.0);
  for (std::size_t i = 20; i + 20 < sp.v.size(); ++i) EXPECT_NEAR(sp.v[i], 3.0, 1e-6);
}

TEST(SpeedProfile, CircleAtConstantRate) {
  const double R = 2.0, omega = 4.0;
  const auto sp = speed_profile(circle(R, omega, 200.0, 2.0), 10.0);
  for (std::size_t i = 40; i + 40 < sp.v.size(); ++i) EXPECT_NEAR(sp.v[i], R * omega, 1e-3 * R * omega);
}

TEST(SpeedProfile, TranslationInvariantAndScaleEquivariant) {
  const Trajectory c = circle(1.0, 5.0, 200.0, 1.0);
  std::vector<Sample> moved, scaled;
  for (const Sample& s : c.samples()) {
    moved.push_back({s.t, s.x + 10.0, s.y - 7.0});
    scaled.push_back({s.t, 3.0 * s.x, 3.0 * s.y});
  }
  const auto a = speed_profile(c).v;
  const auto b = speed_profile(Trajectory(moved)).v;
  const auto k = speed_profile(Trajectory(scaled)).v;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(b[i], a[i], 1e-9 * std::max(1.0, a[i]));
    EXPECT_NEAR(k[i], 3.0 * a[i], 1e-9 * 3.0 * a[i]);
  }
}

TEST(SpeedProfile, RejectsNonUniformAndBadCutoff) {
  const Trajectory irregular({{0, 0, 0}, {0.01, 1, 0}, {0.03, 2, 0}, {0.04, 3, 0}, {0.05, 4, 0}});
  EXPECT_KTT_ERROR(speed_profile(irregular), ErrorCode::InvalidInput);
  const Trajectory c = circle(1.0, 1.0, 100.0, 1.0);
  EXPECT_KTT_ERROR(speed_profile(c, 50.0), ErrorCode::InvalidInput);
  EXPECT_KTT_ERROR(speed_profile(c, 0.0), ErrorCode::InvalidInput);
}

TEST(Filter, PassesConstantsAndLowFrequencies) {
  std::vector<double> c(100, 4.0);
  for (double v : lowpass_zero_phase(c, 200.0, 10.0)) EXPECT_NEAR(v, 4.0, 1e-12);
  std::vector<double> s;
  for (int i = 0; i < 400; ++i) s.push_back(std::sin(2 * std::numbers::pi * 1.0 * i / 200.0));
  const auto f = lowpass_zero_phase(s, 200.0, 10.0);
  for (std::size_t i = 50; i < 350; ++i) EXPECT_NEAR(f[i], s[i], 1e-3);
}

TEST(Differentiate, ExactOnQuadraticsInTheInterior) {
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(0.5 * i * i * 0.01);
  const auto d = differentiate(v, 0.1);
  for (std::size_t i = 1; i + 1 < v.size(); ++i) EXPECT_NEAR(d[i], static_cast<double>(i) * 0.1, 1e-12);
}

}  // namespace
}  // namespace ktt
