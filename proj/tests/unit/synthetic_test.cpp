#include "test_util.hpp"

namespace ktt {
namespace {

TEST(Synthetic, SingleStrokeEndsAtTarget) {
  for (KernelKind k : kAllKernelKinds) {
    const auto s = generate_synthetic({1, k, LinkKind::Clothoid, 0.0, 2, 200});
    const Sample last = s.trajectory[s.trajectory.size() - 1];
    EXPECT_LE(norm(last.p() - s.plan.strokes[0].link.p_end), 1e-6) << to_string(k);
  }
}

TEST(Synthetic, Deterministic) {
  const SyntheticSpec spec{4, KernelKind::DoubleBoundedLognormal, LinkKind::Arc, 0.25, 99, 200};
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  EXPECT_EQ(a.trajectory, b.trajectory);
  EXPECT_EQ(io::write_plan(a.plan), io::write_plan(b.plan));
  EXPECT_NE(generate_synthetic({4, KernelKind::DoubleBoundedLognormal, LinkKind::Arc, 0.25, 100, 200}).trajectory,
            a.trajectory);
}

TEST(Synthetic, FiveStrokesGiveFiveSpeedPeaks) {
  for (KernelKind k : kAllKernelKinds) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto s = generate_synthetic({5, k, LinkKind::Clothoid, 0.3, seed, 200});
      const auto span = plan_time_span(s.plan);
      const auto sp = reconstruct_speed(s.plan, uniform_grid(span.lo, span.hi, 1000));
      int peaks = 0;
      for (std::size_t i = 1; i + 1 < sp.v.size(); ++i) peaks += sp.v[i] > sp.v[i - 1] && sp.v[i] >= sp.v[i + 1];
      EXPECT_EQ(peaks, 5) << to_string(k) << " seed " << seed;
    }
  }
}

TEST(Synthetic, PlansAreChainedAndInsideTheBox) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = generate_synthetic({6, KernelKind::Gamma, LinkKind::Arc, 0.6, seed, 200});
    EXPECT_NO_THROW(s.plan.validate());
    for (const auto& st : s.plan.strokes) {
      EXPECT_GE(norm(st.link.p_end - st.link.p_start), 0.1);
      EXPECT_GE(st.link.p_end.x, 0.0);
      EXPECT_LE(st.link.p_end.y, 1.0);
    }
    EXPECT_NEAR(1.0 / (s.trajectory[1].t - s.trajectory[0].t), 200.0, 1.0);
  }
}

TEST(Synthetic, RejectsBadSpecs) {
  EXPECT_KTT_ERROR(generate_synthetic({0, KernelKind::Gamma, LinkKind::Arc, 0.1, 1, 200}), ErrorCode::InvalidInput);
  EXPECT_KTT_ERROR(generate_synthetic({2, KernelKind::Gamma, LinkKind::Arc, 0.7, 1, 200}), ErrorCode::InvalidInput);
}

TEST(Synthetic, SCurveHasAnInflexion) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = generate_s_curve(KernelKind::Lognormal, seed);
    const auto& seg = s.plan.strokes[0].segment;
    EXPECT_LT(seg.curvature_at(0.0) * seg.curvature_at(seg.L), 0.0);
  }
}

}  // namespace
}  // namespace ktt
