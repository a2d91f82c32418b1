#pragma once

#include <cstdint>

#include "ktt/reconstructor.hpp"

namespace ktt {

struct SyntheticSpec {
  int n_strokes = 3;
  KernelKind kernel_kind = KernelKind::Lognormal;
  LinkKind link_kind = LinkKind::Clothoid;
  double overlap_fraction = 0.2;  // of each stroke's [0.1%, 99.9%] mass interval
  std::uint64_t seed = 1;
  double rate = 200.0;
};

struct SyntheticSample {
  ActionPlan plan;
  Trajectory trajectory;
};

/// Random plan and its reconstruction. Target points are drawn in the unit
/// box with consecutive chords of at least 0.1; each stroke's central mass
/// interval lasts 0.2 to 0.4 s and overlaps the previous one by
/// overlap_fraction of its duration. Deterministic in `seed`.
SyntheticSample generate_synthetic(const SyntheticSpec& spec);

/// Single stroke from (0, 0) to (1, 0) whose tangents both lean to the same
/// side of the chord by 0.4 to 0.8 rad, so a clothoid through it has one
/// inflexion point.
SyntheticSample generate_s_curve(KernelKind kind, std::uint64_t seed, double rate = 200.0);

/// Time span holding a plan's strokes from the 1e-6 quantile of the earliest
/// to the 1 - 1e-9 quantile of the latest.
Interval plan_time_span(const ActionPlan& plan);

}  // namespace ktt
