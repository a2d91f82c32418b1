#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ktt/error.hpp"
#include "ktt/metrics.hpp"
#include "ktt/reconstructor.hpp"
#include "ktt/segmentation.hpp"

namespace ktt {

struct ExtractorConfig {
  KernelKind kernel_kind = KernelKind::Lognormal;
  LinkKind link_kind = LinkKind::Clothoid;
  int max_passes = 8;
  double snr_stop = 0.01;       // dB gain per pass below which refinement stops
  double rate = 200.0;          // working sample rate (Hz)
  double smooth_cutoff = 10.0;  // low-pass cutoff for segmentation only (Hz)
  SegmentationConfig segmentation;
  double tp_drift = 0.1;        // max target point drift, fraction of the seed chord
  int line_search_iters = 10;   // golden-section iterations per coordinate
  double angle_step = 0.3;      // half-width of the angle search bracket (rad)
  double time_step = 0.5;       // half-width for time offsets, in lobe spreads
  double log_step = 0.4;        // half-width for positive parameters, in log units

  /// Throws InvalidInput on out-of-range settings.
  void validate() const;
  /// Short identifier such as "lognormal/clothoid".
  [[nodiscard]] std::string id() const;
};

struct ExtractionResult {
  ActionPlan plan;
  ReconstructionReport report;
  int passes_used = 0;
  std::vector<std::string> warnings;
  /// SNR_t + SNR_v after the initial plan and after every accepted step.
  std::vector<double> objective_trace;
};

/// SNRs of a plan against a uniformly sampled trajectory. Velocities of both
/// signals are centered finite differences of positions on the shared grid.
ReconstructionReport score_plan(const ActionPlan& plan, const Trajectory& uniform_reference);

/// Segments the trajectory at speed minima, initializes one stroke per lobe
/// and refines the plan by coordinate descent on min(SNR_t, SNR_v).
ExtractionResult extract(const Trajectory& traj, const ExtractorConfig& cfg = {});

struct ConfigOutcome {
  ExtractorConfig config;
  std::optional<ExtractionResult> result;
  ErrorCode error_code = ErrorCode::ExtractionFailure;  // meaningful when !result
  std::string error;
};

/// Independent extract runs, one per config, evaluated in parallel. Failures
/// are reported per config.
std::vector<ConfigOutcome> compare_configs(const Trajectory& traj, const std::vector<ExtractorConfig>& cfgs);

}  // namespace ktt
