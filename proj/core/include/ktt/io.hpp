#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ktt/extractor.hpp"

namespace ktt::io {

enum class TrajectoryFormat {
  Delimited,   // header "t,x,y", then one sample per line (seconds)
  PenCapture,  // count line, then "x y t_ms button azimuth altitude pressure"
  Auto,        // by content: a leading "t,x,y" header selects Delimited
};

/// Samples as read from a file, before the Trajectory invariants are applied
/// (a track may have fewer than four samples or repeated timestamps).
struct RawTrack {
  std::string source;
  std::vector<Sample> samples;
};

/// Delimited files give one track; pen-capture files are split at pen-up rows
/// (button == 0), which are dropped. Malformed lines raise Parse errors naming
/// the line; decreasing time raises InvalidInput.
std::vector<RawTrack> parse_tracks(std::istream& in, TrajectoryFormat format, const std::string& source);
std::vector<RawTrack> read_tracks(const std::filesystem::path& path, TrajectoryFormat format = TrajectoryFormat::Auto);

/// Tracks converted with Trajectory::from_raw.
std::vector<Trajectory> read_trajectory(const std::filesystem::path& path,
                                        TrajectoryFormat format = TrajectoryFormat::Auto);

void write_trajectory(std::ostream& out, const Trajectory& traj);

inline constexpr int kPlanVersion = 1;

/// Line-oriented key=value plan document with 17 significant digits.
std::string write_plan(const ActionPlan& plan);
void write_plan(const std::filesystem::path& path, const ActionPlan& plan);

/// Rebuilds the plan, refitting every link. Version mismatches raise
/// UnsupportedVersion and unknown kernel or link names UnsupportedKind.
ActionPlan read_plan(std::istream& in);
ActionPlan read_plan_string(const std::string& doc);
ActionPlan read_plan(const std::filesystem::path& path);

struct ReportRow {
  std::string source;
  std::string config;
  ReconstructionReport report;
  int passes = 0;
  int warnings = 0;
};

inline constexpr const char* kReportHeader = "source,config,snr_t,snr_v,n,snr_t_per_n,snr_v_per_n,passes,warnings";

void write_report(std::ostream& out, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report(std::istream& in);

/// Aligned original and reconstructed x, y and speed on the reference grid.
void write_series(std::ostream& out, const Trajectory& uniform_reference, const ActionPlan& plan);

/// Extractor settings from a key=value file (kernel, link, rate, max_passes,
/// snr_stop, smooth_cutoff, min_prominence, min_gap, anticipation, tp_drift,
/// line_search_iters). Keys not present keep their values in `base`.
ExtractorConfig load_config(const std::filesystem::path& path, ExtractorConfig base = {});

/// Path named by the KTT_CONFIG environment variable, if set and non-empty.
std::optional<std::filesystem::path> default_config_path();

}  // namespace ktt::io
