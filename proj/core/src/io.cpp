#include "ktt/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "ktt/error.hpp"

namespace ktt::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw Error(ErrorCode::Parse, msg.str());
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char delim) {
  std::vector<std::string_view> out;
  if (delim == ' ') {
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
      if (j > i) out.push_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  }
  std::size_t i = 0;
  for (;;) {
    const auto j = s.find(delim, i);
    out.push_back(trim(s.substr(i, j == std::string_view::npos ? j : j - i)));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

void check_order(const std::vector<Sample>& samples, const std::string& source, std::size_t line) {
  if (samples.size() >= 2 && samples.back().t < samples[samples.size() - 2].t) {
    std::ostringstream msg;
    msg << source << ":" << line << ": time decreases";
    throw Error(ErrorCode::InvalidInput, msg.str());
  }
}

std::vector<RawTrack> parse_delimited(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t no = 0;
  bool header = false;
  RawTrack track{source, {}};
  while (std::getline(in, line)) {
    ++no;
    if (skippable(line)) continue;
    if (!header) {
      const auto f = split(line, ',');
      if (f.size() != 3 || f[0] != "t" || f[1] != "x" || f[2] != "y") parse_error(source, no, "expected header t,x,y");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 3) parse_error(source, no, "expected 3 fields");
    const auto t = to_double(f[0]), x = to_double(f[1]), y = to_double(f[2]);
    if (!t || !x || !y) parse_error(source, no, "malformed number");
    track.samples.push_back({*t, *x, *y});
    check_order(track.samples, source, no);
  }
  if (!header) parse_error(source, no, "missing header t,x,y");
  return {std::move(track)};
}

std::vector<RawTrack> parse_pen_capture(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t no = 0;
  std::optional<long long> count;
  long long rows = 0;
  std::vector<RawTrack> tracks;
  RawTrack current{source + "#0", {}};
  auto flush = [&] {
    if (!current.samples.empty()) tracks.push_back(std::move(current));
    current = RawTrack{source + "#" + std::to_string(tracks.size()), {}};
  };
  double last_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++no;
    if (skippable(line)) continue;
    const auto f = split(line, ' ');
    if (!count) {
      long long c = 0;
      const auto s = trim(line);
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), c);
      if (ec != std::errc() || ptr != s.data() + s.size() || c < 0) parse_error(source, no, "expected sample count");
      count = c;
      continue;
    }
    if (f.size() != 7) parse_error(source, no, "expected 7 fields: x y t_ms button azimuth altitude pressure");
    std::array<double, 7> v{};
    for (std::size_t i = 0; i < 7; ++i) {
      const auto d = to_double(f[i]);
      if (!d) parse_error(source, no, "malformed number");
      v[i] = *d;
    }
    ++rows;
    const double t = v[2] / 1000.0;
    if (t < last_t) {
      std::ostringstream msg;
      msg << source << ":" << no << ": time decreases";
      throw Error(ErrorCode::InvalidInput, msg.str());
    }
    last_t = t;
    if (v[3] == 0.0) {
      flush();
      continue;
    }
    current.samples.push_back({t, v[0], v[1]});
  }
  if (!count) parse_error(source, no, "missing sample count");
  if (rows != *count) {
    std::ostringstream msg;
    msg << "stated count " << *count << " but found " << rows << " rows";
    parse_error(source, no, msg.str());
  }
  flush();
  if (tracks.size() == 1) tracks.front().source = source;
  return tracks;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  return in;
}

std::array<double, 2> pair_of(std::string_view v, std::size_t no) {
  const auto f = split(v, ' ');
  if (f.size() != 2) parse_error("plan", no, "expected two numbers");
  const auto a = to_double(f[0]), b = to_double(f[1]);
  if (!a || !b) parse_error("plan", no, "malformed number");
  return {*a, *b};
}

double number(std::string_view v, std::size_t no, const std::string& source = "plan") {
  const auto d = to_double(v);
  if (!d) parse_error(source, no, "malformed number");
  return *d;
}

}  // namespace

std::vector<RawTrack> parse_tracks(std::istream& in, TrajectoryFormat format, const std::string& source) {
  if (format == TrajectoryFormat::Auto) {
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::istringstream probe(content);
    std::string line;
    format = TrajectoryFormat::PenCapture;
    while (std::getline(probe, line)) {
      if (skippable(line)) continue;
      if (trim(line).substr(0, 1) == "t") format = TrajectoryFormat::Delimited;
      break;
    }
    std::istringstream body(content);
    return parse_tracks(body, format, source);
  }
  return format == TrajectoryFormat::Delimited ? parse_delimited(in, source) : parse_pen_capture(in, source);
}

std::vector<RawTrack> read_tracks(const std::filesystem::path& path, TrajectoryFormat format) {
  auto in = open_in(path);
  return parse_tracks(in, format, path.string());
}

std::vector<Trajectory> read_trajectory(const std::filesystem::path& path, TrajectoryFormat format) {
  std::vector<Trajectory> out;
  for (auto& track : read_tracks(path, format)) out.push_back(Trajectory::from_raw(track.samples, track.source));
  return out;
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y\n";
  for (const Sample& s : traj.samples()) out << fmt17(s.t) << ',' << fmt17(s.x) << ',' << fmt17(s.y) << '\n';
}

std::string write_plan(const ActionPlan& plan) {
  std::ostringstream out;
  out << "format=ktt-plan\n";
  out << "version=" << kPlanVersion << '\n';
  out << "start_point=" << fmt17(plan.start_point.x) << ' ' << fmt17(plan.start_point.y) << '\n';
  out << "strokes=" << plan.strokes.size() << '\n';
  for (std::size_t j = 0; j < plan.strokes.size(); ++j) {
    const Stroke& s = plan.strokes[j];
    out << "\nstroke=" << j << '\n';
    out << "kernel=" << to_string(s.kernel.kind) << '\n';
    out << "t0=" << fmt17(s.kernel.t0) << '\n';
    out << "D=" << fmt17(s.kernel.D) << '\n';
    const auto names = shape_names(s.kernel.kind);
    for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << '=' << fmt17(s.kernel.shape[i]) << '\n';
    out << "link=" << to_string(s.link.kind) << '\n';
    out << "tp_start=" << fmt17(s.link.p_start.x) << ' ' << fmt17(s.link.p_start.y) << '\n';
    out << "tp_end=" << fmt17(s.link.p_end.x) << ' ' << fmt17(s.link.p_end.y) << '\n';
    out << "theta_s=" << fmt17(s.link.theta_s) << '\n';
    out << "theta_e=" << fmt17(s.link.theta_e) << '\n';
  }
  return out.str();
}

void write_plan(const std::filesystem::path& path, const ActionPlan& plan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << write_plan(plan);
}

ActionPlan read_plan(std::istream& in) {
  struct Pending {
    KernelParams kernel;
    LinkSpec link;
    bool has_kernel = false;
    bool has_D = false;
  };
  std::string line;
  std::size_t no = 0;
  std::optional<int> version;
  std::optional<Point> start;
  std::optional<std::size_t> declared;
  std::vector<Pending> strokes;
  while (std::getline(in, line)) {
    ++no;
    if (skippable(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_error("plan", no, "expected key=value");
    const std::string key(trim(std::string_view(line).substr(0, eq)));
    const std::string_view value = trim(std::string_view(line).substr(eq + 1));
    if (key == "format") {
      if (value != "ktt-plan") parse_error("plan", no, "not a ktt-plan document");
    } else if (key == "version") {
      const double v = number(value, no);
      if (v != kPlanVersion)
        throw Error(ErrorCode::UnsupportedVersion,
                    "unsupported plan version " + std::string(value) + " (expected " + std::to_string(kPlanVersion) + ")");
      version = kPlanVersion;
    } else if (!version) {
      parse_error("plan", no, "version must precede plan data");
    } else if (key == "start_point") {
      const auto p = pair_of(value, no);
      start = Point{p[0], p[1]};
    } else if (key == "strokes") {
      declared = static_cast<std::size_t>(number(value, no));
    } else if (key == "stroke") {
      strokes.emplace_back();
    } else if (strokes.empty()) {
      parse_error("plan", no, "'" + key + "' outside a stroke");
    } else {
      Pending& s = strokes.back();
      if (key == "kernel") {
        const auto kind = kernel_kind_from_string(value);
        if (!kind) throw Error(ErrorCode::UnsupportedKind, "unsupported kernel kind '" + std::string(value) + "'");
        s.kernel.kind = *kind;
        s.kernel.shape = {};
        s.has_kernel = true;
      } else if (key == "link") {
        const auto kind = link_kind_from_string(value);
        if (!kind) throw Error(ErrorCode::UnsupportedKind, "unsupported link kind '" + std::string(value) + "'");
        s.link.kind = *kind;
      } else if (key == "t0") {
        s.kernel.t0 = number(value, no);
      } else if (key == "D") {
        s.kernel.D = number(value, no);
        s.has_D = true;
      } else if (key == "tp_start") {
        const auto p = pair_of(value, no);
        s.link.p_start = {p[0], p[1]};
      } else if (key == "tp_end") {
        const auto p = pair_of(value, no);
        s.link.p_end = {p[0], p[1]};
      } else if (key == "theta_s") {
        s.link.theta_s = number(value, no);
      } else if (key == "theta_e") {
        s.link.theta_e = number(value, no);
      } else {
        if (!s.has_kernel) parse_error("plan", no, "shape parameter before kernel kind");
        try {
          s.kernel.set_param(key, number(value, no));
        } catch (const Error&) {
          parse_error("plan", no, "unknown key '" + key + "' for kernel " + std::string(to_string(s.kernel.kind)));
        }
      }
    }
  }
  if (!version) parse_error("plan", no, "missing version");
  if (!start) parse_error("plan", no, "missing start_point");
  if (declared && *declared != strokes.size()) parse_error("plan", no, "stroke count does not match 'strokes'");
  ActionPlan plan{*start, {}};
  for (auto& s : strokes) {
    if (!s.has_kernel) parse_error("plan", no, "stroke without kernel");
    const double D = s.kernel.D;
    if (!s.has_D) s.kernel.D = 1.0;
    const double theta_e = s.link.theta_e;
    Stroke stroke = Stroke::make(s.kernel, s.link);
    // D is implied by the link; when present it must agree. Arc links carry
    // their end tangent for reference only, so it is kept verbatim.
    stroke.link.theta_e = theta_e;
    if (s.has_D && std::abs(stroke.kernel.D - D) > 1e-9 * std::max(1.0, D))
      throw Error(ErrorCode::InvalidInput, "stroke D does not match the length of its link");
    plan.strokes.push_back(std::move(stroke));
  }
  plan.validate();
  return plan;
}

ActionPlan read_plan_string(const std::string& doc) {
  std::istringstream in(doc);
  return read_plan(in);
}

ActionPlan read_plan(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_plan(in);
}

void write_report(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kReportHeader << '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%d,%.10g,%.10g,%d,%d", r.report.snr_t, r.report.snr_v,
                  r.report.n_strokes, r.report.snr_t_per_n, r.report.snr_v_per_n, r.passes, r.warnings);
    out << r.source << ',' << r.config << ',' << buf << '\n';
  }
}

std::vector<ReportRow> read_report(std::istream& in) {
  std::string line;
  std::size_t no = 0;
  std::map<std::string, std::size_t> col;
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    ++no;
    if (skippable(line)) continue;
    const auto f = split(line, ',');
    if (col.empty()) {
      for (std::size_t i = 0; i < f.size(); ++i) col[std::string(f[i])] = i;
      for (const char* k : {"source", "config", "snr_t", "snr_v", "n"})
        if (!col.count(k)) parse_error("report", no, std::string("missing column ") + k);
      continue;
    }
    if (f.size() != col.size()) parse_error("report", no, "wrong number of fields");
    auto get = [&](const char* k) { return number(f[col.at(k)], no, "report"); };
    ReportRow r;
    r.source = std::string(f[col.at("source")]);
    r.config = std::string(f[col.at("config")]);
    r.report = ReconstructionReport::make(get("snr_t"), get("snr_v"), static_cast<int>(get("n")));
    if (col.count("passes")) r.passes = static_cast<int>(get("passes"));
    if (col.count("warnings")) r.warnings = static_cast<int>(get("warnings"));
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_series(std::ostream& out, const Trajectory& uniform_reference, const ActionPlan& plan) {
  const auto t = uniform_reference.times();
  const auto rec = reconstruct_positions(plan, t);
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  std::vector<double> xo, yo, xr, yr;
  for (std::size_t i = 0; i < t.size(); ++i) {
    xo.push_back(uniform_reference[i].x);
    yo.push_back(uniform_reference[i].y);
    xr.push_back(rec[i].x);
    yr.push_back(rec[i].y);
  }
  const auto vxo = differentiate(xo, dt), vyo = differentiate(yo, dt);
  const auto vxr = differentiate(xr, dt), vyr = differentiate(yr, dt);
  out << "t,x_orig,y_orig,v_orig,x_rec,y_rec,v_rec\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << fmt17(t[i]) << ',' << fmt17(xo[i]) << ',' << fmt17(yo[i]) << ',' << fmt17(std::hypot(vxo[i], vyo[i]))
        << ',' << fmt17(xr[i]) << ',' << fmt17(yr[i]) << ',' << fmt17(std::hypot(vxr[i], vyr[i])) << '\n';
  }
}

ExtractorConfig load_config(const std::filesystem::path& path, ExtractorConfig base) {
  auto in = open_in(path);
  const std::string source = path.string();
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (skippable(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_error(source, no, "expected key=value");
    const std::string key(trim(std::string_view(line).substr(0, eq)));
    const std::string_view value = trim(std::string_view(line).substr(eq + 1));
    if (key == "kernel") {
      const auto k = kernel_kind_from_string(value);
      if (!k) throw Error(ErrorCode::UnsupportedKind, source + ": unknown kernel '" + std::string(value) + "'");
      base.kernel_kind = *k;
    } else if (key == "link") {
      const auto k = link_kind_from_string(value);
      if (!k) throw Error(ErrorCode::UnsupportedKind, source + ": unknown link '" + std::string(value) + "'");
      base.link_kind = *k;
    } else if (key == "rate") {
      base.rate = number(value, no, source);
    } else if (key == "max_passes") {
      base.max_passes = static_cast<int>(number(value, no, source));
    } else if (key == "snr_stop") {
      base.snr_stop = number(value, no, source);
    } else if (key == "smooth_cutoff") {
      base.smooth_cutoff = number(value, no, source);
    } else if (key == "min_prominence") {
      base.segmentation.min_prominence = number(value, no, source);
    } else if (key == "min_gap") {
      base.segmentation.min_gap = number(value, no, source);
    } else if (key == "anticipation") {
      base.segmentation.anticipation = number(value, no, source);
    } else if (key == "tp_drift") {
      base.tp_drift = number(value, no, source);
    } else if (key == "line_search_iters") {
      base.line_search_iters = static_cast<int>(number(value, no, source));
    } else {
      parse_error(source, no, "unknown key '" + key + "'");
    }
  }
  base.validate();
  return base;
}

std::optional<std::filesystem::path> default_config_path() {
  const char* env = std::getenv("KTT_CONFIG");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::filesystem::path(env);
}

}  // namespace ktt::io
