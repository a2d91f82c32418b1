// ktt: command-line driver for extraction, reconstruction and evaluation.

#include <glob.h>

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "ktt/ktt.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kPartialFailure = 1;
constexpr int kUsage = 2;

std::string kernel_check(const std::string& s) {
  return ktt::kernel_kind_from_string(s) ? std::string{} : "unknown kernel '" + s + "'";
}
std::string link_check(const std::string& s) {
  return ktt::link_kind_from_string(s) ? std::string{} : "unknown link '" + s + "'";
}

ktt::io::TrajectoryFormat parse_format(const std::string& s) {
  if (s == "delimited") return ktt::io::TrajectoryFormat::Delimited;
  if (s == "pen") return ktt::io::TrajectoryFormat::PenCapture;
  return ktt::io::TrajectoryFormat::Auto;
}

// Expands shell-style patterns that the shell left untouched.
std::vector<std::string> expand_inputs(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) {
    if (a.find_first_of("*?[") == std::string::npos) {
      out.push_back(a);
      continue;
    }
    glob_t g{};
    if (::glob(a.c_str(), 0, nullptr, &g) == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    } else {
      out.push_back(a);
    }
    ::globfree(&g);
  }
  return out;
}

// path.ext -> path.<i>.ext when a batch needs several output files.
fs::path numbered(const fs::path& p, std::size_t i, std::size_t count) {
  if (count <= 1) return p;
  fs::path out = p;
  out.replace_filename(p.stem().string() + "." + std::to_string(i) + p.extension().string());
  return out;
}

template <class Write>
void write_file(const fs::path& p, Write write) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ktt::Error(ktt::ErrorCode::InvalidInput, "cannot write " + p.string());
  write(out);
}


// Reads every input; failures are reported and counted.
std::vector<ktt::Trajectory> load_inputs(const std::vector<std::string>& inputs, ktt::io::TrajectoryFormat fmt,
                                         int& failures) {
  std::vector<ktt::Trajectory> out;
  for (const auto& path : expand_inputs(inputs)) {
    try {
      for (auto& t : ktt::io::read_trajectory(path, fmt)) out.push_back(std::move(t));
    } catch (const std::exception& e) {
      std::cerr << "ktt: " << path << ": " << e.what() << '\n';
      ++failures;
    }
  }
  return out;
}

struct Common {
  std::string kernel = "lognormal";
  std::string link = "clothoid";
  double rate = 200.0;
  int max_passes = 0;
  std::string config;
  std::string format = "auto";
};

ktt::ExtractorConfig base_config(const Common& c, const CLI::App& cmd) {
  ktt::ExtractorConfig cfg;
  if (!c.config.empty()) {
    cfg = ktt::io::load_config(c.config);
  } else if (auto env = ktt::io::default_config_path()) {
    cfg = ktt::io::load_config(*env);
  }
  auto given = [&](const char* name) {
    const CLI::Option* o = cmd.get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--kernel")) cfg.kernel_kind = *ktt::kernel_kind_from_string(c.kernel);
  if (given("--link")) cfg.link_kind = *ktt::link_kind_from_string(c.link);
  if (given("--rate")) cfg.rate = c.rate;
  if (given("--max-passes")) cfg.max_passes = c.max_passes;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, Common& c, bool single_kernel) {
  if (single_kernel) {
    cmd->add_option("--kernel", c.kernel, "gaussian, lognormal, gamma, beta, dbl or gev")->check(kernel_check);
    cmd->add_option("--link", c.link, "arc or clothoid")->check(link_check);
  }
  cmd->add_option("--rate", c.rate, "working sample rate in Hz")->check(CLI::PositiveNumber);
  cmd->add_option("--max-passes", c.max_passes, "refinement passes")->check(CLI::PositiveNumber);
  cmd->add_option("--config", c.config, "extractor settings file (default: $KTT_CONFIG)");
  cmd->add_option("--format", c.format, "input format")->check(CLI::IsMember({"auto", "delimited", "pen"}));
}

int run_extract(const std::vector<std::string>& inputs, const Common& c, const CLI::App& cmd,
                const std::string& out_plan, const std::string& out_report, const std::string& out_series) {
  const ktt::ExtractorConfig cfg = base_config(c, cmd);
  int failures = 0;
  const auto trajs = load_inputs(inputs, parse_format(c.format), failures);
  std::vector<ktt::io::ReportRow> rows;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const auto& traj = trajs[i];
    try {
      const auto r = ktt::extract(traj, cfg);
      rows.push_back({traj.meta(), cfg.id(), r.report, r.passes_used, static_cast<int>(r.warnings.size())});
      if (!out_plan.empty()) ktt::io::write_plan(numbered(out_plan, i, trajs.size()), r.plan);
      if (!out_series.empty()) {
        const auto uniform = ktt::resample_uniform(traj, cfg.rate);
        write_file(numbered(out_series, i, trajs.size()),
                   [&](std::ostream& o) { ktt::io::write_series(o, uniform, r.plan); });
      }
    } catch (const std::exception& e) {
      std::cerr << "ktt: " << traj.meta() << ": " << e.what() << '\n';
      ++failures;
    }
  }
  if (out_report.empty()) {
    ktt::io::write_report(std::cout, rows);
  } else {
    write_file(out_report, [&](std::ostream& o) { ktt::io::write_report(o, rows); });
  }
  return failures ? kPartialFailure : kOk;
}

int run_compare(const std::vector<std::string>& inputs, const Common& c, const CLI::App& cmd,
                const std::vector<std::string>& kernels, const std::vector<std::string>& links,
                const std::string& out_report) {
  const ktt::ExtractorConfig base = base_config(c, cmd);
  std::vector<ktt::ExtractorConfig> cfgs;
  for (const auto& k : kernels) {
    for (const auto& l : links) {
      ktt::ExtractorConfig cfg = base;
      cfg.kernel_kind = *ktt::kernel_kind_from_string(k);
      cfg.link_kind = *ktt::link_kind_from_string(l);
      cfgs.push_back(cfg);
    }
  }
  int failures = 0;
  const auto trajs = load_inputs(inputs, parse_format(c.format), failures);
  std::vector<ktt::io::ReportRow> rows;
  for (const auto& traj : trajs) {
    for (const auto& o : ktt::compare_configs(traj, cfgs)) {
      if (o.result) {
        rows.push_back({traj.meta(), o.config.id(), o.result->report, o.result->passes_used,
                        static_cast<int>(o.result->warnings.size())});
      } else {
        std::cerr << "ktt: " << traj.meta() << " [" << o.config.id() << "]: " << o.error << '\n';
        ++failures;
      }
    }
  }
  if (out_report.empty()) {
    ktt::io::write_report(std::cout, rows);
  } else {
    write_file(out_report, [&](std::ostream& o) { ktt::io::write_report(o, rows); });
  }
  return failures ? kPartialFailure : kOk;
}

int run_reconstruct(const std::string& plan_path, double rate, const std::string& out, const std::string& reference,
                    const std::string& format) {
  const ktt::ActionPlan plan = ktt::io::read_plan(fs::path(plan_path));
  if (!reference.empty()) {
    const auto trajs = ktt::io::read_trajectory(reference, parse_format(format));
    if (trajs.size() != 1) throw ktt::Error(ktt::ErrorCode::InvalidInput, "reference must hold one trajectory");
    const auto uniform = ktt::resample_uniform(trajs.front(), rate);
    const auto report = ktt::score_plan(plan, uniform);
    ktt::io::write_report(std::cout, {{trajs.front().meta(), "plan", report, 0, 0}});
    if (!out.empty()) {
      write_file(out, [&](std::ostream& o) {
        ktt::io::write_trajectory(o, ktt::reconstruct_trajectory(plan, uniform.times()));
      });
    }
    return kOk;
  }
  const auto span = ktt::plan_time_span(plan);
  const auto times = ktt::uniform_grid(span.lo, span.hi, rate);
  const auto traj = ktt::reconstruct_trajectory(plan, times);
  if (out.empty()) {
    ktt::io::write_trajectory(std::cout, traj);
  } else {
    write_file(out, [&](std::ostream& o) { ktt::io::write_trajectory(o, traj); });
  }
  return kOk;
}

int run_stats(const std::string& report_path, const std::string& test, const std::string& column,
              const std::vector<std::string>& groups) {
  std::ifstream in(report_path);
  if (!in) throw ktt::Error(ktt::ErrorCode::InvalidInput, "cannot open " + report_path);
  const auto rows = ktt::io::read_report(in);
  auto value = [&](const ktt::io::ReportRow& r) {
    if (column == "snr_t") return r.report.snr_t;
    if (column == "snr_v") return r.report.snr_v;
    if (column == "snr_t_per_n") return r.report.snr_t_per_n;
    return r.report.snr_v_per_n;
  };
  auto select = [&](const std::string& cfg) {
    std::vector<double> out;
    for (const auto& r : rows)
      if (cfg.empty() || r.config == cfg) out.push_back(value(r));
    return out;
  };
  ktt::TestResult res;
  if (test == "jb") {
    if (groups.size() > 1) throw CLI::ValidationError("--groups", "jb takes at most one group");
    res = ktt::jarque_bera(select(groups.empty() ? std::string{} : groups.front()));
  } else {
    if (groups.size() != 2) throw CLI::ValidationError("--groups", "mwu needs exactly two groups");
    res = ktt::mann_whitney_u(select(groups[0]), select(groups[1]));
  }
  std::cout << "test,column,statistic,p_value,reject_at_5pct\n"
            << test << ',' << column << ',' << res.statistic << ',' << res.p_value << ','
            << (res.reject_at_5pct ? "true" : "false") << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinematic Theory Transform: stroke extraction and reconstruction"};
  app.require_subcommand(1);

  Common ex_common;
  std::vector<std::string> ex_inputs;
  std::string out_plan, out_report, out_series;
  auto* ex = app.add_subcommand("extract", "Extract an action plan from each input trajectory");
  ex->add_option("inputs", ex_inputs, "trajectory files or glob patterns")->required();
  add_common(ex, ex_common, true);
  ex->add_option("--out-plan", out_plan, "plan file (numbered when several trajectories)");
  ex->add_option("--out-report", out_report, "report CSV (default: stdout)");
  ex->add_option("--out-series", out_series, "original vs reconstructed series CSV");

  Common cmp_common;
  std::vector<std::string> cmp_inputs;
  std::vector<std::string> kernels{"gaussian", "lognormal", "gamma", "beta", "dbl", "gev"};
  std::vector<std::string> links{"arc", "clothoid"};
  std::string cmp_report;
  auto* cmp = app.add_subcommand("compare", "Run every kernel x link configuration on each input");
  cmp->add_option("inputs", cmp_inputs, "trajectory files or glob patterns")->required();
  add_common(cmp, cmp_common, false);
  cmp->add_option("--kernels", kernels, "comma-separated kernel list")->delimiter(',')->check(kernel_check);
  cmp->add_option("--links", links, "comma-separated link list")->delimiter(',')->check(link_check);
  cmp->add_option("--out-report", cmp_report, "report CSV (default: stdout)");

  std::string plan_path, rec_out, rec_reference, rec_format = "auto";
  double rec_rate = 200.0;
  auto* rec = app.add_subcommand("reconstruct", "Synthesize a trajectory from a plan");
  rec->add_option("--plan", plan_path, "plan file")->required();
  rec->add_option("--rate", rec_rate, "sample rate in Hz")->check(CLI::PositiveNumber);
  rec->add_option("--out", rec_out, "trajectory CSV (default: stdout)");
  rec->add_option("--reference", rec_reference, "score the plan against this trajectory");
  rec->add_option("--format", rec_format, "reference format")->check(CLI::IsMember({"auto", "delimited", "pen"}));

  ktt::SyntheticSpec syn;
  std::string syn_kernel = "lognormal", syn_link = "clothoid", syn_out, syn_plan;
  auto* sy = app.add_subcommand("synth", "Generate a random plan and its trajectory");
  sy->add_option("--strokes", syn.n_strokes, "number of strokes")->check(CLI::PositiveNumber);
  sy->add_option("--kernel", syn_kernel, "kernel kind")->check(kernel_check);
  sy->add_option("--link", syn_link, "link kind")->check(link_check);
  sy->add_option("--overlap", syn.overlap_fraction, "temporal overlap fraction")->check(CLI::Range(0.0, 0.6));
  sy->add_option("--seed", syn.seed, "random seed");
  sy->add_option("--rate", syn.rate, "sample rate in Hz")->check(CLI::PositiveNumber);
  sy->add_option("--out", syn_out, "trajectory CSV (default: stdout)");
  sy->add_option("--out-plan", syn_plan, "ground-truth plan file");

  std::string st_report, st_test = "jb", st_column = "snr_v";
  std::vector<std::string> st_groups;
  auto* st = app.add_subcommand("stats", "Statistical tests over report columns");
  st->add_option("--report", st_report, "report CSV")->required();
  st->add_option("--test", st_test, "jb or mwu")->check(CLI::IsMember({"jb", "mwu"}));
  st->add_option("--column", st_column, "report column")
      ->check(CLI::IsMember({"snr_t", "snr_v", "snr_t_per_n", "snr_v_per_n"}));
  st->add_option("--groups", st_groups, "config ids to test (mwu: two)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, std::cout, std::cerr);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (ex->parsed()) return run_extract(ex_inputs, ex_common, *ex, out_plan, out_report, out_series);
    if (cmp->parsed()) return run_compare(cmp_inputs, cmp_common, *cmp, kernels, links, cmp_report);
    if (rec->parsed()) return run_reconstruct(plan_path, rec_rate, rec_out, rec_reference, rec_format);
    if (sy->parsed()) {
      syn.kernel_kind = *ktt::kernel_kind_from_string(syn_kernel);
      syn.link_kind = *ktt::link_kind_from_string(syn_link);
      const auto s = ktt::generate_synthetic(syn);
      if (!syn_plan.empty()) ktt::io::write_plan(fs::path(syn_plan), s.plan);
      if (syn_out.empty()) {
        ktt::io::write_trajectory(std::cout, s.trajectory);
      } else {
        write_file(syn_out, [&](std::ostream& o) { ktt::io::write_trajectory(o, s.trajectory); });
      }
      return kOk;
    }
    if (st->parsed()) return run_stats(st_report, st_test, st_column, st_groups);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "ktt: " << e.what() << '\n';
    return kUsage;
  } catch (const ktt::Error& e) {
    std::cerr << "ktt: " << to_string(e.code()) << ": " << e.what() << '\n';
    // extract and compare handle per-file failures themselves; anything that
    // escapes them is a configuration problem.
    return ex->parsed() || cmp->parsed() ? kUsage : kPartialFailure;
  } catch (const std::exception& e) {
    std::cerr << "ktt: " << e.what() << '\n';
    return kPartialFailure;
  }
  return kUsage;
}
