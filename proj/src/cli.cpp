#include "ptstab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "ptstab/config.hpp"
#include "ptstab/error.hpp"
#include "ptstab/montecarlo.hpp"
#include "ptstab/report_io.hpp"
#include "ptstab/stability.hpp"

#ifndef PTSTAB_VERSION
#define PTSTAB_VERSION "0.0.0"
#endif

namespace ptstab {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int parallel = 0;
  std::vector<std::string> sets;

  std::vector<std::string> regulator;
  double grid_min = 1e-8;
  double grid_max = 1e8;
  int grid_n = 100;
  double v0 = 0.0;
  double tc = 1.0;
};

class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args, fs::path dir)
      : dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {
    doc_["tool"] = "ptstab";
    doc_["version"] = PTSTAB_VERSION;
    doc_["command"] = std::move(command);
    doc_["args"] = args;
    doc_["seed"] = nullptr;
    doc_["resolved_config"] = nullptr;
    doc_["outputs"] = ordered_json::array();
  }

  void seed(std::uint64_t s) { doc_["seed"] = s; }
  void config(ordered_json c) { doc_["resolved_config"] = std::move(c); }

  fs::path output(const std::string& name) {
    doc_["outputs"].push_back((dir_ / name).string());
    return dir_ / name;
  }

  void write(int exit_code, const std::string& error) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["outputs"].push_back((dir_ / "manifest.json").string());
    doc_["runtime_seconds"] = seconds;
    doc_["exit_code"] = exit_code;
    doc_["error"] = error.empty() ? ordered_json() : ordered_json(error);
    std::ofstream(dir_ / "manifest.json") << doc_.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  std::chrono::steady_clock::time_point start_;
  ordered_json doc_;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

void write_text(const fs::path& path, const std::string& text) { open_output(path) << text; }

RunConfig load_run_config(const Options& opt, Manifest& manifest) {
  if (opt.config.empty()) throw ConfigError("--config is required");
  RunConfig cfg = load_config(opt.config, opt.sets);
  if (opt.seed) cfg.campaign.seed = *opt.seed;
  manifest.seed(cfg.campaign.seed);
  const std::string ini = resolved_ini(cfg);
  manifest.config(ini);
  write_text(manifest.output("resolved_config.ini"), ini);
  return cfg;
}

ordered_json regulator_json(const Regulator& reg) {
  ordered_json params = ordered_json::object();
  for (const auto& [key, value] : regulator_params(reg)) params[key] = value;
  return {{"kind", reg.name()}, {"p", reg.p()}, {"params", params}};
}

int cmd_simulate(const Options& opt, Manifest& manifest, std::ostream& out) {
  const RunConfig cfg = load_run_config(opt, manifest);
  const CampaignConfig& c = cfg.campaign;
  const PlantModel plant = plant_by_name(c.plant);

  Trajectory traj;
  const ScenarioResult r = run_scenario(c, plant, 0, cfg.x0, &traj);

  {
    auto csv = open_output(manifest.output("trajectory.csv"));
    write_csv(csv, traj);
  }
  for (const auto& [name, signal] : {std::pair{"plot_x1.csv", SettleSignal::X1}, std::pair{"plot_s.csv", SettleSignal::S}}) {
    auto plot = open_output(manifest.output(name));
    write_plot_header(plot);
    write_plot_rows(plot, 0, traj, signal);
  }

  ordered_json diag = to_json(r);
  diag["deadline"] = c.surface.t1 + c.surface.t2;
  diag["time_tolerance"] = c.time_tolerance;
  diag["threshold_x1"] = c.sim.x1_threshold(c.surface);
  diag["threshold_s"] = c.sim.settle_threshold_s;
  diag["rows"] = traj.rows.size();
  write_text(manifest.output("diagnostics.json"), diag.dump(2) + "\n");

  out << diag.dump(2) << '\n';
  return r.violated ? kExitViolated : kExitOk;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw ConfigError("grid needs 0 < grid-min <= grid-max and grid-n >= 1");
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) grid[i] = n == 1 ? lo : std::exp(a + (b - a) * i / (n - 1));
  return grid;
}

int cmd_check(const Options& opt, Manifest& manifest, std::ostream& out) {
  const Regulator reg = parse_regulator_tokens(opt.regulator);
  const std::vector<double> grid = log_grid(opt.grid_min, opt.grid_max, opt.grid_n);
  manifest.config({{"regulator", regulator_json(reg)},
                   {"grid", {{"min", opt.grid_min}, {"max", opt.grid_max}, {"n", opt.grid_n}}}});
  const ConditionReport report = check_conditions(reg, grid);
  const std::string text = to_json(report).dump(2) + "\n";
  write_text(manifest.output("check.json"), text);
  out << text;
  return report.cond_i_ok && report.cond_ii_ok ? kExitOk : kExitViolated;
}

int cmd_bound(const Options& opt, Manifest& manifest, std::ostream& out) {
  const Regulator reg = parse_regulator_tokens(opt.regulator);
  manifest.config({{"regulator", regulator_json(reg)}, {"v0", opt.v0}, {"tc", opt.tc}});
  const BoundReport report = settling_bound(reg, opt.v0, opt.tc);
  const std::string text = to_json(report).dump(2) + "\n";
  write_text(manifest.output("bound.json"), text);
  out << text;
  return kExitOk;
}

void print_summary(std::ostream& out, const CampaignSummary& s, double deadline) {
  auto row = [&out](const char* name, const Quantiles& q) {
    out << std::left << std::setw(14) << name << std::right;
    for (double v : {q.min, q.mean, q.p50, q.p90, q.p99, q.max}) out << std::setw(12) << std::setprecision(6) << v;
    out << '\n';
  };
  out << "scenarios      " << s.n << "   deadline " << deadline << " s\n";
  out << std::left << std::setw(14) << "settle [s]" << std::right;
  for (const char* h : {"min", "mean", "p50", "p90", "p99", "max"}) out << std::setw(12) << h;
  out << '\n';
  row("x1", s.settle_x1);
  row("s", s.settle_s);
  const auto within = std::count_if(s.reach_checks.begin(), s.reach_checks.end(),
                                    [](const ScenarioBoundCheck& c) { return c.within_bound; });
  out << "reach within bound   " << within << "/" << s.reach_checks.size() << '\n';
  out << "condition-(iii) violations   " << s.condition_violation_count << '\n';
  out << "deadline violations  " << s.violations.size();
  if (!s.violations.empty()) {
    out << "  (";
    for (std::size_t i = 0; i < s.violations.size(); ++i) out << (i ? " " : "") << s.violations[i];
    out << ')';
  }
  out << '\n';
}

int cmd_montecarlo(const Options& opt, Manifest& manifest, std::ostream& out) {
  const RunConfig cfg = load_run_config(opt, manifest);
  const CampaignConfig& c = cfg.campaign;
  const CampaignRun run = run_campaign(c, opt.parallel, true);

  write_text(manifest.output("report.json"), to_json(run.report).dump(2) + "\n");

  const CampaignSummary summary = summarize(run.report, c.time_tolerance);
  write_text(manifest.output("summary.json"), to_json(summary).dump(2) + "\n");

  for (const auto& [name, signal] : {std::pair{"plot_x1.csv", SettleSignal::X1}, std::pair{"plot_s.csv", SettleSignal::S}}) {
    auto plot = open_output(manifest.output(name));
    write_plot_header(plot);
    for (std::size_t i = 0; i < run.trajectories.size(); ++i) write_plot_rows(plot, i, run.trajectories[i], signal);
  }
  if (cfg.dump_scenarios) {
    for (std::size_t i = 0; i < run.trajectories.size(); ++i) {
      auto csv = open_output(manifest.output("scenario_" + std::to_string(i) + ".csv"));
      write_csv(csv, run.trajectories[i]);
    }
  }

  print_summary(out, summary, c.surface.t1 + c.surface.t2);
  return run.report.violation_count == 0 ? kExitOk : kExitViolated;
}

fs::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "out";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Predefined-time stabilization toolkit", "ptstab"};
  app.set_version_flag("--version", PTSTAB_VERSION);
  app.require_subcommand(1);
  app.add_option("--config", opt.config, "INI configuration file");
  app.add_option("--seed", opt.seed, "Override campaign.seed");
  app.add_option("--out-dir", opt.out_dir, std::string("Output directory (default $") + kOutDirEnv + " or ./out)");
  app.add_option("--parallel", opt.parallel, "Worker threads for campaigns (0 = OpenMP default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--set", opt.sets, "Override section.key=value (repeatable)");

  auto* simulate = app.add_subcommand("simulate", "Single closed-loop run from [sim] x1, x2");
  auto* check = app.add_subcommand("check", "Check regulator conditions (i) and (ii) on a log grid");
  auto* bound = app.add_subcommand("bound", "Settling-time bound from V0 for a regulator");
  auto* montecarlo = app.add_subcommand("montecarlo", "Seeded Monte Carlo campaign");

  for (CLI::App* sub : {simulate, check, bound, montecarlo}) sub->fallthrough();
  for (CLI::App* sub : {check, bound}) {
    sub->add_option("regulator", opt.regulator, "kind key=value ... p=value")->required();
  }
  check->add_option("--grid-min", opt.grid_min, "Smallest V");
  check->add_option("--grid-max", opt.grid_max, "Largest V");
  check->add_option("--grid-n", opt.grid_n, "Grid points");
  bound->add_option("--v0", opt.v0, "Initial Lyapunov value")->required();
  bound->add_option("--tc", opt.tc, "Predefined time")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const fs::path dir = resolve_out_dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create output directory '" << dir.string() << "': " << ec.message() << '\n';
    return kExitError;
  }

  Manifest manifest(chosen->get_name(), args, dir);
  int code = kExitError;
  std::string error;
  try {
    if (chosen == simulate) code = cmd_simulate(opt, manifest, out);
    else if (chosen == check) code = cmd_check(opt, manifest, out);
    else if (chosen == bound) code = cmd_bound(opt, manifest, out);
    else code = cmd_montecarlo(opt, manifest, out);
  } catch (const std::exception& e) {
    error = e.what();
    err << "error: " << error << '\n';
    code = kExitError;
  }
  try {
    manifest.write(code, error);
  } catch (const std::exception& e) {
    err << "error: cannot write manifest: " << e.what() << '\n';
    return kExitError;
  }
  return code;
}

}  // namespace ptstab
