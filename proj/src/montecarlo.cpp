#include "ptstab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ptstab/error.hpp"
#include "ptstab/stability.hpp"

namespace ptstab {

void CampaignConfig::validate() const {
  if (n_scenarios < 1) throw ConfigError("campaign.n_scenarios must be at least 1");
  if (!(x1_range.first <= x1_range.second)) throw ConfigError("campaign x1 range is not ordered");
  if (!(x2_range.first <= x2_range.second)) throw ConfigError("campaign x2 range is not ordered");
  if (!(time_tolerance >= 0.0)) throw ConfigError("campaign.time_tolerance must be nonnegative");
  surface.validate();
  sim.validate();
  if (reg_slide.p() != surface.p1 || reg_reach.p() != surface.p1) {
    throw ConfigError("regulator exponents must equal surface.p1");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// 53 random bits mapped to [0, 1); avoids the implementation-defined
// std::uniform_real_distribution so draws match across standard libraries.
double unit_draw(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

double lerp(std::pair<double, double> range, double w) { return range.first + (range.second - range.first) * w; }

}  // namespace

std::vector<State2> sample_scenarios(const CampaignConfig& cfg) {
  std::vector<State2> out;
  out.reserve(static_cast<std::size_t>(cfg.n_scenarios) + 5);
  for (int i = 0; i < cfg.n_scenarios; ++i) {
    std::mt19937_64 gen(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(i))));
    const double a = unit_draw(gen);
    const double b = unit_draw(gen);
    out.push_back({lerp(cfg.x1_range, a), lerp(cfg.x2_range, b)});
  }
  if (cfg.corner_cases) {
    const auto [x1lo, x1hi] = cfg.x1_range;
    const auto [x2lo, x2hi] = cfg.x2_range;
    out.push_back({x1lo, x2lo});
    out.push_back({x1lo, x2hi});
    out.push_back({x1hi, x2lo});
    out.push_back({x1hi, x2hi});
    out.push_back({0.0, 0.0});
  }
  return out;
}

ScenarioResult run_scenario(const CampaignConfig& cfg, const PlantModel& plant, std::size_t index, State2 x0,
                            Trajectory* keep) {
  ScenarioResult r;
  r.index = index;
  r.x0 = x0;
  Trajectory traj = integrate_closed_loop(plant, cfg.surface, cfg.reg_slide, cfg.reg_reach, x0, cfg.sim);
  if (traj.terminated_early) r.early_term_reason = traj.reason;

  r.settle_time_x1 = settling_time(traj, cfg.sim.x1_threshold(cfg.surface), SettleSignal::X1);
  r.settle_time_s = settling_time(traj, cfg.sim.settle_threshold_s, SettleSignal::S);
  const double deadline = cfg.surface.t1 + cfg.surface.t2 + cfg.time_tolerance;
  r.violated = !r.settle_time_x1 || *r.settle_time_x1 > deadline;

  try {
    const double v2_0 = traj.rows.empty() ? 0.5 * std::pow(surface(cfg.surface, cfg.reg_slide, x0).s, 2)
                                          : traj.rows.front().v2;
    r.reach_bound = settling_bound(cfg.reg_reach, v2_0, cfg.surface.t2).bound;
    if (traj.rows.size() >= 3) {
      VerifyOptions opts;
      opts.min_abs_signal = cfg.verify_min_abs_s;
      r.condition_violations =
          verify_trajectory(traj, cfg.reg_reach, cfg.surface.t2, LyapunovSignal::V2OfS, opts).size();
    }
  } catch (const Error& e) {
    if (!r.early_term_reason) r.early_term_reason = std::string("verification failed: ") + e.what();
    r.violated = true;
  }
  if (keep != nullptr) *keep = std::move(traj);
  return r;
}

namespace {

void aggregate(CampaignReport& report) {
  std::vector<double> x1;
  std::vector<double> s;
  report.violation_count = 0;
  report.condition_violation_count = 0;
  for (const ScenarioResult& r : report.scenarios) {
    if (r.settle_time_x1) x1.push_back(*r.settle_time_x1);
    if (r.settle_time_s) s.push_back(*r.settle_time_s);
    report.violation_count += r.violated ? 1 : 0;
    report.condition_violation_count += r.condition_violations;
  }
  const Quantiles qx = quantiles(x1);
  const Quantiles qs = quantiles(s);
  report.max_settle_x1 = qx.max;
  report.mean_settle_x1 = qx.mean;
  report.min_settle_x1 = qx.min;
  report.max_settle_s = qs.max;
  report.mean_settle_s = qs.mean;
  report.min_settle_s = qs.min;
}

}  // namespace

CampaignRun run_campaign(const CampaignConfig& cfg, int threads, bool keep_trajectories) {
  cfg.validate();
  const std::vector<State2> x0s = sample_scenarios(cfg);
  const PlantModel plant = plant_by_name(cfg.plant);
  const auto n = static_cast<long long>(x0s.size());

  CampaignRun run;
  run.report.scenarios.resize(x0s.size());
  if (keep_trajectories) run.trajectories.resize(x0s.size());

#ifdef _OPENMP
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
#else
  (void)threads;
#endif
  for (long long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    Trajectory* keep = keep_trajectories ? &run.trajectories[idx] : nullptr;
    run.report.scenarios[idx] = run_scenario(cfg, plant, idx, x0s[idx], keep);
  }
  aggregate(run.report);
  return run;
}

CampaignRun run_campaign_serial(const CampaignConfig& cfg, bool keep_trajectories) {
  cfg.validate();
  const std::vector<State2> x0s = sample_scenarios(cfg);
  const PlantModel plant = plant_by_name(cfg.plant);
  CampaignRun run;
  for (std::size_t i = 0; i < x0s.size(); ++i) {
    Trajectory traj;
    run.report.scenarios.push_back(run_scenario(cfg, plant, i, x0s[i], keep_trajectories ? &traj : nullptr));
    if (keep_trajectories) run.trajectories.push_back(std::move(traj));
  }
  aggregate(run.report);
  return run;
}

Quantiles quantiles(std::vector<double> values) {
  Quantiles q;
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan, nan, nan};
  }
  std::sort(values.begin(), values.end());
  // linear interpolation between closest ranks
  auto at = [&values](double prob) {
    const double pos = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  q.min = values.front();
  q.max = values.back();
  q.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  q.p50 = at(0.5);
  q.p90 = at(0.9);
  q.p99 = at(0.99);
  return q;
}

CampaignSummary summarize(const CampaignReport& report, double slack) {
  CampaignSummary out;
  out.n = report.scenarios.size();
  std::vector<double> x1;
  std::vector<double> s;
  for (const ScenarioResult& r : report.scenarios) {
    if (r.settle_time_x1) x1.push_back(*r.settle_time_x1);
    if (r.settle_time_s) s.push_back(*r.settle_time_s);
    if (r.violated) out.violations.push_back(r.index);
    out.condition_violation_count += r.condition_violations;
    out.reach_checks.push_back({r.index, r.settle_time_s, r.reach_bound,
                                r.settle_time_s.has_value() && *r.settle_time_s <= r.reach_bound + slack});
  }
  out.settle_x1 = quantiles(std::move(x1));
  out.settle_s = quantiles(std::move(s));
  return out;
}

}  // namespace ptstab
