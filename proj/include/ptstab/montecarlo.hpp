#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptstab/plant.hpp"
#include "ptstab/regulator.hpp"
#include "ptstab/sim.hpp"
#include "ptstab/smc.hpp"

namespace ptstab {

struct CampaignConfig {
  int n_scenarios = 100;
  std::uint64_t seed = 42;
  std::pair<double, double> x1_range{-1200.0, 1200.0};
  std::pair<double, double> x2_range{-100.0, 100.0};
  /// Append the four box corners and the origin after the random draws.
  bool corner_cases = true;
  double time_tolerance = 1e-2;
  /// |s| at or below this is excluded from the condition-(iii) check.
  double verify_min_abs_s = 1e-6;
  std::string plant = "benchmark";
  SurfaceParams surface;
  SimConfig sim;
  Regulator reg_slide{kind::SigmoidRatio{}, 0.051};
  Regulator reg_reach{kind::SigmoidRatio{}, 0.051};

  void validate() const;
};

struct ScenarioResult {
  std::size_t index = 0;
  State2 x0;
  std::optional<double> settle_time_x1;
  std::optional<double> settle_time_s;
  bool violated = false;
  std::optional<std::string> early_term_reason;
  std::size_t condition_violations = 0;
  /// settling_bound(reg_reach, s(0)^2/2, T2), the theoretical reaching time.
  double reach_bound = 0.0;
};

struct CampaignReport {
  std::vector<ScenarioResult> scenarios;
  // Statistics over scenarios that settled; NaN when none did.
  double max_settle_x1 = 0.0;
  double mean_settle_x1 = 0.0;
  double min_settle_x1 = 0.0;
  double max_settle_s = 0.0;
  double mean_settle_s = 0.0;
  double min_settle_s = 0.0;
  std::size_t violation_count = 0;
  std::size_t condition_violation_count = 0;
};

struct CampaignRun {
  CampaignReport report;
  /// Filled only when trajectories are requested; indexed like the scenarios.
  std::vector<Trajectory> trajectories;
};

/// Draws from mt19937_64 seeded per scenario with splitmix64(seed, index),
/// so the list does not depend on evaluation order.
std::vector<State2> sample_scenarios(const CampaignConfig& cfg);

ScenarioResult run_scenario(const CampaignConfig& cfg, const PlantModel& plant, std::size_t index, State2 x0,
                            Trajectory* keep = nullptr);

/// OpenMP over scenarios. threads <= 0 uses the OpenMP default.
CampaignRun run_campaign(const CampaignConfig& cfg, int threads = 0, bool keep_trajectories = false);

/// Single-threaded reference with identical results.
CampaignRun run_campaign_serial(const CampaignConfig& cfg, bool keep_trajectories = false);

struct Quantiles {
  double min = 0.0;
  double mean = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

struct ScenarioBoundCheck {
  std::size_t index = 0;
  std::optional<double> settle_time_s;
  double reach_bound = 0.0;
  bool within_bound = false;
};

struct CampaignSummary {
  std::size_t n = 0;
  Quantiles settle_x1;
  Quantiles settle_s;
  std::vector<std::size_t> violations;
  std::size_t condition_violation_count = 0;
  std::vector<ScenarioBoundCheck> reach_checks;
};

/// `slack` is added to each theoretical reaching bound before comparison.
CampaignSummary summarize(const CampaignReport& report, double slack = 0.0);

/// All fields are NaN for an empty sample.
Quantiles quantiles(std::vector<double> values);

}  // namespace ptstab
