#include "ptstab/report_io.hpp"

#include <cmath>
#include <ostream>

namespace ptstab {

using nlohmann::ordered_json;

namespace {

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(); }

// JSON has no infinity; unbounded limits are written as null.
ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

ordered_json to_json(const Quantiles& q) {
  return {{"min", q.min}, {"mean", q.mean}, {"p50", q.p50}, {"p90", q.p90}, {"p99", q.p99}, {"max", q.max}};
}

}  // namespace

ordered_json to_json(const ConditionReport& report) {
  ordered_json samples = ordered_json::array();
  for (const ConditionSample& s : report.samples) {
    samples.push_back({{"v", s.v}, {"psi", s.psi}, {"dpsi", s.dpsi}});
  }
  return {
      {"case", to_string(report.theorem_case)},
      {"cond_i_ok", report.cond_i_ok},
      {"cond_ii_ok", report.cond_ii_ok},
      {"worst_violation", report.worst_violation},
      {"samples", samples},
  };
}

ordered_json to_json(const BoundReport& report) {
  return {
      {"case", to_string(report.theorem_case)},
      {"psi0", report.psi0},
      {"psiT", report.psiT},
      {"tc", report.tc},
      {"bound", report.bound},
  };
}

ordered_json to_json(const std::vector<DecayViolation>& violations) {
  ordered_json out = ordered_json::array();
  for (const DecayViolation& v : violations) {
    out.push_back({{"index", v.index}, {"t", v.t}, {"v", v.v}, {"dv_dt", v.dv_dt}, {"required", v.required}});
  }
  return out;
}

ordered_json to_json(const ScenarioResult& r) {
  return {
      {"index", r.index},
      {"x0", {r.x0.x1, r.x0.x2}},
      {"settle_time_x1", optional_number(r.settle_time_x1)},
      {"settle_time_s", optional_number(r.settle_time_s)},
      {"violated", r.violated},
      {"early_term_reason", r.early_term_reason ? ordered_json(*r.early_term_reason) : ordered_json()},
      {"condition_violations", r.condition_violations},
      {"reach_bound", finite_or_null(r.reach_bound)},
  };
}

ordered_json to_json(const CampaignReport& report) {
  ordered_json scenarios = ordered_json::array();
  for (const ScenarioResult& r : report.scenarios) scenarios.push_back(to_json(r));
  return {
      {"n", report.scenarios.size()},
      {"violation_count", report.violation_count},
      {"condition_violation_count", report.condition_violation_count},
      {"settle_time_x1", {{"max", report.max_settle_x1}, {"mean", report.mean_settle_x1}, {"min", report.min_settle_x1}}},
      {"settle_time_s", {{"max", report.max_settle_s}, {"mean", report.mean_settle_s}, {"min", report.min_settle_s}}},
      {"scenarios", scenarios},
  };
}

ordered_json to_json(const CampaignSummary& summary) {
  ordered_json checks = ordered_json::array();
  for (const ScenarioBoundCheck& c : summary.reach_checks) {
    checks.push_back({{"index", c.index},
                      {"settle_time_s", optional_number(c.settle_time_s)},
                      {"reach_bound", finite_or_null(c.reach_bound)},
                      {"within_bound", c.within_bound}});
  }
  return {
      {"n", summary.n},
      {"settle_time_x1", to_json(summary.settle_x1)},
      {"settle_time_s", to_json(summary.settle_s)},
      {"violations", summary.violations},
      {"condition_violation_count", summary.condition_violation_count},
      {"reach_checks", checks},
  };
}

void write_plot_header(std::ostream& out) { out << "scenario,t,value\n"; }

void write_plot_rows(std::ostream& out, std::size_t scenario, const Trajectory& traj, SettleSignal signal) {
  for (const Sample& r : traj.rows) {
    out << scenario << ',' << format_double(r.t) << ',' << format_double(signal == SettleSignal::X1 ? r.x1 : r.s)
        << '\n';
  }
}

}  // namespace ptstab
