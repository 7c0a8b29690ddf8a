#pragma once

#include <json.hpp>

#include "ptstab/montecarlo.hpp"
#include "ptstab/stability.hpp"

namespace ptstab {

nlohmann::ordered_json to_json(const ConditionReport& report);
nlohmann::ordered_json to_json(const BoundReport& report);
nlohmann::ordered_json to_json(const std::vector<DecayViolation>& violations);
nlohmann::ordered_json to_json(const ScenarioResult& result);
nlohmann::ordered_json to_json(const CampaignReport& report);
nlohmann::ordered_json to_json(const CampaignSummary& summary);

/// Long-format plot data: `scenario,t,value`.
void write_plot_header(std::ostream& out);
void write_plot_rows(std::ostream& out, std::size_t scenario, const Trajectory& traj, SettleSignal signal);

}  // namespace ptstab
