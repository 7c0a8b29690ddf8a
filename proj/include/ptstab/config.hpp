#pragma once

// Plain-text run configuration: INI sections [regulator], [regulator_reach],
// [surface], [sim] and [campaign]. Overrides use `section.key=value`.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ptstab/montecarlo.hpp"

namespace ptstab {

struct RegulatorSpec {
  std::string kind;
  std::map<std::string, double> params;
};

struct RunConfig {
  RegulatorSpec slide;
  /// Empty kind means "same as slide".
  RegulatorSpec reach;
  CampaignConfig campaign;
  State2 x0;
  bool dump_scenarios = false;
};

/// Parses INI text. `origin` names the source in error messages.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {},
                       const std::string& origin = "<config>");

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Every setting with defaults materialized; parse_config(resolved_ini(c))
/// reproduces c.
std::string resolved_ini(const RunConfig& config);

/// Parses `kind key=value ...` tokens. `p` is required and returned separately.
Regulator parse_regulator_tokens(const std::vector<std::string>& tokens);

}  // namespace ptstab
