#include "ptstab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "ptstab/error.hpp"

namespace ptstab {

namespace pt = boost::property_tree;

namespace {

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ConfigError("invalid number for '" + key + "': '" + text + "'");
  }
  return value;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw ConfigError("'" + key + "' must be an integer, got '" + text + "'");
  return static_cast<long long>(v);
}

std::uint64_t parse_seed(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw ConfigError("invalid unsigned 64-bit value for '" + key + "': '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("invalid boolean for '" + key + "': '" + text + "'");
}

void apply_override(pt::ptree& tree, const std::string& item) {
  const auto eq = item.find('=');
  const auto dot = item.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq || dot == 0 || dot + 1 == eq) {
    throw ConfigError("override '" + item + "' is not of the form section.key=value");
  }
  tree.put(pt::ptree::path_type(item.substr(0, eq), '.'), item.substr(eq + 1));
}

RegulatorSpec read_regulator(const pt::ptree& section, const std::string& name, double p1) {
  RegulatorSpec spec;
  for (const auto& [key, node] : section) {
    const std::string full = name + "." + key;
    const std::string value = node.get_value<std::string>();
    if (key == "kind") {
      spec.kind = value;
    } else if (key == "p") {
      if (parse_number(full, value) != p1) {
        throw ConfigError("'" + full + "' must equal surface.p1 (" + format_double(p1) + ")");
      }
    } else {
      spec.params[key] = parse_number(full, value);
    }
  }
  if (spec.kind.empty()) {
    throw ConfigError("missing required key '" + name + ".kind'");
  }
  return spec;
}

// 1-based line of `section.key` in INI text, 0 when absent (e.g. an override).
int line_of(std::string_view text, const std::string& full) {
  const auto dot = full.find('.');
  const std::string section = full.substr(0, dot);
  const std::string key = full.substr(dot + 1);
  std::istringstream in{std::string(text)};
  std::string line;
  std::string current;
  auto trim = [](std::string v) {
    const auto a = v.find_first_not_of(" \t\r");
    const auto b = v.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
  };
  for (int n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
    } else if (current == section) {
      const auto eq = t.find('=');
      if (eq != std::string::npos && trim(t.substr(0, eq)) == key) return n;
    }
  }
  return 0;
}

// Prefixes "origin:line: " to messages that name a 'section.key'.
std::string locate(std::string_view text, const std::string& origin, const std::string& message) {
  const auto open = message.find('\'');
  const auto close = open == std::string::npos ? std::string::npos : message.find('\'', open + 1);
  if (close != std::string::npos) {
    const std::string key = message.substr(open + 1, close - open - 1);
    if (key.find('.') != std::string::npos) {
      if (const int n = line_of(text, key); n > 0) return origin + ":" + std::to_string(n) + ": " + message;
    }
  }
  return origin + ": " + message;
}

RunConfig parse_tree(std::string_view text, const std::vector<std::string>& overrides, const std::string& origin) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  for (const std::string& item : overrides) apply_override(tree, item);

  static const std::set<std::string> sections{"regulator", "regulator_reach", "surface", "sim", "campaign"};
  for (const auto& [name, node] : tree) {
    if (!sections.contains(name)) throw ConfigError(origin + ": unknown section '" + name + "'");
    if (!node.data().empty() && node.empty()) {
      throw ConfigError(origin + ": key '" + name + "' must appear inside a section");
    }
  }

  RunConfig cfg;
  CampaignConfig& c = cfg.campaign;

  if (const auto node = tree.get_child_optional("surface")) {
    for (const auto& [key, child] : *node) {
      const std::string full = "surface." + key;
      const double v = parse_number(full, child.get_value<std::string>());
      if (key == "p1") c.surface.p1 = v;
      else if (key == "q") c.surface.q = v;
      else if (key == "eta0") c.surface.eta0 = v;
      else if (key == "t1") c.surface.t1 = v;
      else if (key == "t2") c.surface.t2 = v;
      else if (key == "kappa") c.surface.kappa = v;
      else if (key == "sign_epsilon") c.surface.sign_epsilon = v;
      else throw ConfigError("unknown key '" + full + "'");
    }
  }

  if (const auto node = tree.get_child_optional("sim")) {
    for (const auto& [key, child] : *node) {
      const std::string full = "sim." + key;
      const std::string value = child.get_value<std::string>();
      if (key == "plant") c.plant = value;
      else if (key == "dt") c.sim.dt = parse_number(full, value);
      else if (key == "horizon") c.sim.horizon = parse_number(full, value);
      else if (key == "settle_threshold_x1") c.sim.settle_threshold_x1 = parse_number(full, value);
      else if (key == "settle_threshold_s") c.sim.settle_threshold_s = parse_number(full, value);
      else if (key == "record_stride") c.sim.record_stride = static_cast<int>(parse_integer(full, value));
      else if (key == "x1") cfg.x0.x1 = parse_number(full, value);
      else if (key == "x2") cfg.x0.x2 = parse_number(full, value);
      else throw ConfigError("unknown key '" + full + "'");
    }
  }

  if (const auto node = tree.get_child_optional("campaign")) {
    for (const auto& [key, child] : *node) {
      const std::string full = "campaign." + key;
      const std::string value = child.get_value<std::string>();
      if (key == "n_scenarios") c.n_scenarios = static_cast<int>(parse_integer(full, value));
      else if (key == "seed") c.seed = parse_seed(full, value);
      else if (key == "x1_min") c.x1_range.first = parse_number(full, value);
      else if (key == "x1_max") c.x1_range.second = parse_number(full, value);
      else if (key == "x2_min") c.x2_range.first = parse_number(full, value);
      else if (key == "x2_max") c.x2_range.second = parse_number(full, value);
      else if (key == "corner_cases") c.corner_cases = parse_bool(full, value);
      else if (key == "time_tolerance") c.time_tolerance = parse_number(full, value);
      else if (key == "verify_min_abs_s") c.verify_min_abs_s = parse_number(full, value);
      else if (key == "dump_scenarios") cfg.dump_scenarios = parse_bool(full, value);
      else throw ConfigError("unknown key '" + full + "'");
    }
  }

  const auto slide = tree.get_child_optional("regulator");
  if (!slide) throw ConfigError("missing required key 'regulator.kind'");
  cfg.slide = read_regulator(*slide, "regulator", c.surface.p1);
  if (const auto reach = tree.get_child_optional("regulator_reach")) {
    cfg.reach = read_regulator(*reach, "regulator_reach", c.surface.p1);
  }
  c.surface.validate();
  c.reg_slide = make_regulator(cfg.slide.kind, cfg.slide.params, c.surface.p1);
  c.reg_reach = cfg.reach.kind.empty() ? c.reg_slide
                                       : make_regulator(cfg.reach.kind, cfg.reach.params, c.surface.p1);
  plant_by_name(c.plant);
  c.validate();
  return cfg;
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides, const std::string& origin) {
  try {
    return parse_tree(text, overrides, origin);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(origin + ":", 0) == 0) throw;
    throw ConfigError(locate(text, origin, msg));
  }
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides, path);
}

std::string resolved_ini(const RunConfig& config) {
  const CampaignConfig& c = config.campaign;
  std::ostringstream out;
  auto reg = [&out](const char* section, const RegulatorSpec& spec, const Regulator& r) {
    out << '[' << section << "]\n";
    out << "kind = " << (spec.kind.empty() ? r.name() : spec.kind) << '\n';
    for (const auto& [key, value] : regulator_params(r)) out << key << " = " << format_double(value) << '\n';
    out << '\n';
  };
  reg("regulator", config.slide, c.reg_slide);
  reg("regulator_reach", config.reach, c.reg_reach);
  out << "[surface]\n"
      << "p1 = " << format_double(c.surface.p1) << '\n'
      << "q = " << format_double(c.surface.q) << '\n'
      << "eta0 = " << format_double(c.surface.eta0) << '\n'
      << "t1 = " << format_double(c.surface.t1) << '\n'
      << "t2 = " << format_double(c.surface.t2) << '\n'
      << "kappa = " << format_double(c.surface.kappa) << '\n'
      << "sign_epsilon = " << format_double(c.surface.sign_epsilon) << "\n\n";
  out << "[sim]\n"
      << "plant = " << c.plant << '\n'
      << "dt = " << format_double(c.sim.dt) << '\n'
      << "horizon = " << format_double(c.sim.horizon) << '\n'
      << "settle_threshold_x1 = " << format_double(c.sim.x1_threshold(c.surface)) << '\n'
      << "settle_threshold_s = " << format_double(c.sim.settle_threshold_s) << '\n'
      << "record_stride = " << c.sim.record_stride << '\n'
      << "x1 = " << format_double(config.x0.x1) << '\n'
      << "x2 = " << format_double(config.x0.x2) << "\n\n";
  out << "[campaign]\n"
      << "n_scenarios = " << c.n_scenarios << '\n'
      << "seed = " << c.seed << '\n'
      << "x1_min = " << format_double(c.x1_range.first) << '\n'
      << "x1_max = " << format_double(c.x1_range.second) << '\n'
      << "x2_min = " << format_double(c.x2_range.first) << '\n'
      << "x2_max = " << format_double(c.x2_range.second) << '\n'
      << "corner_cases = " << (c.corner_cases ? "true" : "false") << '\n'
      << "time_tolerance = " << format_double(c.time_tolerance) << '\n'
      << "verify_min_abs_s = " << format_double(c.verify_min_abs_s) << '\n'
      << "dump_scenarios = " << (config.dump_scenarios ? "true" : "false") << '\n';
  return out.str();
}

Regulator parse_regulator_tokens(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw ConfigError("missing regulator kind");
  std::map<std::string, double> params;
  std::optional<double> p;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("regulator parameter '" + tok + "' is not of the form key=value");
    }
    const std::string key = tok.substr(0, eq);
    const double value = parse_number(key, tok.substr(eq + 1));
    if (key == "p") p = value;
    else params[key] = value;
  }
  if (!p) throw ConfigError("missing regulator parameter 'p'");
  return make_regulator(tokens.front(), params, *p);
}

}  // namespace ptstab
