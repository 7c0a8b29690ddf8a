#include "ptstab/plant.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "ptstab/error.hpp"

namespace ptstab {

State2 dynamics(const PlantModel& plant, double t, State2 x, double u) {
  const double acc = plant.drift(x.x1, x.x2) + plant.input_gain(x.x1, x.x2) * u + plant.disturbance(t);
  if (!std::isfinite(acc) || !std::isfinite(x.x2)) {
    throw NumericalError("non-finite plant derivative at t = " + std::to_string(t));
  }
  return {x.x2, acc};
}

PlantModel benchmark_plant() {
  PlantModel plant = benchmark_plant_undisturbed();
  plant.disturbance = [](double t) { return 0.1 * std::sin(t); };
  plant.kappa = 0.1;
  return plant;
}

PlantModel benchmark_plant_undisturbed() {
  return PlantModel{
      [](double x1, double x2) { return x1 * x1 + x1 * std::sin(x2); },
      [](double x1, double x2) { return (x1 + x2) * (x1 + x2) + 1.0; },
      [](double) { return 0.0; },
      0.0,
  };
}

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::string, std::function<PlantModel()>> factories{
      {"benchmark", benchmark_plant},
      {"benchmark_undisturbed", benchmark_plant_undisturbed},
  };
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

PlantModel plant_by_name(const std::string& name) {
  Registry& r = registry();
  std::lock_guard lock(r.mutex);
  const auto it = r.factories.find(name);
  if (it == r.factories.end()) {
    throw ConfigError("unknown plant '" + name + "'");
  }
  return it->second();
}

void register_plant(const std::string& name, std::function<PlantModel()> factory) {
  Registry& r = registry();
  std::lock_guard lock(r.mutex);
  r.factories[name] = std::move(factory);
}

std::vector<std::string> plant_names() {
  Registry& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, factory] : r.factories) names.push_back(name);
  return names;
}

}  // namespace ptstab
