#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ptstab {

struct State2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Second-order plant  x1' = x2,  x2' = f(x1,x2) + g(x1,x2) u + w(t),
/// with |w| <= kappa.
struct PlantModel {
  std::function<double(double, double)> drift;
  std::function<double(double, double)> input_gain;
  std::function<double(double)> disturbance;
  double kappa = 0.0;
};

/// Returns (x2, f + g u + w). Throws NumericalError on a non-finite result.
State2 dynamics(const PlantModel& plant, double t, State2 x, double u);

/// f = x1^2 + x1 sin(x2), g = (x1+x2)^2 + 1, w = 0.1 sin(t), kappa = 0.1.
PlantModel benchmark_plant();

/// Benchmark drift and input gain with w = 0.
PlantModel benchmark_plant_undisturbed();

/// Named plants addressable from configuration files.
PlantModel plant_by_name(const std::string& name);
void register_plant(const std::string& name, std::function<PlantModel()> factory);
std::vector<std::string> plant_names();

}  // namespace ptstab
