#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ptstab/error.hpp"
#include "ptstab/plant.hpp"

using namespace ptstab;

TEST_SUITE("plant") {

TEST_CASE("dynamics examples") {
  const PlantModel p = benchmark_plant();
  State2 d = dynamics(p, 0.0, {0, 0}, 0.0);
  CHECK(d.x1 == 0.0);
  CHECK(d.x2 == 0.0);
  d = dynamics(p, std::numbers::pi / 2, {0, 0}, 0.0);
  CHECK(d.x1 == 0.0);
  CHECK(d.x2 == doctest::Approx(0.1).epsilon(1e-15));
  d = dynamics(p, 0.0, {1, 0}, 1.0);
  CHECK(d.x1 == 0.0);
  CHECK(d.x2 == 3.0);
}

TEST_CASE("benchmark plant examples") {
  const PlantModel p = benchmark_plant();
  CHECK(p.kappa == 0.1);
  CHECK(p.input_gain(0, 0) == 1.0);
  CHECK(p.drift(2, 0) == 4.0);
  const PlantModel q = benchmark_plant_undisturbed();
  CHECK(q.kappa == 0.0);
  CHECK(q.disturbance(1.3) == 0.0);
}

TEST_CASE("property: input gain at least one and disturbance within kappa") {
  const PlantModel p = benchmark_plant();
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> box(-1e3, 1e3);
  std::uniform_real_distribution<double> time(0.0, 100.0);
  for (int i = 0; i < 10000; ++i) {
    REQUIRE(p.input_gain(box(gen), box(gen)) >= 1.0);
    REQUIRE(std::abs(p.disturbance(time(gen))) <= p.kappa);
  }
}

TEST_CASE("dynamics is deterministic and rejects overflow") {
  const PlantModel p = benchmark_plant();
  const State2 a = dynamics(p, 0.3, {12.5, -3.25}, 7.0);
  const State2 b = dynamics(p, 0.3, {12.5, -3.25}, 7.0);
  CHECK(a.x1 == b.x1);
  CHECK(a.x2 == b.x2);
  CHECK_THROWS_AS(dynamics(p, 0.0, {1e200, 0.0}, 1e200), NumericalError);
}

TEST_CASE("plant registry") {
  CHECK(plant_by_name("benchmark").kappa == 0.1);
  CHECK(plant_by_name("benchmark_undisturbed").kappa == 0.0);
  CHECK_THROWS_AS(plant_by_name("missing"), ConfigError);
  register_plant("linear_test", [] {
    PlantModel m;
    m.drift = [](double x1, double) { return -x1; };
    m.input_gain = [](double, double) { return 2.0; };
    m.disturbance = [](double) { return 0.0; };
    return m;
  });
  CHECK(plant_by_name("linear_test").input_gain(5, 5) == 2.0);
  const auto names = plant_names();
  CHECK(std::find(names.begin(), names.end(), "linear_test") != names.end());
}

}
