#pragma once

#include <optional>

#include "ptstab/plant.hpp"
#include "ptstab/regulator.hpp"
#include "ptstab/smc.hpp"
#include "ptstab/trajectory.hpp"

namespace ptstab {

struct SimConfig {
  double dt = 1e-5;
  double horizon = 1.5;
  /// Unset means sqrt(2 eta0).
  std::optional<double> settle_threshold_x1;
  double settle_threshold_s = 1e-3;
  int record_stride = 100;

  void validate() const;
  double x1_threshold(const SurfaceParams& params) const;
};

/// Fixed-step RK4 on the closed loop, control re-evaluated at every stage.
/// Non-finite states or controller errors end the run early with a reason;
/// this function never throws for numerical trouble.
Trajectory integrate_closed_loop(const PlantModel& plant, const SurfaceParams& params, const Regulator& reg_slide,
                                 const Regulator& reg_reach, State2 x0, const SimConfig& cfg);

enum class SettleSignal { X1, S };

/// Earliest recorded t* with |signal(t)| <= threshold for every t >= t*.
std::optional<double> settling_time(const Trajectory& traj, double threshold, SettleSignal signal);

struct MotivatingResult {
  Trajectory trajectory;  // columns x1 = x, v1 = V; the rest are zero
  double hit_time = 0.0;
};

/// Integrates x' = -(1/(2 p Tc)) e^{V^p} V^{-p} x, V = x^2/2, until V <= eps_v.
/// Throws NumericalError if a step crosses the origin (dt too coarse).
MotivatingResult integrate_motivating(double p, double tc, double x0, double eps_v, double dt,
                                      int record_stride = 100);

/// Tc (e^{-eps_v^p} - e^{-V0^p}): exact traversal time of psi = 2 - e^{-V^p}.
double motivating_exact_time(double v0, double eps_v, double p, double tc);

}  // namespace ptstab
