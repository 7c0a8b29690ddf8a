#pragma once

#include <span>
#include <string>
#include <vector>

#include "ptstab/regulator.hpp"
#include "ptstab/trajectory.hpp"

namespace ptstab {

enum class TheoremCase { PredefinedIncreasing, PredefinedDecreasing, FiniteIncreasing, FiniteDecreasing };

std::string to_string(TheoremCase c);

struct ConditionSample {
  double v = 0.0;
  double psi = 0.0;
  double dpsi = 0.0;
};

struct ConditionReport {
  TheoremCase theorem_case = TheoremCase::PredefinedIncreasing;
  bool cond_i_ok = false;
  bool cond_ii_ok = false;
  std::vector<ConditionSample> samples;
  /// Largest amount by which any sample breaks (i) or (ii); <= 0 when both hold.
  double worst_violation = 0.0;
};

struct BoundReport {
  TheoremCase theorem_case = TheoremCase::PredefinedIncreasing;
  double psi0 = 0.0;
  double psiT = 0.0;
  double tc = 0.0;
  double bound = 0.0;
};

enum class LyapunovSignal { V1OfX1, V2OfS };

struct DecayViolation {
  std::size_t index = 0;
  double t = 0.0;
  double v = 0.0;
  double dv_dt = 0.0;
  double required = 0.0;
};

struct VerifyOptions {
  double rel_slack = 1e-3;
  double abs_slack = 1e-6;
  /// Samples whose monitored signal (|x1| or |s|) is at or below this are skipped.
  double min_abs_signal = 0.0;
};

TheoremCase classify(Direction direction, bool bounded);
TheoremCase classify(const Regulator& reg);

/// Checks bound membership (i) and derivative sign (ii) at every grid point,
/// plus psi(0) against the declared terminal value.
ConditionReport check_conditions(const Regulator& reg, std::span<const double> v_grid);

/// Right-hand side of condition (iii):  -span * gain(v) * v^(1-p) / (p Tc).
double required_decay(const Regulator& reg, double v, double tc);

BoundReport settling_bound(const Regulator& reg, double v0, double tc);

/// Central-difference estimate of dV/dt along the trajectory compared with
/// required_decay. Throws DomainError with fewer than 3 rows.
std::vector<DecayViolation> verify_trajectory(const Trajectory& traj, const Regulator& reg, double tc,
                                              LyapunovSignal which, const VerifyOptions& options = {});

}  // namespace ptstab
