#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptstab {

struct Sample {
  double t = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double s = 0.0;
  double u = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

/// Uniformly sampled closed-loop time series. `dt` is the spacing between
/// consecutive rows, not the integrator step.
struct Trajectory {
  double dt = 0.0;
  std::vector<Sample> rows;
  bool terminated_early = false;
  std::string reason;
};

/// CSV with header `t,x1,x2,s,u,v1,v2`, 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);

/// Formats a double with 17 significant digits (round-trip safe).
std::string format_double(double value);

}  // namespace ptstab
