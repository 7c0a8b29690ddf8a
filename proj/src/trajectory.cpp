#include "ptstab/trajectory.hpp"

#include <cstdio>
#include <ostream>

namespace ptstab {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x1,x2,s,u,v1,v2\n";
  for (const Sample& r : traj.rows) {
    out << format_double(r.t) << ',' << format_double(r.x1) << ',' << format_double(r.x2) << ','
        << format_double(r.s) << ',' << format_double(r.u) << ',' << format_double(r.v1) << ','
        << format_double(r.v2) << '\n';
  }
}

}  // namespace ptstab
