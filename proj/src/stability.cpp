#include "ptstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptstab/error.hpp"

namespace ptstab {

std::string to_string(TheoremCase c) {
  switch (c) {
    case TheoremCase::PredefinedIncreasing:
      return "PredefinedIncreasing";
    case TheoremCase::PredefinedDecreasing:
      return "PredefinedDecreasing";
    case TheoremCase::FiniteIncreasing:
      return "FiniteIncreasing";
    case TheoremCase::FiniteDecreasing:
      return "FiniteDecreasing";
  }
  return "unknown";
}

TheoremCase classify(Direction direction, bool bounded) {
  if (direction == Direction::Increasing) {
    return bounded ? TheoremCase::PredefinedIncreasing : TheoremCase::FiniteIncreasing;
  }
  return bounded ? TheoremCase::PredefinedDecreasing : TheoremCase::FiniteDecreasing;
}

TheoremCase classify(const Regulator& reg) { return classify(reg.direction(), reg.bounded()); }

namespace {

// A failed check must contribute a strictly positive violation, even when
// it fails by equality on a strict bound.
double failed_margin(double margin) { return std::max(margin, std::numeric_limits<double>::denorm_min()); }

template <class E>
[[noreturn]] void rethrow_at(const E& e, double v) {
  throw E(std::string(e.what()) + " (at grid point v = " + format_double(v) + ")");
}

}  // namespace

ConditionReport check_conditions(const Regulator& reg, std::span<const double> v_grid) {
  if (v_grid.empty()) {
    throw DomainError("condition grid is empty");
  }
  ConditionReport report;
  report.theorem_case = classify(reg);
  report.cond_i_ok = true;
  report.cond_ii_ok = true;
  report.worst_violation = -std::numeric_limits<double>::infinity();

  const bool increasing = reg.direction() == Direction::Increasing;
  auto record = [&report](bool ok, double margin, bool& flag) {
    if (!ok) {
      flag = false;
      margin = failed_margin(margin);
    }
    report.worst_violation = std::max(report.worst_violation, margin);
  };

  // psi(0) must equal the terminal value exactly.
  {
    const double psi0 = eval(reg, 0.0);
    const double diff = std::abs(psi0 - reg.terminal());
    record(diff == 0.0, diff, report.cond_i_ok);
  }

  for (const double v : v_grid) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("condition grid points must be finite and positive, got " + format_double(v));
    }
    ConditionSample sample{v, 0.0, 0.0};
    try {
      sample.psi = eval(reg, v);
      sample.dpsi = grad_vp(reg, v);
    } catch (const OverflowError& e) {
      rethrow_at(e, v);
    } catch (const DomainError& e) {
      rethrow_at(e, v);
    }
    report.samples.push_back(sample);

    const double psi = sample.psi;
    if (increasing) {
      record(psi >= reg.lower(), reg.lower() - psi, report.cond_i_ok);
      if (reg.bounded()) record(psi < reg.upper(), psi - reg.upper(), report.cond_i_ok);
      record(sample.dpsi > 0.0, -sample.dpsi, report.cond_ii_ok);
    } else {
      record(psi <= reg.upper(), psi - reg.upper(), report.cond_i_ok);
      if (reg.bounded()) record(psi > reg.lower(), reg.lower() - psi, report.cond_i_ok);
      record(sample.dpsi < 0.0, sample.dpsi, report.cond_ii_ok);
    }
  }
  return report;
}

double required_decay(const Regulator& reg, double v, double tc) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError("required_decay needs a finite positive V, got " + format_double(v));
  }
  if (!(tc > 0.0)) {
    throw DomainError("Tc must be positive");
  }
  const double p = reg.p();
  return -reg.span() * gain(reg, v) * std::pow(v, 1.0 - p) / (p * tc);
}

BoundReport settling_bound(const Regulator& reg, double v0, double tc) {
  if (!(tc > 0.0)) {
    throw DomainError("Tc must be positive");
  }
  BoundReport report;
  report.theorem_case = classify(reg);
  report.psi0 = eval(reg, v0);
  report.psiT = reg.terminal();
  report.tc = tc;
  const double travel =
      reg.direction() == Direction::Increasing ? report.psi0 - report.psiT : report.psiT - report.psi0;
  report.bound = std::max(0.0, travel) * tc / reg.span();
  return report;
}

std::vector<DecayViolation> verify_trajectory(const Trajectory& traj, const Regulator& reg, double tc,
                                              LyapunovSignal which, const VerifyOptions& options) {
  const auto& rows = traj.rows;
  if (rows.size() < 3) {
    throw DomainError("verify_trajectory needs at least 3 samples, got " + std::to_string(rows.size()));
  }
  if (!(traj.dt > 0.0)) {
    throw DomainError("trajectory sample spacing must be positive");
  }
  const bool use_s = which == LyapunovSignal::V2OfS;
  auto value = [use_s](const Sample& r) { return use_s ? r.v2 : r.v1; };
  auto signal = [use_s](const Sample& r) { return std::abs(use_s ? r.s : r.x1); };

  std::vector<DecayViolation> out;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double v = value(rows[i]);
    if (v <= 0.0 || signal(rows[i]) <= options.min_abs_signal) continue;
    const double dv_dt = (value(rows[i + 1]) - value(rows[i - 1])) / (2.0 * traj.dt);
    const double required = required_decay(reg, v, tc);
    const double slack = std::max(options.rel_slack * std::abs(required), options.abs_slack);
    if (dv_dt > required + slack) {
      out.push_back({i, rows[i].t, v, dv_dt, required});
    }
  }
  return out;
}

}  // namespace ptstab
