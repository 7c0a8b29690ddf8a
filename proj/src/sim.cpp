#include "ptstab/sim.hpp"

#include <cmath>

#include "ptstab/error.hpp"

namespace ptstab {

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sim.dt must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("sim.horizon must be positive");
  if (dt > horizon) throw ConfigError("sim.dt must not exceed sim.horizon");
  if (settle_threshold_x1 && !(*settle_threshold_x1 > 0.0)) {
    throw ConfigError("sim.settle_threshold_x1 must be positive");
  }
  if (!(settle_threshold_s > 0.0)) throw ConfigError("sim.settle_threshold_s must be positive");
  if (record_stride < 1) throw ConfigError("sim.record_stride must be at least 1");
}

double SimConfig::x1_threshold(const SurfaceParams& params) const {
  return settle_threshold_x1.value_or(std::sqrt(2.0 * params.eta0));
}

namespace {

struct Derivative {
  State2 dx;
  ControlOutput ctrl;
};

Derivative closed_loop(const PlantModel& plant, const SurfaceParams& params, const Regulator& reg_slide,
                       const Regulator& reg_reach, double t, State2 x) {
  Derivative d;
  d.ctrl = control(params, reg_slide, reg_reach, plant, t, x);
  d.dx = dynamics(plant, t, x, d.ctrl.u);
  return d;
}

State2 axpy(State2 x, double h, State2 k) { return {x.x1 + h * k.x1, x.x2 + h * k.x2}; }

Sample make_sample(double t, State2 x, const ControlOutput& c) {
  return {t, x.x1, x.x2, c.diag.s, c.u, c.diag.v1, c.diag.v2};
}

// A step whose stages straddle the Phi branch switch is redone with this many
// substeps; the kink in d(V1^q Phi)/dx1 otherwise costs O(h) accuracy in s.
constexpr int kBranchSubsteps = 1000;

struct Stepper {
  const PlantModel& plant;
  const SurfaceParams& params;
  const Regulator& reg_slide;
  const Regulator& reg_reach;

  Derivative eval(double t, State2 x) const { return closed_loop(plant, params, reg_slide, reg_reach, t, x); }

  // One RK4 step from a precomputed first stage. Sets `crossed` when any
  // stage lies on a different surface branch than the start point.
  State2 rk4(double t, State2 x, const Derivative& k1, double h, bool& crossed) const {
    const Derivative k2 = eval(t + 0.5 * h, axpy(x, 0.5 * h, k1.dx));
    const Derivative k3 = eval(t + 0.5 * h, axpy(x, 0.5 * h, k2.dx));
    const Derivative k4 = eval(t + h, axpy(x, h, k3.dx));
    const Branch b = k1.ctrl.diag.branch;
    crossed = k2.ctrl.diag.branch != b || k3.ctrl.diag.branch != b || k4.ctrl.diag.branch != b;
    return {x.x1 + h / 6.0 * (k1.dx.x1 + 2.0 * k2.dx.x1 + 2.0 * k3.dx.x1 + k4.dx.x1),
            x.x2 + h / 6.0 * (k1.dx.x2 + 2.0 * k2.dx.x2 + 2.0 * k3.dx.x2 + k4.dx.x2)};
  }

  State2 step(double t, State2 x, const Derivative& k1, double h) const {
    bool crossed = false;
    const State2 next = rk4(t, x, k1, h, crossed);
    const bool end_switched = 0.5 * next.x1 * next.x1 >= params.eta0 ? k1.ctrl.diag.branch != Branch::Outer
                                                                     : k1.ctrl.diag.branch != Branch::Inner;
    if (!crossed && !end_switched) return next;
    const double hs = h / kBranchSubsteps;
    State2 y = x;
    for (int j = 0; j < kBranchSubsteps; ++j) {
      const double tj = t + j * hs;
      const Derivative kj = j == 0 ? k1 : eval(tj, y);
      bool ignored = false;
      y = rk4(tj, y, kj, hs, ignored);
    }
    return y;
  }
};

}  // namespace

Trajectory integrate_closed_loop(const PlantModel& plant, const SurfaceParams& params, const Regulator& reg_slide,
                                 const Regulator& reg_reach, State2 x0, const SimConfig& cfg) {
  params.validate();
  cfg.validate();
  const double h = cfg.dt;
  const long long steps = std::llround(cfg.horizon / h);

  Trajectory traj;
  traj.dt = h * cfg.record_stride;
  traj.rows.reserve(static_cast<std::size_t>(steps / cfg.record_stride + 2));

  if (!std::isfinite(x0.x1) || !std::isfinite(x0.x2)) {
    traj.terminated_early = true;
    traj.reason = "non-finite initial state";
    return traj;
  }

  const Stepper stepper{plant, params, reg_slide, reg_reach};
  State2 x = x0;
  try {
    for (long long k = 0;; ++k) {
      const double t = static_cast<double>(k) * h;
      const Derivative k1 = stepper.eval(t, x);
      if (k % cfg.record_stride == 0) {
        traj.rows.push_back(make_sample(t, x, k1.ctrl));
      }
      if (k == steps) break;
      x = stepper.step(t, x, k1, h);
      if (!std::isfinite(x.x1) || !std::isfinite(x.x2)) {
        throw NumericalError("non-finite state at t = " + format_double(t + h));
      }
    }
  } catch (const Error& e) {
    traj.terminated_early = true;
    traj.reason = e.what();
  }
  return traj;
}

std::optional<double> settling_time(const Trajectory& traj, double threshold, SettleSignal signal) {
  if (traj.rows.empty() || traj.terminated_early) return std::nullopt;
  auto value = [signal](const Sample& r) { return std::abs(signal == SettleSignal::X1 ? r.x1 : r.s); };
  const auto& rows = traj.rows;
  for (std::size_t i = rows.size(); i-- > 0;) {
    if (!(value(rows[i]) <= threshold)) {
      if (i + 1 == rows.size()) return std::nullopt;
      return rows[i + 1].t;
    }
  }
  return rows.front().t;
}

namespace {

double motivating_rhs(double x, double p, double tc) {
  if (x == 0.0) return 0.0;
  const double v = 0.5 * x * x;
  const double vp = std::pow(v, p);
  if (vp > 700.0) throw OverflowError("e^{V^p} overflows for V = " + format_double(v));
  return -std::exp(vp) / (2.0 * p * tc * vp) * x;
}

}  // namespace

MotivatingResult integrate_motivating(double p, double tc, double x0, double eps_v, double dt, int record_stride) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
  if (!(tc > 0.0)) throw DomainError("Tc must be positive");
  if (x0 == 0.0 || !std::isfinite(x0)) throw DomainError("x0 must be finite and nonzero");
  if (!(eps_v > 0.0)) throw DomainError("eps_v must be positive");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (record_stride < 1) throw DomainError("record_stride must be at least 1");

  MotivatingResult result;
  result.trajectory.dt = dt * record_stride;
  auto record = [&result](double t, double x) {
    Sample s;
    s.t = t;
    s.x1 = x;
    s.v1 = 0.5 * x * x;
    result.trajectory.rows.push_back(s);
  };

  double x = x0;
  double v = 0.5 * x * x;
  record(0.0, x);
  if (v <= eps_v) return result;

  const long long max_steps = std::llround(10.0 * tc / dt);
  for (long long k = 0; k < max_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double k1 = motivating_rhs(x, p, tc);
    const double k2 = motivating_rhs(x + 0.5 * dt * k1, p, tc);
    const double k3 = motivating_rhs(x + 0.5 * dt * k2, p, tc);
    const double k4 = motivating_rhs(x + dt * k3, p, tc);
    const double next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(next * x > 0.0)) {
      throw NumericalError("step crossed the origin at t = " + format_double(t) + "; dt is too coarse");
    }
    const double v_next = 0.5 * next * next;
    if ((k + 1) % record_stride == 0) record(t + dt, next);
    if (v_next <= eps_v) {
      // linear interpolation of V inside the final step
      result.hit_time = t + dt * (v - eps_v) / (v - v_next);
      return result;
    }
    x = next;
    v = v_next;
  }
  throw NumericalError("motivating system did not reach eps_v within 10 Tc");
}

double motivating_exact_time(double v0, double eps_v, double p, double tc) {
  return tc * (std::exp(-std::pow(eps_v, p)) - std::exp(-std::pow(v0, p)));
}

}  // namespace ptstab
