#include "ptstab/smc.hpp"

#include <cmath>

#include "ptstab/error.hpp"

namespace ptstab {

void SurfaceParams::validate() const {
  if (!(p1 > 0.0 && p1 < 0.5)) throw ConfigError("surface.p1 must lie in (0, 0.5)");
  if (!(q > 1.0) || !std::isfinite(q)) throw ConfigError("surface.q must exceed 1");
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw ConfigError("surface.eta0 must be positive");
  if (!(t1 > 0.0) || !std::isfinite(t1)) throw ConfigError("surface.t1 must be positive");
  if (!(t2 > 0.0) || !std::isfinite(t2)) throw ConfigError("surface.t2 must be positive");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("surface.kappa must be nonnegative");
  if (!(sign_epsilon >= 0.0) || !std::isfinite(sign_epsilon)) {
    throw ConfigError("surface.sign_epsilon must be nonnegative");
  }
}

double SurfaceParams::k1() const { return continuity_constants(eta0, p1, q).first; }
double SurfaceParams::k2() const { return continuity_constants(eta0, p1, q).second; }

std::pair<double, double> continuity_constants(double eta0, double p1, double q) {
  if (!(eta0 > 0.0)) throw DomainError("eta0 must be positive");
  const double k1 = 2.0 * std::pow(eta0, -1.0 - p1 - q);
  const double k2 = -std::pow(eta0, -2.0 - p1 - q);
  if (!std::isfinite(k1) || !std::isfinite(k2)) {
    throw OverflowError("continuity constants overflow for eta0 = " + std::to_string(eta0));
  }
  return {k1, k2};
}

namespace {

void require_matching_exponent(const SurfaceParams& params, const Regulator& reg) {
  if (reg.p() != params.p1) {
    throw ConfigError("regulator exponent p = " + std::to_string(reg.p()) + " must equal surface p1 = " +
                      std::to_string(params.p1));
  }
}

// V^p for V = x^2/2, computed as 2^-p |x|^(2p) so tiny |x| never underflows.
double half_square_pow(double x, double p) { return std::pow(std::abs(x), 2.0 * p) * std::pow(2.0, -p); }

struct GainTerms {
  double v = 0.0;   // V1
  double u = 0.0;   // V1^p
  double h = 0.0;   // H1
  double hd = 0.0;  // dH1/du
};

GainTerms gain_terms(const Regulator& reg, double x1, double p) {
  GainTerms g;
  g.v = 0.5 * x1 * x1;
  g.u = half_square_pow(x1, p);
  g.h = gain_u(reg, g.u);
  g.hd = gain_du(reg, g.u);
  return g;
}

void check_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw OverflowError(std::string(what) + " is not finite");
}

}  // namespace

double phi_branch(const SurfaceParams& params, const Regulator& reg, double x1, Branch branch) {
  require_matching_exponent(params, reg);
  const double p = params.p1;
  const double q = params.q;
  const double v = 0.5 * x1 * x1;
  const double h = gain_u(reg, half_square_pow(x1, p));
  double out = 0.0;
  if (branch == Branch::Outer) {
    if (v == 0.0) throw DomainError("outer branch of Phi is singular at x1 = 0");
    out = h * x1 * std::pow(v, -p - q);
  } else {
    const auto [k1, k2] = continuity_constants(params.eta0, p, q);
    out = h * x1 * (k1 * v + k2 * v * v);
  }
  check_finite(out, "Phi");
  return out;
}

double phi(const SurfaceParams& params, const Regulator& reg, double x1) {
  const double v = 0.5 * x1 * x1;
  return phi_branch(params, reg, x1, v >= params.eta0 ? Branch::Outer : Branch::Inner);
}

double phi_dot(const SurfaceParams& params, const Regulator& reg, double x1, double x2) {
  require_matching_exponent(params, reg);
  const double p = params.p1;
  const double q = params.q;
  const GainTerms g = gain_terms(reg, x1, p);
  // With H' V = p u dH/du and x1^2 = 2V, dPhi/dx1 needs no negative power of V
  // beyond the one already present in Phi itself.
  double dphi_dx1 = 0.0;
  if (g.v >= params.eta0) {
    dphi_dx1 = std::pow(g.v, -p - q) * (g.h * (1.0 - 2.0 * (p + q)) + 2.0 * p * g.u * g.hd);
  } else {
    const auto [k1, k2] = continuity_constants(params.eta0, p, q);
    const double m = k1 * g.v + k2 * g.v * g.v;
    const double dm = k1 + 2.0 * k2 * g.v;
    dphi_dx1 = g.h * m + 2.0 * p * g.u * g.hd * m + 2.0 * g.v * g.h * dm;
  }
  const double out = dphi_dx1 * x2;
  check_finite(out, "dPhi/dt");
  return out;
}

ShapingTerm shaping_term(const SurfaceParams& params, const Regulator& reg, double x1) {
  require_matching_exponent(params, reg);
  const double p = params.p1;
  const double q = params.q;
  const GainTerms g = gain_terms(reg, x1, p);
  ShapingTerm term;
  if (g.v >= params.eta0) {
    // V^q Phi = H x1 V^-p = H x1 / u
    term.value = g.h * x1 / g.u;
    term.d_dx1 = (g.h * (1.0 - 2.0 * p) + 2.0 * p * g.u * g.hd) / g.u;
  } else {
    const auto [k1, k2] = continuity_constants(params.eta0, p, q);
    const double vq = std::pow(g.v, q);
    const double n = (k1 * g.v + k2 * g.v * g.v) * vq;
    const double dn = (k1 * (q + 1.0) + k2 * (q + 2.0) * g.v) * vq;
    term.value = g.h * x1 * n;
    term.d_dx1 = g.h * n + 2.0 * p * g.u * g.hd * n + 2.0 * g.h * dn * g.v;
  }
  check_finite(term.value, "V1^q Phi");
  check_finite(term.d_dx1, "d(V1^q Phi)/dx1");
  return term;
}

SlidingDiagnostics surface(const SurfaceParams& params, const Regulator& reg, State2 x) {
  const ShapingTerm term = shaping_term(params, reg, x.x1);
  SlidingDiagnostics d;
  d.v1 = 0.5 * x.x1 * x.x1;
  d.branch = d.v1 >= params.eta0 ? Branch::Outer : Branch::Inner;
  d.h1 = gain_u(reg, half_square_pow(x.x1, params.p1));
  d.phi = phi(params, reg, x.x1);
  d.s = x.x2 + reg.span() / (2.0 * params.p1 * params.t1) * term.value;
  d.v2 = 0.5 * d.s * d.s;
  check_finite(d.s, "s");
  d.hs = gain_u(reg, half_square_pow(d.s, params.p1));
  return d;
}

double reaching_core(double s, double p1) {
  if (s == 0.0) return 0.0;
  return s / half_square_pow(s, p1);
}

double smooth_sign(double s, double epsilon) {
  if (epsilon > 0.0) return s / (std::abs(s) + epsilon);
  return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
}

ControlOutput control(const SurfaceParams& params, const Regulator& reg_slide, const Regulator& reg_reach,
                      const PlantModel& plant, double t, State2 x) {
  require_matching_exponent(params, reg_reach);
  const double p = params.p1;
  const ShapingTerm term = shaping_term(params, reg_slide, x.x1);
  const double slide_scale = reg_slide.span() / (2.0 * p * params.t1);

  ControlOutput out;
  SlidingDiagnostics& d = out.diag;
  d.v1 = 0.5 * x.x1 * x.x1;
  d.branch = d.v1 >= params.eta0 ? Branch::Outer : Branch::Inner;
  const double u1 = half_square_pow(x.x1, p);
  d.h1 = gain_u(reg_slide, u1);
  d.phi = phi(params, reg_slide, x.x1);
  d.s = x.x2 + slide_scale * term.value;
  d.v2 = 0.5 * d.s * d.s;
  const double u2 = half_square_pow(d.s, p);
  d.hs = gain_u(reg_reach, u2);

  const double g = plant.input_gain(x.x1, x.x2);
  if (!(std::abs(g) >= 1e-12)) {
    throw NumericalError("input gain g = " + std::to_string(g) + " cannot be inverted");
  }
  const double f = plant.drift(x.x1, x.x2);
  // d/dt (V1^q Phi) = d(V1^q Phi)/dx1 * x2
  const double equivalent = -slide_scale * term.d_dx1 * x.x2;
  const double reach = -reg_reach.span() * d.hs * (d.s == 0.0 ? 0.0 : d.s / u2) / (2.0 * params.t2 * p);
  const double robust = -params.kappa * smooth_sign(d.s, params.sign_epsilon);
  out.u = (equivalent + reach + robust - f) / g;
  if (!std::isfinite(out.u)) {
    throw OverflowError("control input is not finite at t = " + std::to_string(t));
  }
  return out;
}

}  // namespace ptstab
