#pragma once

// Nonsingular predefined-time sliding surface and control law for the
// second-order plant:
//
//   s   = x2 + span * V1^q * Phi / (2 p1 T1)
//   Phi = H1 x1 V1^(-p1-q)            if V1 >= eta0
//         H1 x1 (k1 V1 + k2 V1^2)     otherwise
//
// with V1 = x1^2/2, H1 = 1/|dpsi/d(V1^p1)| and k1, k2 chosen so both
// branches agree at V1 = eta0.

#include <utility>

#include "ptstab/plant.hpp"
#include "ptstab/regulator.hpp"

namespace ptstab {

struct SurfaceParams {
  double p1 = 0.051;
  double q = 2.0;
  double eta0 = 1e-4;
  double t1 = 0.5;
  double t2 = 0.5;
  double kappa = 0.1;
  /// Boundary-layer width for sgn(s); 0 keeps the discontinuous law.
  double sign_epsilon = 0.0;

  /// Throws ConfigError when any invariant fails.
  void validate() const;
  double k1() const;
  double k2() const;
};

enum class Branch { Outer, Inner };

struct SlidingDiagnostics {
  double s = 0.0;
  double phi = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double h1 = 0.0;
  double hs = 0.0;
  Branch branch = Branch::Inner;
};

struct ControlOutput {
  double u = 0.0;
  SlidingDiagnostics diag;
};

/// (k1, k2) = (2 eta0^(-1-p1-q), -eta0^(-2-p1-q)).
std::pair<double, double> continuity_constants(double eta0, double p1, double q);

double phi(const SurfaceParams& params, const Regulator& reg, double x1);

/// Phi evaluated with a forced branch, regardless of where V1 sits.
double phi_branch(const SurfaceParams& params, const Regulator& reg, double x1, Branch branch);

/// dPhi/dt = (dPhi/dx1) x2.
double phi_dot(const SurfaceParams& params, const Regulator& reg, double x1, double x2);

/// The product V1^q Phi and its x1-derivative, evaluated in the reduced
/// form that keeps intermediates bounded at large V1.
struct ShapingTerm {
  double value = 0.0;
  double d_dx1 = 0.0;
};
ShapingTerm shaping_term(const SurfaceParams& params, const Regulator& reg, double x1);

SlidingDiagnostics surface(const SurfaceParams& params, const Regulator& reg, State2 x);

/// s V2^(-p1), rewritten as 2^p1 sgn(s) |s|^(1-2 p1) so it is finite at s = 0.
double reaching_core(double s, double p1);

double smooth_sign(double s, double epsilon);

ControlOutput control(const SurfaceParams& params, const Regulator& reg_slide, const Regulator& reg_reach,
                      const PlantModel& plant, double t, State2 x);

}  // namespace ptstab
