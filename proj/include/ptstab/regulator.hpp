#pragma once

// Regulator functions psi(V) used to shape predefined-time and finite-time
// Lyapunov decay. Every kind is written as a function of u = V^p, and all
// derivatives are taken with respect to u.

#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace ptstab {

namespace kind {

/// psi = b - exp(-alpha u), range [b-1, b).
struct ExpComplement {
  double b = 2.0;
  double alpha = 1.0;
};

/// psi = asin(tanh u), range [0, pi/2).
struct ArcsinTanh {};

/// psi = atan(sqrt(beta/alpha) u), range [0, pi/2).
struct ArctanScaled {
  double alpha = 1.0;
  double beta = 1.0;
};

/// psi = scale u / (u + k), range [0, scale).
struct RationalSaturating {
  double scale = 1.0;
  double k = 1.0;
};

/// psi = m tanh(n u), range [0, m).
struct TanhScaled {
  double m = 1.0;
  double n = 1.0;
};

/// psi = shift + exp(-alpha u), range (shift, shift+1], decreasing.
struct ExpOffset {
  double shift = 1.0;
  double alpha = 1.0;
};

/// psi = n / (m + exp(alpha u)), range (0, n/(m+1)], decreasing.
struct LogisticReciprocal {
  double n = 1.0;
  double m = 1.0;
  double alpha = 1.0;
};

/// psi = 1 / (u + k), range (0, 1/k], decreasing.
struct InversePower {
  double k = 1.0;
};

/// psi = b / (a + exp(-alpha u)), range [b/(a+1), b/a).
struct SigmoidRatio {
  double a = 1.0;
  double b = 3.0;
  double alpha = 1.0;
};

/// psi = u. Unbounded, so only finite-time convergence follows.
struct UnboundedPower {};

}  // namespace kind

using RegulatorKind =
    std::variant<kind::ExpComplement, kind::ArcsinTanh, kind::ArctanScaled, kind::RationalSaturating,
                 kind::TanhScaled, kind::ExpOffset, kind::LogisticReciprocal, kind::InversePower,
                 kind::SigmoidRatio, kind::UnboundedPower>;

enum class Direction { Increasing, Decreasing };

/// Immutable regulator: a kind, an exponent p in (0,1), and the bound
/// metadata derived from them at construction.
class Regulator {
 public:
  /// Throws ConfigError on p outside (0,1) or non-positive shape parameters.
  Regulator(RegulatorKind kind, double p);

  const RegulatorKind& kind() const { return kind_; }
  double p() const { return p_; }
  Direction direction() const { return direction_; }
  double lower() const { return lower_; }
  /// +infinity when unbounded.
  double upper() const { return upper_; }
  bool bounded() const { return bounded_; }
  /// upper - lower for bounded kinds, 1 for unbounded ones.
  double span() const { return bounded_ ? upper_ - lower_ : 1.0; }
  /// psi(0): lower for increasing kinds, upper for decreasing ones.
  double terminal() const { return direction_ == Direction::Increasing ? lower_ : upper_; }
  /// Stable string name, e.g. "sigmoid_ratio".
  std::string name() const;

  // Functions of u = V^p.
  double psi_u(double u) const;
  double dpsi_u(double u) const;
  double d2psi_u(double u) const;

  /// Test hook: overrides the declared bounds without re-deriving them.
  Regulator with_declared_bounds(double lower, double upper) const;

 private:
  RegulatorKind kind_;
  double p_;
  Direction direction_;
  double lower_;
  double upper_;
  bool bounded_;
};

/// psi(v). Throws DomainError on negative or non-finite v.
double eval(const Regulator& reg, double v);

/// dpsi/d(V^p) at v.
double grad_vp(const Regulator& reg, double v);

/// d2psi/d(V^p)^2 at v.
double grad2_vp(const Regulator& reg, double v);

/// 1/|dpsi/d(V^p)| at v. Throws SingularGainError when the derivative vanishes.
double gain(const Regulator& reg, double v);

/// Gain and its derivative as functions of u = V^p.
double gain_u(const Regulator& reg, double u);
double gain_du(const Regulator& reg, double u);

/// Builds a regulator from a stable kind name and key=value parameters.
/// Unspecified parameters take the defaults in the kind structs; unknown
/// keys and unknown names raise ConfigError.
Regulator make_regulator(std::string_view name, const std::map<std::string, double>& params, double p);

/// Parameters of the regulator's kind, keyed by their config names.
std::map<std::string, double> regulator_params(const Regulator& reg);

}  // namespace ptstab
