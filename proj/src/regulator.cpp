#include "ptstab/regulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ptstab/error.hpp"

namespace ptstab {
namespace {

constexpr double kMaxExpArg = 700.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string("regulator parameter '") + what + "' must be positive and finite");
  }
}

// Guards every exponential of the form exp(+-alpha u).
double exp_arg(double alpha, double u) {
  const double arg = alpha * u;
  if (arg > kMaxExpArg) {
    throw OverflowError("exponent argument " + std::to_string(arg) + " exceeds " + std::to_string(kMaxExpArg));
  }
  return arg;
}

double sech(double x) { return 1.0 / std::cosh(x); }

void check_u(double u) {
  if (!(u >= 0.0) || !std::isfinite(u)) {
    throw DomainError("V^p must be finite and nonnegative, got " + std::to_string(u));
  }
}

double to_u(const Regulator& reg, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError("V must be finite and nonnegative, got " + std::to_string(v));
  }
  return std::pow(v, reg.p());
}

struct Meta {
  Direction direction;
  double lower;
  double upper;
  bool bounded;
};

Meta derive_meta(const RegulatorKind& k) {
  using D = Direction;
  return std::visit(
      Overloaded{
          [](const kind::ExpComplement& c) {
            require_positive(c.alpha, "alpha");
            if (!std::isfinite(c.b)) throw ConfigError("regulator parameter 'b' must be finite");
            return Meta{D::Increasing, c.b - 1.0, c.b, true};
          },
          [](const kind::ArcsinTanh&) { return Meta{D::Increasing, 0.0, std::numbers::pi / 2, true}; },
          [](const kind::ArctanScaled& c) {
            require_positive(c.alpha, "alpha");
            require_positive(c.beta, "beta");
            return Meta{D::Increasing, 0.0, std::numbers::pi / 2, true};
          },
          [](const kind::RationalSaturating& c) {
            require_positive(c.scale, "scale");
            require_positive(c.k, "k");
            return Meta{D::Increasing, 0.0, c.scale, true};
          },
          [](const kind::TanhScaled& c) {
            require_positive(c.m, "m");
            require_positive(c.n, "n");
            return Meta{D::Increasing, 0.0, c.m, true};
          },
          [](const kind::ExpOffset& c) {
            require_positive(c.shift, "shift");
            require_positive(c.alpha, "alpha");
            return Meta{D::Decreasing, c.shift, c.shift + 1.0, true};
          },
          [](const kind::LogisticReciprocal& c) {
            require_positive(c.n, "n");
            require_positive(c.m, "m");
            require_positive(c.alpha, "alpha");
            return Meta{D::Decreasing, 0.0, c.n / (c.m + 1.0), true};
          },
          [](const kind::InversePower& c) {
            require_positive(c.k, "k");
            return Meta{D::Decreasing, 0.0, 1.0 / c.k, true};
          },
          [](const kind::SigmoidRatio& c) {
            require_positive(c.a, "a");
            require_positive(c.b, "b");
            require_positive(c.alpha, "alpha");
            return Meta{D::Increasing, c.b / (c.a + 1.0), c.b / c.a, true};
          },
          [](const kind::UnboundedPower&) { return Meta{D::Increasing, 0.0, kInf, false}; },
      },
      k);
}

}  // namespace

Regulator::Regulator(RegulatorKind kind, double p) : kind_(std::move(kind)), p_(p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("regulator exponent p must lie in (0, 1), got " + std::to_string(p));
  }
  const Meta meta = derive_meta(kind_);
  direction_ = meta.direction;
  lower_ = meta.lower;
  upper_ = meta.upper;
  bounded_ = meta.bounded;
}

Regulator Regulator::with_declared_bounds(double lower, double upper) const {
  Regulator copy = *this;
  copy.lower_ = lower;
  copy.upper_ = upper;
  return copy;
}

std::string Regulator::name() const {
  return std::visit(Overloaded{
                        [](const kind::ExpComplement&) { return "exp_complement"; },
                        [](const kind::ArcsinTanh&) { return "arcsin_tanh"; },
                        [](const kind::ArctanScaled&) { return "arctan_scaled"; },
                        [](const kind::RationalSaturating&) { return "rational_saturating"; },
                        [](const kind::TanhScaled&) { return "tanh_scaled"; },
                        [](const kind::ExpOffset&) { return "exp_offset"; },
                        [](const kind::LogisticReciprocal&) { return "logistic_reciprocal"; },
                        [](const kind::InversePower&) { return "inverse_power"; },
                        [](const kind::SigmoidRatio&) { return "sigmoid_ratio"; },
                        [](const kind::UnboundedPower&) { return "power"; },
                    },
                    kind_);
}

double Regulator::psi_u(double u) const {
  check_u(u);
  return std::visit(
      Overloaded{
          [u](const kind::ExpComplement& c) { return c.b - std::exp(-exp_arg(c.alpha, u)); },
          // gd(u) = asin(tanh u) = atan(sinh u); the atan form keeps precision near pi/2.
          [u](const kind::ArcsinTanh&) { return std::atan(std::sinh(exp_arg(1.0, u))); },
          [u](const kind::ArctanScaled& c) { return std::atan(std::sqrt(c.beta / c.alpha) * u); },
          [u](const kind::RationalSaturating& c) { return c.scale * u / (u + c.k); },
          [u](const kind::TanhScaled& c) { return c.m * std::tanh(c.n * u); },
          [u](const kind::ExpOffset& c) { return c.shift + std::exp(-exp_arg(c.alpha, u)); },
          [u](const kind::LogisticReciprocal& c) { return c.n / (c.m + std::exp(exp_arg(c.alpha, u))); },
          [u](const kind::InversePower& c) { return 1.0 / (u + c.k); },
          [u](const kind::SigmoidRatio& c) { return c.b / (c.a + std::exp(-exp_arg(c.alpha, u))); },
          [u](const kind::UnboundedPower&) { return u; },
      },
      kind_);
}

double Regulator::dpsi_u(double u) const {
  check_u(u);
  return std::visit(
      Overloaded{
          [u](const kind::ExpComplement& c) { return c.alpha * std::exp(-exp_arg(c.alpha, u)); },
          [u](const kind::ArcsinTanh&) { return sech(exp_arg(1.0, u)); },
          [u](const kind::ArctanScaled& c) {
            const double r = std::sqrt(c.beta / c.alpha);
            return r / (1.0 + r * r * u * u);
          },
          [u](const kind::RationalSaturating& c) { return c.scale * c.k / ((u + c.k) * (u + c.k)); },
          [u](const kind::TanhScaled& c) {
            const double s = sech(c.n * u);
            return c.m * c.n * s * s;
          },
          [u](const kind::ExpOffset& c) { return -c.alpha * std::exp(-exp_arg(c.alpha, u)); },
          [u](const kind::LogisticReciprocal& c) {
            const double e = std::exp(exp_arg(c.alpha, u));
            return -c.n * c.alpha * e / ((c.m + e) * (c.m + e));
          },
          [u](const kind::InversePower& c) { return -1.0 / ((u + c.k) * (u + c.k)); },
          [u](const kind::SigmoidRatio& c) {
            const double d = std::exp(-exp_arg(c.alpha, u));
            return c.b * c.alpha * d / ((c.a + d) * (c.a + d));
          },
          [](const kind::UnboundedPower&) { return 1.0; },
      },
      kind_);
}

double Regulator::d2psi_u(double u) const {
  check_u(u);
  return std::visit(
      Overloaded{
          [u](const kind::ExpComplement& c) { return -c.alpha * c.alpha * std::exp(-exp_arg(c.alpha, u)); },
          [u](const kind::ArcsinTanh&) {
            const double x = exp_arg(1.0, u);
            return -sech(x) * std::tanh(x);
          },
          [u](const kind::ArctanScaled& c) {
            const double r = std::sqrt(c.beta / c.alpha);
            const double den = 1.0 + r * r * u * u;
            return -2.0 * r * r * r * u / (den * den);
          },
          [u](const kind::RationalSaturating& c) {
            const double w = u + c.k;
            return -2.0 * c.scale * c.k / (w * w * w);
          },
          [u](const kind::TanhScaled& c) {
            const double s = sech(c.n * u);
            return -2.0 * c.m * c.n * c.n * s * s * std::tanh(c.n * u);
          },
          [u](const kind::ExpOffset& c) { return c.alpha * c.alpha * std::exp(-exp_arg(c.alpha, u)); },
          [u](const kind::LogisticReciprocal& c) {
            const double e = std::exp(exp_arg(c.alpha, u));
            const double w = c.m + e;
            return -c.n * c.alpha * c.alpha * e * (c.m - e) / (w * w * w);
          },
          [u](const kind::InversePower& c) {
            const double w = u + c.k;
            return 2.0 / (w * w * w);
          },
          [u](const kind::SigmoidRatio& c) {
            const double d = std::exp(-exp_arg(c.alpha, u));
            const double w = c.a + d;
            return c.b * c.alpha * c.alpha * d * (d - c.a) / (w * w * w);
          },
          [](const kind::UnboundedPower&) { return 0.0; },
      },
      kind_);
}

double eval(const Regulator& reg, double v) { return reg.psi_u(to_u(reg, v)); }

double grad_vp(const Regulator& reg, double v) { return reg.dpsi_u(to_u(reg, v)); }

double grad2_vp(const Regulator& reg, double v) { return reg.d2psi_u(to_u(reg, v)); }

double gain_u(const Regulator& reg, double u) {
  const double d = reg.dpsi_u(u);
  if (d == 0.0) {
    throw SingularGainError("dpsi/d(V^p) vanishes at V^p = " + std::to_string(u));
  }
  const double g = 1.0 / std::abs(d);
  if (!std::isfinite(g)) {
    throw OverflowError("gain overflows at V^p = " + std::to_string(u));
  }
  return g;
}

double gain_du(const Regulator& reg, double u) {
  // d/du (1/|psi'|) = -sgn(psi') psi'' / psi'^2
  const double d = reg.dpsi_u(u);
  if (d == 0.0) {
    throw SingularGainError("dpsi/d(V^p) vanishes at V^p = " + std::to_string(u));
  }
  const double sign = d > 0.0 ? 1.0 : -1.0;
  const double r = -sign * reg.d2psi_u(u) / (d * d);
  if (!std::isfinite(r)) {
    throw OverflowError("gain derivative overflows at V^p = " + std::to_string(u));
  }
  return r;
}

double gain(const Regulator& reg, double v) { return gain_u(reg, to_u(reg, v)); }

namespace {

using Params = std::map<std::string, double>;

void check_keys(std::string_view kind, const Params& params, std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown parameter '" + key + "' for regulator '" + std::string(kind) + "'");
    }
  }
}

double get(const Params& params, const char* key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

Regulator make_regulator(std::string_view name, const Params& params, double p) {
  RegulatorKind k;
  if (name == "exp_complement") {
    check_keys(name, params, {"b", "alpha"});
    k = kind::ExpComplement{get(params, "b", 2.0), get(params, "alpha", 1.0)};
  } else if (name == "arcsin_tanh") {
    check_keys(name, params, {});
    k = kind::ArcsinTanh{};
  } else if (name == "arctan_scaled") {
    check_keys(name, params, {"alpha", "beta"});
    k = kind::ArctanScaled{get(params, "alpha", 1.0), get(params, "beta", 1.0)};
  } else if (name == "rational_saturating") {
    check_keys(name, params, {"scale", "k"});
    k = kind::RationalSaturating{get(params, "scale", 1.0), get(params, "k", 1.0)};
  } else if (name == "tanh_scaled") {
    check_keys(name, params, {"m", "n"});
    k = kind::TanhScaled{get(params, "m", 1.0), get(params, "n", 1.0)};
  } else if (name == "exp_offset") {
    check_keys(name, params, {"shift", "alpha"});
    k = kind::ExpOffset{get(params, "shift", 1.0), get(params, "alpha", 1.0)};
  } else if (name == "logistic_reciprocal") {
    check_keys(name, params, {"n", "m", "alpha"});
    k = kind::LogisticReciprocal{get(params, "n", 1.0), get(params, "m", 1.0), get(params, "alpha", 1.0)};
  } else if (name == "inverse_power") {
    check_keys(name, params, {"k"});
    k = kind::InversePower{get(params, "k", 1.0)};
  } else if (name == "sigmoid_ratio") {
    check_keys(name, params, {"a", "b", "alpha"});
    k = kind::SigmoidRatio{get(params, "a", 1.0), get(params, "b", 3.0), get(params, "alpha", 1.0)};
  } else if (name == "power") {
    check_keys(name, params, {});
    k = kind::UnboundedPower{};
  } else {
    throw ConfigError("unknown regulator kind '" + std::string(name) + "'");
  }
  return Regulator(k, p);
}

Params regulator_params(const Regulator& reg) {
  return std::visit(Overloaded{
                        [](const kind::ExpComplement& c) { return Params{{"b", c.b}, {"alpha", c.alpha}}; },
                        [](const kind::ArcsinTanh&) { return Params{}; },
                        [](const kind::ArctanScaled& c) { return Params{{"alpha", c.alpha}, {"beta", c.beta}}; },
                        [](const kind::RationalSaturating& c) { return Params{{"scale", c.scale}, {"k", c.k}}; },
                        [](const kind::TanhScaled& c) { return Params{{"m", c.m}, {"n", c.n}}; },
                        [](const kind::ExpOffset& c) { return Params{{"shift", c.shift}, {"alpha", c.alpha}}; },
                        [](const kind::LogisticReciprocal& c) {
                          return Params{{"n", c.n}, {"m", c.m}, {"alpha", c.alpha}};
                        },
                        [](const kind::InversePower& c) { return Params{{"k", c.k}}; },
                        [](const kind::SigmoidRatio& c) { return Params{{"a", c.a}, {"b", c.b}, {"alpha", c.alpha}}; },
                        [](const kind::UnboundedPower&) { return Params{}; },
                    },
                    reg.kind());
}

}  // namespace ptstab
