#include "nematoflow/material.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nematoflow/error.hpp"

namespace nematoflow::material {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string describe(const ThermoState& s) {
  std::ostringstream out;
  out.precision(17);
  out << "(theta=" << s.theta << ", tau=" << s.tau << ", rho=" << s.rho << ")";
  return out.str();
}

double checked(double v, std::string_view what, const std::string& fe,
               const ThermoState& s) {
  if (!std::isfinite(v)) {
    throw EvaluationError(std::string(what) + " of free energy '" + fe +
                          "' is not finite at " + describe(s));
  }
  return v;
}

double& coordinate(ThermoState& s, int var) {
  return var == 0 ? s.theta : (var == 1 ? s.tau : s.rho);
}

// Step for variable `var` at value x. Positive variables never step across 0.
double step(int var, double x, double power) {
  double h = std::max(1.0, std::abs(x)) * std::pow(kEps, power);
  if (var != 1) h = std::min(h, 0.25 * x);
  return h;
}

}  // namespace

void require_admissible(const ThermoState& s) {
  if (!(s.theta > 0.0) || !(s.tau >= 0.0) || !(s.rho > 0.0) ||
      !std::isfinite(s.theta) || !std::isfinite(s.tau) || !std::isfinite(s.rho)) {
    throw PreconditionError("inadmissible thermodynamic state " + describe(s));
  }
}

std::string_view partial_name(Partial p) {
  switch (p) {
    case Partial::theta: return "d/dtheta";
    case Partial::tau: return "d/dtau";
    case Partial::rho: return "d/drho";
    case Partial::theta_theta: return "d2/dtheta2";
    case Partial::theta_tau: return "d2/dtheta dtau";
    case Partial::tau_tau: return "d2/dtau2";
    case Partial::rho_rho: return "d2/drho2";
  }
  return "?";
}

FreeEnergy::FreeEnergy(std::string name, Rule value)
    : name_(std::move(name)), value_(std::move(value)) {}

FreeEnergy& FreeEnergy::with_partial(Partial p, Rule rule) {
  partials_[static_cast<int>(p)] = std::move(rule);
  return *this;
}

double FreeEnergy::value(const ThermoState& s) const {
  return checked(value_(s), "value", name_, s);
}

bool FreeEnergy::has_analytic(Partial p) const noexcept {
  return static_cast<bool>(partials_[static_cast<int>(p)]);
}

double FreeEnergy::partial(Partial p, const ThermoState& s) const {
  const auto& rule = partials_[static_cast<int>(p)];
  if (rule) return checked(rule(s), partial_name(p), name_, s);
  return finite_difference(p, s);
}

double FreeEnergy::finite_difference(Partial p, const ThermoState& s) const {
  auto f = [&](const ThermoState& x) { return value_(x); };
  auto first = [&](int var) {
    ThermoState a = s, b = s;
    const double h = step(var, coordinate(a, var), 1.0 / 3.0);
    coordinate(a, var) += h;
    coordinate(b, var) -= h;
    return (f(a) - f(b)) / (2.0 * h);
  };
  // Five-point second derivative. The step balances O(h^4) truncation
  // against eps/h^2 round-off.
  auto second = [&](int var) {
    ThermoState base = s;
    const double x = coordinate(base, var);
    const double h = step(var, x, 1.0 / 6.0);
    double vals[5];
    for (int k = -2; k <= 2; ++k) {
      ThermoState y = s;
      coordinate(y, var) = x + k * h;
      vals[k + 2] = f(y);
    }
    return (-vals[0] + 16.0 * vals[1] - 30.0 * vals[2] + 16.0 * vals[3] - vals[4]) /
           (12.0 * h * h);
  };
  auto mixed = [&](int v0, int v1) {
    ThermoState base = s;
    const double h0 = step(v0, coordinate(base, v0), 0.25);
    const double h1 = step(v1, coordinate(base, v1), 0.25);
    auto at = [&](double s0, double s1) {
      ThermoState y = s;
      coordinate(y, v0) += s0 * h0;
      coordinate(y, v1) += s1 * h1;
      return f(y);
    };
    return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h0 * h1);
  };
  double v = 0.0;
  switch (p) {
    case Partial::theta: v = first(0); break;
    case Partial::tau: v = first(1); break;
    case Partial::rho: v = first(2); break;
    case Partial::theta_theta: v = second(0); break;
    case Partial::tau_tau: v = second(1); break;
    case Partial::rho_rho: v = second(2); break;
    case Partial::theta_tau: v = mixed(0, 1); break;
  }
  return checked(v, partial_name(p), name_, s);
}

namespace {

// Shared thermal part -a theta (ln theta - 1); the tau terms are linear in theta.
FreeEnergy with_thermal_partials(FreeEnergy fe, double a) {
  fe.with_partial(Partial::theta_theta, [a](const ThermoState& s) { return -a / s.theta; });
  return fe;
}

}  // namespace

FreeEnergy ideal_linear(double a, double k, double bulk) {
  FreeEnergy fe("ideal_linear", [=](const ThermoState& s) {
    return -a * s.theta * (std::log(s.theta) - 1.0) + k * s.theta * s.tau / s.rho +
           bulk * std::log(s.rho);
  });
  fe = with_thermal_partials(std::move(fe), a);
  fe.with_partial(Partial::theta,
                  [=](const ThermoState& s) { return -a * std::log(s.theta) + k * s.tau / s.rho; })
      .with_partial(Partial::tau, [=](const ThermoState& s) { return k * s.theta / s.rho; })
      .with_partial(Partial::theta_tau, [=](const ThermoState& s) { return k / s.rho; })
      .with_partial(Partial::tau_tau, [](const ThermoState&) { return 0.0; })
      .with_partial(Partial::rho, [=](const ThermoState& s) {
        return -k * s.theta * s.tau / (s.rho * s.rho) + bulk / s.rho;
      })
      .with_partial(Partial::rho_rho, [=](const ThermoState& s) {
        return 2.0 * k * s.theta * s.tau / (s.rho * s.rho * s.rho) - bulk / (s.rho * s.rho);
      });
  return fe;
}

FreeEnergy coupled(double a, double k0, double k1, double bulk) {
  FreeEnergy fe("coupled", [=](const ThermoState& s) {
    return -a * s.theta * (std::log(s.theta) - 1.0) + (k0 + k1 * s.theta) * s.tau / s.rho +
           bulk * std::log(s.rho);
  });
  fe = with_thermal_partials(std::move(fe), a);
  fe.with_partial(Partial::theta,
                  [=](const ThermoState& s) { return -a * std::log(s.theta) + k1 * s.tau / s.rho; })
      .with_partial(Partial::tau,
                    [=](const ThermoState& s) { return (k0 + k1 * s.theta) / s.rho; })
      .with_partial(Partial::theta_tau, [=](const ThermoState& s) { return k1 / s.rho; })
      .with_partial(Partial::tau_tau, [](const ThermoState&) { return 0.0; })
      .with_partial(Partial::rho, [=](const ThermoState& s) {
        return -(k0 + k1 * s.theta) * s.tau / (s.rho * s.rho) + bulk / s.rho;
      })
      .with_partial(Partial::rho_rho, [=](const ThermoState& s) {
        return 2.0 * (k0 + k1 * s.theta) * s.tau / (s.rho * s.rho * s.rho) -
               bulk / (s.rho * s.rho);
      });
  return fe;
}

FreeEnergy quadratic(double a, double k, double k2, double bulk) {
  auto g = [=](double tau) { return k * tau + 0.5 * k2 * tau * tau; };
  FreeEnergy fe("quadratic", [=](const ThermoState& s) {
    return -a * s.theta * (std::log(s.theta) - 1.0) + s.theta * g(s.tau) / s.rho +
           bulk * std::log(s.rho);
  });
  fe = with_thermal_partials(std::move(fe), a);
  fe.with_partial(Partial::theta,
                  [=](const ThermoState& s) { return -a * std::log(s.theta) + g(s.tau) / s.rho; })
      .with_partial(Partial::tau,
                    [=](const ThermoState& s) { return s.theta * (k + k2 * s.tau) / s.rho; })
      .with_partial(Partial::theta_tau,
                    [=](const ThermoState& s) { return (k + k2 * s.tau) / s.rho; })
      .with_partial(Partial::tau_tau, [=](const ThermoState& s) { return s.theta * k2 / s.rho; })
      .with_partial(Partial::rho, [=](const ThermoState& s) {
        return -s.theta * g(s.tau) / (s.rho * s.rho) + bulk / s.rho;
      })
      .with_partial(Partial::rho_rho, [=](const ThermoState& s) {
        return 2.0 * s.theta * g(s.tau) / (s.rho * s.rho * s.rho) - bulk / (s.rho * s.rho);
      });
  return fe;
}

std::map<std::string, double> catalog_defaults(const std::string& name) {
  if (name == "ideal_linear") return {{"a", 2.0}, {"k", 0.5}, {"bulk", 1.0}};
  if (name == "coupled") return {{"a", 2.0}, {"k0", 0.25}, {"k1", 0.25}, {"bulk", 1.0}};
  if (name == "quadratic") return {{"a", 2.0}, {"k", 0.5}, {"k2", 0.1}, {"bulk", 1.0}};
  throw PreconditionError("unknown free energy '" + name +
                          "' (catalog: ideal_linear, coupled, quadratic)");
}

FreeEnergy make_free_energy(const std::string& name, const std::map<std::string, double>& coeffs) {
  auto c = catalog_defaults(name);
  for (const auto& [key, value] : coeffs) {
    if (!c.count(key)) {
      throw PreconditionError("free energy '" + name + "' has no coefficient '" + key + "'");
    }
    c[key] = value;
  }
  if (name == "ideal_linear") return ideal_linear(c["a"], c["k"], c["bulk"]);
  if (name == "coupled") return coupled(c["a"], c["k0"], c["k1"], c["bulk"]);
  return quadratic(c["a"], c["k"], c["k2"], c["bulk"]);
}

double free_energy(const FreeEnergy& fe, const ThermoState& s) {
  require_admissible(s);
  return fe.value(s);
}

double entropy(const FreeEnergy& fe, const ThermoState& s) {
  require_admissible(s);
  return -fe.partial(Partial::theta, s);
}

double internal_energy(const FreeEnergy& fe, const ThermoState& s) {
  return fe.value(s) + s.theta * entropy(fe, s);
}

double heat_capacity_value(const FreeEnergy& fe, const ThermoState& s) {
  require_admissible(s);
  return -s.theta * fe.partial(Partial::theta_theta, s);
}

double heat_capacity(const FreeEnergy& fe, const ThermoState& s) {
  const double kappa = heat_capacity_value(fe, s);
  if (!(kappa > 0.0)) {
    throw EvaluationError("heat capacity of '" + fe.name() + "' is not positive (" +
                          std::to_string(kappa) + ") at " + describe(s));
  }
  return kappa;
}

double lambda_value(const FreeEnergy& fe, const ThermoState& s) {
  require_admissible(s);
  return s.rho * fe.partial(Partial::tau, s) / s.theta;
}

double lambda_coeff(const FreeEnergy& fe, const ThermoState& s) {
  const double lambda = lambda_value(fe, s);
  if (!(lambda > 0.0)) {
    throw EvaluationError("lambda of '" + fe.name() + "' is not positive (" +
                          std::to_string(lambda) + ") at " + describe(s));
  }
  return lambda;
}

double dtau_lambda(const FreeEnergy& fe, const ThermoState& s) {
  require_admissible(s);
  return s.rho * fe.partial(Partial::tau_tau, s) / s.theta;
}

double dtau_entropy(const FreeEnergy& fe, const ThermoState& s) {
  require_admissible(s);
  return -fe.partial(Partial::theta_tau, s);
}

double dtau_internal_energy(const FreeEnergy& fe, const ThermoState& s) {
  require_admissible(s);
  return fe.partial(Partial::tau, s) - s.theta * fe.partial(Partial::theta_tau, s);
}

double pressure(const FreeEnergy& fe, const ThermoState& s) {
  require_admissible(s);
  return s.rho * s.rho * fe.partial(Partial::rho, s);
}

double drho_pressure(const FreeEnergy& fe, const ThermoState& s) {
  require_admissible(s);
  return 2.0 * s.rho * fe.partial(Partial::rho, s) +
         s.rho * s.rho * fe.partial(Partial::rho_rho, s);
}

double oseen_frank_density(const Eigen::Vector3d& d, const Eigen::Matrix3d& grad_d,
                           const OseenFrankConstants& k) {
  if (std::abs(d.norm() - 1.0) > 1e-12) {
    throw PreconditionError("Oseen-Frank density needs a unit director");
  }
  const double div = grad_d.trace();
  const Eigen::Vector3d curl(grad_d(1, 2) - grad_d(2, 1), grad_d(2, 0) - grad_d(0, 2),
                             grad_d(0, 1) - grad_d(1, 0));
  const double twist = d.dot(curl);
  const double bend = d.cross(curl).squaredNorm();
  const double saddle = (grad_d * grad_d).trace() - div * div;
  return k.k1 * div * div + k.k2 * bend + k.k3 * twist * twist + (k.k2 + k.k4) * saddle;
}

}  // namespace nematoflow::material
