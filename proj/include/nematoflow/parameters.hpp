#pragma once

#include <array>
#include <string>
#include <string_view>

#include "nematoflow/material.hpp"

namespace nematoflow::material {

/// A parameter function of (theta, tau) chosen by name from a fixed set of
/// analytic forms:
///   constant  c0
///   linear    c0 + c1 theta + c2 tau
///   power     c0 theta^c1
///   arrhenius c0 exp(c1 / theta)
class ParameterRule {
 public:
  enum class Form { constant, linear, power, arrhenius };

  ParameterRule() = default;
  static ParameterRule constant(double c0);
  static ParameterRule linear(double c0, double c1, double c2);
  static ParameterRule power(double c0, double c1);
  static ParameterRule arrhenius(double c0, double c1);
  /// "0.5", "constant 0.5", "linear 1 0.1 0", ... Throws PreconditionError.
  static ParameterRule parse(std::string_view text);

  double operator()(double theta, double tau) const;
  Form form() const noexcept { return form_; }
  std::string describe() const;

 private:
  Form form_ = Form::constant;
  std::array<double, 3> c_{};
};

/// Parameter functions evaluated at one point.
struct Coefficients {
  double mu_s = 0.0;
  double mu_b = 0.0;
  double mu_V = 0.0;
  double mu_D = 0.0;
  double mu_P = 0.0;
  double mu_L = 0.0;
  double mu_0 = 0.0;
  double alpha_0 = 0.0;
  double alpha_1 = 0.0;
  double gamma = 1.0;
};

struct ParameterSet {
  ParameterRule mu_s = ParameterRule::constant(0.0);
  ParameterRule mu_b = ParameterRule::constant(0.0);
  ParameterRule mu_V = ParameterRule::constant(0.0);
  ParameterRule mu_D = ParameterRule::constant(0.0);
  ParameterRule mu_P = ParameterRule::constant(0.0);
  ParameterRule mu_L = ParameterRule::constant(0.0);
  ParameterRule mu_0 = ParameterRule::constant(0.0);
  ParameterRule alpha_0 = ParameterRule::constant(0.0);
  ParameterRule alpha_1 = ParameterRule::constant(0.0);
  ParameterRule gamma = ParameterRule::constant(1.0);
  double rho = 1.0;
  int n_dim = 2;

  /// Throws EvaluationError naming the rule that returned a non-finite value.
  Coefficients at(double theta, double tau) const;

  /// Rule by name ("mu_s", ..., "gamma"); nullptr when unknown.
  ParameterRule* rule(std::string_view name);
  const ParameterRule* rule(std::string_view name) const;
  static const std::array<std::string_view, 10>& rule_names();
};

struct MaterialModel {
  FreeEnergy free_energy;
  ParameterSet params;
};

/// Default material used by the simulator and the tests: ideal_linear free
/// energy (a = 2, k = 0.5) with mu_s = 0.25, alpha_0 = 1, gamma = 0.5, rho = 1.
MaterialModel default_material();

}  // namespace nematoflow::material
