#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace nematoflow::material {

/// Thermodynamic state of a material point: temperature, director-gradient
/// invariant tau = |grad d|^2 / 2, and density.
struct ThermoState {
  double theta = 1.0;
  double tau = 0.0;
  double rho = 1.0;
};

/// Throws PreconditionError unless theta > 0, tau >= 0, rho > 0.
void require_admissible(const ThermoState& s);

/// Partial derivatives of psi(rho, theta, tau) the library needs.
enum class Partial : int {
  theta = 0,
  tau,
  rho,
  theta_theta,
  theta_tau,
  tau_tau,
  rho_rho,
};
inline constexpr int kPartialCount = 7;
std::string_view partial_name(Partial p);

/// Free energy per unit mass with analytic partials where available.
/// Missing partials fall back to centered finite differences.
class FreeEnergy {
 public:
  using Rule = std::function<double(const ThermoState&)>;

  FreeEnergy(std::string name, Rule value);

  FreeEnergy& with_partial(Partial p, Rule rule);

  const std::string& name() const noexcept { return name_; }
  double value(const ThermoState& s) const;
  double partial(Partial p, const ThermoState& s) const;
  bool has_analytic(Partial p) const noexcept;

  /// Always differentiates the value rule numerically, ignoring analytic
  /// partials. First derivatives use h = max(1,|x|) eps^(1/3).
  double finite_difference(Partial p, const ThermoState& s) const;

 private:
  std::string name_;
  Rule value_;
  std::array<Rule, kPartialCount> partials_;
};

// Catalog. Every form carries a b*ln(rho) compressibility term so that
// d(pi)/d(rho) = b; incompressible runs never see it.

/// psi = -a theta (ln theta - 1) + k theta tau / rho + b ln rho
FreeEnergy ideal_linear(double a, double k, double bulk = 1.0);
/// psi = -a theta (ln theta - 1) + (k0 + k1 theta) tau / rho + b ln rho
FreeEnergy coupled(double a, double k0, double k1, double bulk = 1.0);
/// psi = -a theta (ln theta - 1) + theta (k tau + k2 tau^2 / 2) / rho + b ln rho
FreeEnergy quadratic(double a, double k, double k2, double bulk = 1.0);

/// Builds a catalog form by name from named coefficients. Unknown names or
/// coefficients throw PreconditionError naming the offender.
FreeEnergy make_free_energy(const std::string& name,
                            const std::map<std::string, double>& coeffs);

/// Coefficient names accepted by make_free_energy for a catalog form, with
/// their defaults.
std::map<std::string, double> catalog_defaults(const std::string& name);

// Thermodynamic relations.
double free_energy(const FreeEnergy& fe, const ThermoState& s);
double entropy(const FreeEnergy& fe, const ThermoState& s);
double internal_energy(const FreeEnergy& fe, const ThermoState& s);
/// kappa = -theta d2psi/dtheta2; throws EvaluationError when kappa <= 0.
double heat_capacity(const FreeEnergy& fe, const ThermoState& s);
/// Same as heat_capacity without the positivity check.
double heat_capacity_value(const FreeEnergy& fe, const ThermoState& s);
/// lambda = rho dpsi/dtau / theta; throws EvaluationError when lambda <= 0.
double lambda_coeff(const FreeEnergy& fe, const ThermoState& s);
double lambda_value(const FreeEnergy& fe, const ThermoState& s);
/// d(lambda)/d(tau) = rho d2psi/dtau2 / theta.
double dtau_lambda(const FreeEnergy& fe, const ThermoState& s);
/// d(eta)/d(tau) = -d2psi/(dtheta dtau).
double dtau_entropy(const FreeEnergy& fe, const ThermoState& s);
/// d(eps)/d(tau) = dpsi/dtau - theta d2psi/(dtheta dtau).
double dtau_internal_energy(const FreeEnergy& fe, const ThermoState& s);
/// Maxwell pressure pi = rho^2 dpsi/drho.
double pressure(const FreeEnergy& fe, const ThermoState& s);
/// d(pi)/d(rho) = 2 rho dpsi/drho + rho^2 d2psi/drho2.
double drho_pressure(const FreeEnergy& fe, const ThermoState& s);

struct OseenFrankConstants {
  double k1 = 1.0;
  double k2 = 1.0;
  double k3 = 1.0;
  double k4 = 0.0;
};

/// Oseen-Frank energy density. grad_d(i, j) = d_i d_j (derivative index
/// first). Requires | |d| - 1 | <= 1e-12.
double oseen_frank_density(const Eigen::Vector3d& d, const Eigen::Matrix3d& grad_d,
                           const OseenFrankConstants& k);

}  // namespace nematoflow::material
