#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nematoflow/parameters.hpp"
#include "nematoflow/solver.hpp"

namespace nematoflow::diagnostics {

using solver::StateField;

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
  double available_energy = 0.0;
  double entropy_production = 0.0;
  double d_drift = 0.0;
  double u_l2 = 0.0;
  double grad_theta_l2 = 0.0;
  double grad_d_l2 = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double div_u_max = 0.0;
};

/// Cell-midpoint quadrature of mass, rho (|u|^2/2 + eps), rho eta,
/// rho (|u|^2/2 + psi) and the entropy production, with u averaged from
/// faces to cell centres.
DiagnosticsRecord totals(const StateField& s, const material::MaterialModel& m);

/// Entropy production density per cell from the discrete gradients.
solver::Field entropy_production_field(const StateField& s, const material::MaterialModel& m);

// CSV with the fixed column order of DiagnosticsRecord, %.17g values.
std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);
void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& series);
/// Throws PreconditionError on a malformed file.
std::vector<DiagnosticsRecord> read_csv(std::istream& in);

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the log-linear fit.
  double residual = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of log(distance) against t over samples with
/// distance in [lo, hi]. Throws FitError with fewer than min_samples usable
/// points or a non-decaying series.
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series, double lo = 1e-8,
                        double hi = 1e-2, std::size_t min_samples = 10);

struct Reference {
  double theta_star = 1.0;
  double d1 = 1.0;
  double d2 = 0.0;
};

/// Mean temperature and normalized mean director of a state.
Reference mean_reference(const StateField& s);

/// |u| + |theta - theta*| + |d - d*| + |grad d| in discrete L2.
double equilibrium_distance(const StateField& s, const std::optional<Reference>& ref = {});

struct PerturbationTriple {
  solver::Field sigma;
  solver::Field vartheta;
  solver::Field delta1;
  solver::Field delta2;
};

struct SecondVariation {
  double value = 0.0;
  /// Empty unless kappa, lambda or d(pi)/d(rho) is not positive at the equilibrium.
  std::string warning;
};

/// Quadrature of (dpi/drho / (rho theta)) sigma^2 + (kappa / theta^2) vartheta^2
/// + lambda |grad delta|^2 at the constant equilibrium (rho*, theta*). The sigma
/// term is dropped unless include_density is set.
SecondVariation second_variation(const solver::Grid& g, const material::MaterialModel& m,
                                 double rho_star, double theta_star, const PerturbationTriple& p,
                                 bool include_density = false);

struct EnergyDefect {
  double max_relative_energy_defect = 0.0;
  /// Index k of the largest |E_k - E_(k-1)|.
  std::size_t largest_jump_index = 0;
  double largest_jump = 0.0;
  std::vector<double> entropy_increments;
  /// Indices k with N_k - N_(k-1) < -tolerance.
  std::vector<std::size_t> entropy_decreases;
};

/// Throws PreconditionError for fewer than 2 records.
EnergyDefect energy_identity_defect(const std::vector<DiagnosticsRecord>& series,
                                    double entropy_tolerance = 0.0);

}  // namespace nematoflow::diagnostics
