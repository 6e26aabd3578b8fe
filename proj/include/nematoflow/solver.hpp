#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "nematoflow/grid.hpp"
#include "nematoflow/parameters.hpp"

// Semi-implicit MAC-grid integrator for the non-isothermal nematic system
// with no-slip velocity and Neumann temperature/director conditions. Each
// step updates the director, then the temperature, then the velocity, with
// all coefficients frozen at the old time level.
namespace nematoflow::solver {

using grid::Field;
using grid::Grid;
using grid::Velocity;

struct StateField {
  Grid grid;
  Velocity u;
  Field theta;
  Field d1;
  Field d2;
  Field pi;
  double t = 0.0;
  /// max | |d| - 1 | before renormalization in the last director update.
  double d_drift = 0.0;
};

struct StepConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double cfl_safety = 0.9;
  bool renormalize_director = true;
  bool isothermal = false;
  /// Hold u at zero: run() clears the initial velocity and pressure and the
  /// momentum step is skipped.
  bool freeze_velocity = false;
  double theta_floor = 1e-8;
  /// Emit output every this many steps (the final state is always emitted).
  int output_every = 1;
  /// Relative tolerance of the implicit solves.
  double solve_tol = 1e-10;
  /// Relative tolerance of the pressure solve.
  double projection_tol = 1e-12;
};

/// Throws PreconditionError unless dt > 0, t_end >= 0, cfl_safety in (0, 1],
/// theta_floor > 0, output_every >= 1.
void validate(const StepConfig& c);

/// The integrator neglects director stretching and anisotropic dissipation;
/// throws ConfigError naming the first nonzero rule among mu_V, mu_D, mu_P,
/// mu_L, mu_0, alpha_1.
void require_supported(const material::MaterialModel& m);

/// Coefficients frozen cell by cell at (theta, tau).
struct CellCoefficients {
  Field tau;
  Field lambda;
  Field gamma;
  Field alpha;
  Field kappa;
  Field mu;
  Field dtau_energy;
};
CellCoefficients freeze_coefficients(const StateField& s, const material::MaterialModel& m);

struct DirectorUpdate {
  Field d1;
  Field d2;
  double drift = 0.0;
};
DirectorUpdate director_step(const StateField& s, const CellCoefficients& c, double dt,
                             bool renormalize, double tol = 1e-10);

/// Ericksen stress -theta lambda grad d grad d^T: xx, yy at cells, xy at nodes.
struct EricksenStress {
  Field sxx;
  Field syy;
  Field sxy;
};
EricksenStress ericksen_stress(const StateField& s, const CellCoefficients& c, const Field& d1,
                               const Field& d2);

/// Per-cell heat sources of the temperature equation.
struct HeatSources {
  Field viscous;
  Field ericksen;
  Field elastic;
  Field couple;
  Field total() const;
};
HeatSources heat_sources(const StateField& s, const CellCoefficients& c,
                         const DirectorUpdate& d_new, const EricksenStress& se, double rho,
                         double dt);

/// Throws SolverAbort when the new temperature drops below theta_floor.
Field temperature_step(const StateField& s, const CellCoefficients& c, const HeatSources& q,
                       double rho, double dt, double theta_floor, double tol = 1e-10);

struct MomentumUpdate {
  Velocity u;
  Field pi;
};
MomentumUpdate momentum_step(const StateField& s, const CellCoefficients& c,
                             const EricksenStress& se, double rho, double dt,
                             double tol = 1e-10, double projection_tol = 1e-12);

/// Largest stable step allowed by the guard: cfl_safety * min(rho h^2 /
/// (4 mu_max), h / |u|_max).
double cfl_limit(const StateField& s, const CellCoefficients& c, double rho, double cfl_safety);

/// One full step of length dt. Throws SolverAbort on a CFL violation or a
/// temperature below the floor, ConvergenceError on a failed solve.
StateField step(const StateField& s, const material::MaterialModel& m, const StepConfig& cfg,
                double dt);

/// Integrates from initial.t to cfg.t_end. The observer sees the initial
/// state, every output_every-th state and the final state. On an error the
/// last completed state is stored in last_good before the error propagates.
StateField run(const StateField& initial, const material::MaterialModel& m,
               const StepConfig& cfg, const std::function<void(const StateField&)>& observer,
               StateField* last_good = nullptr);

/// Discrete residual of div(a grad d) + a |grad d|^2 d = 0 with Neumann
/// conditions, one field per component.
struct NlevpResidual {
  Field r1;
  Field r2;
  /// sqrt(sum |r|^2 dA)
  double l2(const Grid& g) const;
};
NlevpResidual nlevp_residual(const Grid& g, const Field& d1, const Field& d2, const Field& a);

// Initial conditions.
struct Scenario {
  std::string name = "equilibrium_perturbation";
  double amplitude = 0.05;
  std::uint64_t seed = 1;
  double theta_star = 1.0;
  /// Director angle of the reference equilibrium, radians.
  double director_angle = 0.0;
  /// Modes per axis for random_smooth.
  int modes = 3;
};

/// Builds an initial state: u discretely divergence free, d unit, theta
/// positive. Throws PreconditionError for an unknown scenario or a
/// non-positive temperature.
StateField initialize(const Grid& g, const Scenario& sc, double theta_floor = 1e-8);

/// Removes the divergence of u by the same projection the solver uses.
void project(const Grid& g, Velocity& u, Field* phi = nullptr, double tol = 1e-12);

}  // namespace nematoflow::solver
