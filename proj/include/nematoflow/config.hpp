#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nematoflow/consistency.hpp"
#include "nematoflow/parameters.hpp"
#include "nematoflow/solver.hpp"
#include "nematoflow/symbolcheck.hpp"

// INI run configuration. Sections and keys:
//
//   [free_energy]  name, and the catalog coefficients of that form
//   [material]     rho, n_dim, and rules for mu_s mu_b mu_V mu_D mu_P mu_L
//                  mu_0 alpha_0 alpha_1 gamma ("0.5", "linear 1 0.1 0", ...)
//   [grid]         nx, ny, lx, ly
//   [time]         dt, t_end, cfl_safety, output_every
//   [scenario]     name, amplitude, seed, theta_star, director_angle, modes
//   [mode]         type = nonisothermal | isothermal
//   [toggles]      renormalize_director, freeze_velocity, theta_floor
//   [output]       directory, snapshot_every
//   [check]        theta_min, theta_max, tau_min, tau_max, rho_min, rho_max,
//                  samples, seed
//   [symbol]       samples, dim, seed, theta_min, theta_max, tau_min,
//                  tau_max, z_radii, z_angles
//
// Unknown sections or keys, malformed values and missing required keys are
// ConfigErrors whose key path is "section.key".
namespace nematoflow::config {

struct RunConfig {
  material::MaterialModel material = material::default_material();
  std::optional<grid::Grid> grid;
  solver::StepConfig step;
  bool has_time = false;
  std::optional<solver::Scenario> scenario;
  std::string output_directory = "nematoflow_run";
  /// Write a snapshot every this many diagnostics outputs; 0 writes only
  /// the initial and final states.
  int snapshot_every = 0;
  material::SamplingDomain check_domain;
  symbol::SweepSpec sweep;
  std::string source;

  /// Throws ConfigError naming the first missing key needed by simulate.
  void require_simulation() const;
};

RunConfig parse_file(const std::string& path);
/// name is used in error messages only.
RunConfig parse_string(const std::string& text, const std::string& name = "<config>");

}  // namespace nematoflow::config
