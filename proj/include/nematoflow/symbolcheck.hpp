#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nematoflow/parameters.hpp"
#include "nematoflow/stress.hpp"

// Frozen-coefficient analysis of the linearized (temperature, director)
// system: normal ellipticity of the reduced symbol, the Lopatinskii-Shapiro
// condition on a flat boundary, and the equilibrium decay spectrum.
namespace nematoflow::symbol {

using Complex = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using stress::Mat;
using stress::Vec;

enum class FreezeMode {
  /// Reject points violating lambda + 2 tau dlambda/dtau > 0.
  strict,
  /// Keep going so sweeps can report the violation through the roots.
  permissive,
};

struct FrozenCoefficients {
  double theta0 = 1.0;
  double tau0 = 0.0;
  double rho = 1.0;
  Mat grad_d0;
  Vec d0;
  double kappa0 = 0.0;
  double alpha0 = 0.0;
  double gamma0 = 0.0;
  double lambda0 = 0.0;
  double dtau_lambda0 = 0.0;
  double dtau_eta0 = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;
  double b0 = 0.0;
  double b1 = 0.0;
};

/// Evaluates the coefficients at (theta0, tau0 = |grad_d0|^2 / 2). Requires
/// a unit d0 and grad_d0 * d0 = 0. Throws PreconditionError when kappa0,
/// alpha0, gamma0 or lambda0 is not positive, and in strict mode when
/// lambda0 + 2 tau0 dtau_lambda0 <= 0.
FrozenCoefficients freeze(const material::MaterialModel& m, double theta0, const Mat& grad_d0,
                          const Vec& d0, FreezeMode mode = FreezeMode::strict);

struct ReducedSymbol {
  Vec xi;
  Vec c;  // c = xi . grad_d0
  double c_sq = 0.0;
  Mat2c matrix;
  Mat2c E_red;
};

/// Throws PreconditionError for xi = 0.
ReducedSymbol reduced_symbol(const FrozenCoefficients& fc, const Vec& xi);
/// Second-order part in the normal direction e_n, for a frozen state whose
/// normal row of grad_d0 vanishes.
Mat2c boundary_matrix(const FrozenCoefficients& fc);

struct EllipticityVerdict {
  Complex root1;
  Complex root2;
  bool pass = false;
  std::string detail;
};

/// Roots of det(z + A_red(xi)) = z^2 + tr z + det; pass when both are real
/// and negative.
EllipticityVerdict check_normal_ellipticity(const FrozenCoefficients& fc, const Vec& xi);

struct LsVerdict {
  Eigen::Vector2cd eig_M;
  Eigen::Vector2cd eig_B;
  double min_re_eig_B = 0.0;
  double min_singular_B = 0.0;
  bool pass = false;
  std::string detail;
};

/// Principal square root of a 2x2 matrix whose spectrum avoids (-inf, 0].
/// Uses an eigendecomposition when it is well conditioned, a Schur form
/// otherwise.
Mat2c principal_sqrt(const Mat2c& M);

/// True when an eigenvalue lies on (-inf, 0] in the floating-point sense
/// |Im| <= 1e-12 |Re| and Re <= 0.
bool on_closed_negative_axis(Complex ev);

/// Decides whether M = E^{-1}(z + A) has a principal root B with positive
/// real spectrum and full rank.
LsVerdict check_ls_matrix(const Mat2c& M);

/// xi_tangent has n - 1 components; the normal is e_n. Requires the normal
/// row of grad_d0 to vanish and (z, xi) away from the origin.
LsVerdict check_ls(const FrozenCoefficients& fc, const Vec& xi_tangent, Complex z);

struct SweepSpec {
  int dim = 2;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  double theta_min = 0.5;
  double theta_max = 2.0;
  double tau_min = 0.0;
  double tau_max = 1.0;
  int z_radii = 7;
  int z_angles = 7;
  double z_radius_min = 1e-3;
  double z_radius_max = 1e3;
  unsigned threads = 1;
};

struct SweepRow {
  std::size_t sample_id = 0;
  double theta0 = 0.0;
  double tau0 = 0.0;
  Vec xi;
  Complex root1;
  Complex root2;
  double min_re_eig_B = 0.0;
  std::string verdict;  // "pass", "fail:ellipticity", "fail:ls", "fail:freeze"
  std::string detail;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  int dim = 2;

  std::size_t failures() const;
  /// Columns: sample_id, theta0, tau0, xi_1..xi_n, root1, root2,
  /// min_re_eig_B, verdict.
  std::string csv() const;
};

/// Draws samples deterministically from the seed (each sample has its own
/// stream, so the result does not depend on the thread count). Each sample
/// checks normal ellipticity at a random xi and the boundary condition on a
/// grid of z in the closed right half plane.
SweepReport run_sweep(const material::MaterialModel& m, const SweepSpec& spec);

struct SpectrumReport {
  double theta_coefficient = 0.0;  // alpha / (rho kappa)
  double director_coefficient = 0.0;  // lambda / gamma
  double velocity_coefficient = 0.0;  // mu_s / rho
  double neumann_eigenvalue = 0.0;
  double stokes_eigenvalue = 0.0;
  double theta_rate = 0.0;
  double director_rate = 0.0;
  double velocity_rate = 0.0;
  double continuum_neumann = 0.0;
  /// Continuum Dirichlet Stokes eigenvalue, known for squares only (NaN otherwise).
  double continuum_stokes = 0.0;

  double slowest_rate() const;
  std::string table() const;
};

/// First nonzero Neumann eigenvalue of the discrete Laplacian.
double neumann_eigenvalue(double lx, double ly, int nx, int ny);

/// Smallest eigenvalue of the discrete Dirichlet Stokes operator on the MAC
/// grid (the solver's viscous operator with unit viscosity restricted to
/// discretely divergence-free fields). Throws PreconditionError for
/// nx or ny > 64.
double stokes_eigenvalue(double lx, double ly, int nx, int ny);

/// Decay rates of the linearization at the constant equilibrium theta_star,
/// grad d = 0. Requires positive kappa, lambda, alpha_0, gamma, mu_s there.
SpectrumReport equilibrium_spectrum(const material::MaterialModel& m, double theta_star,
                                    double lx, double ly, int nx, int ny);

}  // namespace nematoflow::symbol
