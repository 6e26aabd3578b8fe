#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "nematoflow/error.hpp"
#include "nematoflow/grid.hpp"
#include "nematoflow/symbolcheck.hpp"

namespace nematoflow::symbol {

namespace {

// Smallest eigenvalue of the clamped-plate / Stokes problem on the unit square.
constexpr double kUnitSquareStokes = 52.344691168;

// Velocity of the discrete stream function psi (interior nodes, zero on the
// boundary): ux = d(psi)/dy, uy = -d(psi)/dx.
void stream_to_velocity(const grid::Grid& g, const grid::Field& psi, grid::Velocity& u) {
  const double dx = g.dx(), dy = g.dy();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) u.ux(i, j) = (psi(i, j + 1) - psi(i, j)) / dy;
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) u.uy(i, j) = -(psi(i + 1, j) - psi(i, j)) / dx;
  }
}

// Adjoint of stream_to_velocity, read back at interior nodes.
void velocity_to_stream(const grid::Grid& g, const grid::Velocity& v, grid::Field& psi) {
  const double dx = g.dx(), dy = g.dy();
  psi.fill(0.0);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      psi(i, j + 1) += v.ux(i, j) / dy;
      psi(i, j) -= v.ux(i, j) / dy;
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      psi(i + 1, j) -= v.uy(i, j) / dx;
      psi(i, j) += v.uy(i, j) / dx;
    }
  }
}

}  // namespace

double neumann_eigenvalue(double lx, double ly, int nx, int ny) {
  const double hx = lx / nx, hy = ly / ny;
  const double ex = 2.0 * (1.0 - std::cos(std::numbers::pi / nx)) / (hx * hx);
  const double ey = 2.0 * (1.0 - std::cos(std::numbers::pi / ny)) / (hy * hy);
  return std::min(ex, ey);
}

double stokes_eigenvalue(double lx, double ly, int nx, int ny) {
  if (nx > 64 || ny > 64) {
    throw PreconditionError("grid too fine for the dense Stokes eigensolve (limit 64 per axis)");
  }
  const grid::Grid g{nx, ny, lx, ly};
  g.validate();
  const int mx = nx - 1, my = ny - 1;
  const int m = mx * my;
  auto index = [&](int i, int j) { return (j - 1) * mx + (i - 1); };

  const grid::Field mu_c = grid::cell_field(g, 1.0);
  const grid::Field mu_n = grid::node_field(g, 1.0);
  Eigen::MatrixXd K(m, m), M(m, m);
  grid::Field psi = grid::node_field(g);
  grid::Field back = grid::node_field(g);
  grid::Velocity u = grid::Velocity::zeros(g);
  grid::Velocity Au = grid::Velocity::zeros(g);
  for (int j = 1; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      psi.fill(0.0);
      psi(i, j) = 1.0;
      stream_to_velocity(g, psi, u);
      grid::viscous_apply(g, mu_c, mu_n, 0.0, u, Au);
      const int col = index(i, j);
      velocity_to_stream(g, Au, back);
      for (int jj = 1; jj < ny; ++jj) {
        for (int ii = 1; ii < nx; ++ii) K(index(ii, jj), col) = back(ii, jj);
      }
      velocity_to_stream(g, u, back);
      for (int jj = 1; jj < ny; ++jj) {
        for (int ii = 1; ii < nx; ++ii) M(index(ii, jj), col) = back(ii, jj);
      }
    }
  }
  // Symmetrize away round-off before the generalized solve.
  K = 0.5 * (K + K.transpose()).eval();
  M = 0.5 * (M + M.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("Stokes eigensolve failed");
  return es.eigenvalues().minCoeff();
}

double SpectrumReport::slowest_rate() const {
  return std::min({theta_rate, director_rate, velocity_rate});
}

std::string SpectrumReport::table() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "block        coefficient    discrete_eig   rate           continuum_rate\n"
                "temperature  %-14.8g %-14.8g %-14.8g %.8g\n"
                "director     %-14.8g %-14.8g %-14.8g %.8g\n"
                "velocity     %-14.8g %-14.8g %-14.8g %.8g\n"
                "slowest rate %.8g\n",
                theta_coefficient, neumann_eigenvalue, theta_rate,
                theta_coefficient * continuum_neumann, director_coefficient, neumann_eigenvalue,
                director_rate, director_coefficient * continuum_neumann, velocity_coefficient,
                stokes_eigenvalue, velocity_rate, velocity_coefficient * continuum_stokes,
                slowest_rate());
  return buf;
}

SpectrumReport equilibrium_spectrum(const material::MaterialModel& m, double theta_star,
                                    double lx, double ly, int nx, int ny) {
  if (!(theta_star > 0.0)) throw PreconditionError("theta_star must be positive");
  const material::ThermoState s{theta_star, 0.0, m.params.rho};
  const auto c = m.params.at(theta_star, 0.0);
  if (!(c.alpha_0 > 0.0) || !(c.gamma > 0.0) || !(c.mu_s > 0.0)) {
    throw PreconditionError("equilibrium spectrum needs alpha_0, gamma, mu_s > 0");
  }
  SpectrumReport r;
  r.theta_coefficient = c.alpha_0 / (m.params.rho * material::heat_capacity(m.free_energy, s));
  r.director_coefficient = material::lambda_coeff(m.free_energy, s) / c.gamma;
  r.velocity_coefficient = c.mu_s / m.params.rho;
  r.neumann_eigenvalue = neumann_eigenvalue(lx, ly, nx, ny);
  r.stokes_eigenvalue = stokes_eigenvalue(lx, ly, nx, ny);
  r.theta_rate = r.theta_coefficient * r.neumann_eigenvalue;
  r.director_rate = r.director_coefficient * r.neumann_eigenvalue;
  r.velocity_rate = r.velocity_coefficient * r.stokes_eigenvalue;
  const double L = std::max(lx, ly);
  r.continuum_neumann = std::pow(std::numbers::pi / L, 2);
  r.continuum_stokes = std::abs(lx - ly) <= 1e-12 * lx ? kUnitSquareStokes / (lx * lx)
                                                        : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace nematoflow::symbol
