#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "nematoflow/error.hpp"
#include "nematoflow/solver.hpp"

namespace nematoflow::solver {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double symmetric_uniform(std::uint64_t& state) {
  return 2.0 * static_cast<double>(splitmix(state) >> 11) * 0x1.0p-53 - 1.0;
}

// Velocity from a stream function sampled at nodes; it vanishes on the
// boundary nodes, so the normal velocity on boundary faces is zero and the
// discrete divergence is zero up to round-off.
template <class Psi>
void velocity_from_stream(const Grid& g, Psi psi, Velocity& u) {
  Field p = grid::node_field(g);
  for (int j = 1; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) p(i, j) = psi(i * g.dx(), j * g.dy());
  }
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) u.ux(i, j) = (p(i, j + 1) - p(i, j)) / g.dy();
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) u.uy(i, j) = -(p(i + 1, j) - p(i, j)) / g.dx();
  }
}

template <class Theta, class Angle>
void fill_cells(StateField& s, Theta theta, Angle angle) {
  const Grid& g = s.grid;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = (i + 0.5) * g.dx();
      const double y = (j + 0.5) * g.dy();
      s.theta(i, j) = theta(x, y);
      const double a = angle(x, y);
      s.d1(i, j) = std::cos(a);
      s.d2(i, j) = std::sin(a);
    }
  }
}

}  // namespace

StateField initialize(const Grid& g, const Scenario& sc, double theta_floor) {
  g.validate();
  if (!(sc.theta_star > 0.0)) throw PreconditionError("scenario theta_star must be positive");
  if (!std::isfinite(sc.amplitude)) throw PreconditionError("scenario amplitude must be finite");

  StateField s;
  s.grid = g;
  s.u = Velocity::zeros(g);
  s.theta = grid::cell_field(g);
  s.d1 = grid::cell_field(g);
  s.d2 = grid::cell_field(g);
  s.pi = grid::cell_field(g);
  const double A = sc.amplitude;
  const double ts = sc.theta_star;
  const double a0 = sc.director_angle;
  const double lx = g.lx, ly = g.ly;

  if (sc.name == "equilibrium_perturbation") {
    // Lowest Neumann modes in temperature and director angle, a localized
    // vortex in the velocity.
    auto mode = [&](double x, double y) {
      return std::cos(kPi * x / lx) + 0.5 * std::cos(kPi * y / ly);
    };
    fill_cells(s, [&](double x, double y) { return ts * (1.0 + A * mode(x, y)); },
               [&](double x, double y) { return a0 + A * mode(x, y); });
    velocity_from_stream(g, [&](double x, double y) {
      const double sx = std::sin(kPi * x / lx), sy = std::sin(kPi * y / ly);
      return A * sx * sx * sy * sy;
    }, s.u);
  } else if (sc.name == "taylor_green_director") {
    fill_cells(s, [&](double, double) { return ts; },
               [&](double x, double y) {
                 return a0 + A * std::cos(kPi * x / lx) * std::cos(kPi * y / ly);
               });
    velocity_from_stream(g, [&](double x, double y) {
      return A * std::sin(kPi * x / lx) * std::sin(kPi * y / ly);
    }, s.u);
  } else if (sc.name == "random_smooth") {
    if (sc.modes < 1 || sc.modes > 16) throw PreconditionError("random_smooth modes must be 1..16");
    const int M = sc.modes;
    std::uint64_t state = sc.seed;
    // Coefficients decay like 1 / (1 + m^2 + n^2); each series is scaled so
    // that the sum of |coefficients| equals the amplitude.
    auto draw = [&](int m0) {
      std::vector<double> c(static_cast<std::size_t>((M + 1) * (M + 1)), 0.0);
      double total = 0.0;
      for (int n = m0; n <= M; ++n) {
        for (int m = m0; m <= M; ++m) {
          if (m == 0 && n == 0) continue;
          const double v = symmetric_uniform(state) / (1.0 + m * m + n * n);
          c[static_cast<std::size_t>(n * (M + 1) + m)] = v;
          total += std::abs(v);
        }
      }
      if (total > 0.0) {
        for (double& v : c) v *= A / total;
      }
      return c;
    };
    const auto ct = draw(0);
    const auto ca = draw(0);
    const auto cu = draw(1);
    auto series = [&](const std::vector<double>& c, double x, double y, bool sine) {
      double v = 0.0;
      for (int n = 0; n <= M; ++n) {
        for (int m = 0; m <= M; ++m) {
          const double k = c[static_cast<std::size_t>(n * (M + 1) + m)];
          if (k == 0.0) continue;
          v += sine ? k * std::sin(m * kPi * x / lx) * std::sin(n * kPi * y / ly)
                    : k * std::cos(m * kPi * x / lx) * std::cos(n * kPi * y / ly);
        }
      }
      return v;
    };
    fill_cells(s, [&](double x, double y) { return ts * (1.0 + series(ct, x, y, false)); },
               [&](double x, double y) { return a0 + series(ca, x, y, false); });
    velocity_from_stream(g, [&](double x, double y) { return series(cu, x, y, true); }, s.u);
  } else {
    throw PreconditionError("unknown scenario '" + sc.name +
                            "' (equilibrium_perturbation, taylor_green_director, random_smooth)");
  }

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!(s.theta(i, j) > 0.0) || s.theta(i, j) < theta_floor) {
        std::ostringstream msg;
        msg << "initial temperature " << s.theta(i, j) << " in cell (" << i << ", " << j
            << ") is not above the floor " << theta_floor;
        throw PreconditionError(msg.str());
      }
    }
  }
  if (A != 0.0) project(g, s.u);
  return s;
}

}  // namespace nematoflow::solver
