#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nematoflow/diagnostics.hpp"
#include "nematoflow/error.hpp"
#include "nematoflow/solver.hpp"

using namespace nematoflow;
using namespace nematoflow::solver;
using std::numbers::pi;

namespace {

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_unit_defect(const StateField& s) {
  double m = 0.0;
  for (std::size_t k = 0; k < s.d1.size(); ++k)
    m = std::max(m, std::abs(std::hypot(s.d1[k], s.d2[k]) - 1.0));
  return m;
}

StateField small_state(const std::string& name, double amplitude = 0.05) {
  Scenario sc;
  sc.name = name;
  sc.amplitude = amplitude;
  sc.seed = 4;
  return initialize(Grid{12, 10, 1.0, 0.8}, sc);
}

}  // namespace

TEST_CASE("scenarios produce admissible initial data") {
  for (const char* name : {"equilibrium_perturbation", "taylor_green_director", "random_smooth"}) {
    CAPTURE(name);
    const auto s = small_state(name);
    CHECK(max_unit_defect(s) < 1e-14);
    CHECK(max_abs(grid::divergence(s.grid, s.u)) < 1e-9);
    for (double v : s.theta.values()) CHECK(v > 0.0);
  }
  CHECK_THROWS_AS(small_state("vortex"), PreconditionError);
  Scenario cold;
  cold.theta_star = 0.01;
  cold.amplitude = 1.0;
  CHECK_THROWS_AS(initialize(Grid{8, 8, 1.0, 1.0}, cold), PreconditionError);
}

TEST_CASE("zero amplitude is an exact equilibrium and stays one") {
  const auto s0 = small_state("equilibrium_perturbation", 0.0);
  CHECK(max_abs(s0.u.ux) == 0.0);
  const auto m = material::default_material();
  StepConfig cfg;
  cfg.dt = 0.005;
  const auto s1 = step(s0, m, cfg, cfg.dt);
  CHECK(s1.theta.values() == s0.theta.values());
  CHECK(max_abs(s1.u.ux) == 0.0);
  CHECK(max_abs(s1.u.uy) == 0.0);
  CHECK(s1.d1.values() == s0.d1.values());
}

TEST_CASE("a temperature cosine mode decays by the implicit Euler factor") {
  const Grid g{16, 8, 2.0, 1.0};
  Scenario sc;
  sc.amplitude = 0.0;
  StateField s = initialize(g, sc);
  const double A = 0.1;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s.theta(i, j) = 1.0 + A * std::cos(pi * (i + 0.5) * g.dx() / g.lx);
  const auto m = material::default_material();
  StepConfig cfg;
  cfg.dt = 0.01;
  cfg.freeze_velocity = true;
  cfg.solve_tol = 1e-14;
  const auto s1 = step(s, m, cfg, cfg.dt);
  const double h = g.dx();
  const double ev = 2.0 * (1.0 - std::cos(pi * h / g.lx)) / (h * h);
  const double factor = 1.0 / (1.0 + cfg.dt * (1.0 / 2.0) * ev);  // alpha / (rho kappa) = 1/2
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double expect = 1.0 + A * factor * std::cos(pi * (i + 0.5) * g.dx() / g.lx);
      CHECK(s1.theta(i, j) == doctest::Approx(expect).epsilon(1e-11));
    }
  }
}

TEST_CASE("one step conserves total energy up to a small defect and keeps |d| = 1") {
  const auto m = material::default_material();
  auto s = small_state("random_smooth", 0.3);
  StepConfig cfg;
  cfg.dt = 1e-3;
  const auto e0 = diagnostics::totals(s, m);
  const auto s1 = step(s, m, cfg, cfg.dt);
  const auto e1 = diagnostics::totals(s1, m);
  // The spatial discretization leaves a defect rate of order h, so the
  // per-step defect is roughly proportional to dt on a fixed coarse grid.
  const double defect = std::abs(e1.energy - e0.energy) / e0.energy;
  CHECK(defect < 1e-3);
  const auto e_half = diagnostics::totals(step(s, m, cfg, 0.5 * cfg.dt), m);
  CHECK(std::abs(e_half.energy - e0.energy) / e0.energy < 0.6 * defect);
  CHECK(e1.entropy >= e0.entropy);
  CHECK(e1.mass == e0.mass);
  CHECK(max_unit_defect(s1) < 1e-12);
  CHECK(max_abs(grid::divergence(s1.grid, s1.u)) < 1e-8);
  CHECK(s1.d_drift > 0.0);
}

TEST_CASE("director drift without renormalization is second order in dt") {
  const auto m = material::default_material();
  const auto s = small_state("random_smooth", 0.5);
  StepConfig cfg;
  cfg.renormalize_director = false;
  const double d1 = step(s, m, cfg, 2e-3).d_drift;
  const double d2 = step(s, m, cfg, 1e-3).d_drift;
  CHECK(d1 / d2 > 2.0);
  CHECK(max_unit_defect(step(s, m, cfg, 1e-3)) > 0.0);
}

TEST_CASE("the stability guard and the temperature floor abort the run") {
  const auto m = material::default_material();
  const auto s = small_state("random_smooth");
  StepConfig cfg;
  CHECK_THROWS_AS(step(s, m, cfg, 10.0), SolverAbort);

  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  cfg.theta_floor = 10.0;
  StateField last_good;
  int seen = 0;
  CHECK_THROWS_AS(run(s, m, cfg, [&](const StateField&) { ++seen; }, &last_good), SolverAbort);
  CHECK(seen == 1);
  CHECK(last_good.t == s.t);
  CHECK(last_good.theta.values() == s.theta.values());
}

TEST_CASE("run reaches t_end exactly and honours output_every") {
  const auto m = material::default_material();
  const auto s = small_state("taylor_green_director");
  StepConfig cfg;
  cfg.dt = 0.005;
  cfg.t_end = 0.0525;
  cfg.output_every = 4;
  std::vector<double> times;
  const auto out = run(s, m, cfg, [&](const StateField& x) { times.push_back(x.t); });
  CHECK(out.t == 0.0525);
  // Initial state, steps 4 and 8, and the shortened final step 11.
  REQUIRE(times.size() == 4);
  CHECK(times[1] == doctest::Approx(0.02));
  CHECK(times[2] == doctest::Approx(0.04));
  CHECK(times[3] == 0.0525);
}

TEST_CASE("unsupported material rules are rejected by name") {
  auto m = material::default_material();
  m.params.mu_P = material::ParameterRule::constant(0.1);
  try {
    require_supported(m);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("mu_P") != std::string::npos);
  }
  m = material::default_material();
  m.params.n_dim = 3;
  CHECK_THROWS_AS(require_supported(m), ConfigError);
  StepConfig bad;
  bad.output_every = 0;
  CHECK_THROWS_AS(validate(bad), PreconditionError);
}

TEST_CASE("nlevp residual of constant and rotating directors") {
  const Grid g{16, 4, 1.0, 0.25};
  Field d1 = grid::cell_field(g, 1.0), d2 = grid::cell_field(g), a = grid::cell_field(g, 0.7);
  CHECK(nlevp_residual(g, d1, d2, a).l2(g) == 0.0);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      d1(i, j) = std::cos(0.3 * i);
      d2(i, j) = std::sin(0.3 * i);
    }
  }
  const auto r = nlevp_residual(g, d1, d2, a);
  // A uniform rotation solves the equation in the interior up to O(h^2)
  // but not at the Neumann walls.
  CHECK(r.l2(g) > 1e-3);
}

TEST_CASE("projection removes the divergence") {
  const Grid g{10, 10, 1.0, 1.0};
  Velocity u = Velocity::zeros(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) u.ux(i, j) = std::sin(1.0 * i + 0.3 * j);
  Field phi;
  project(g, u, &phi);
  CHECK(max_abs(grid::divergence(g, u)) < 1e-9);
  CHECK(phi.size() == g.cells());
}
