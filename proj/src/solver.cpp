#include "nematoflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nematoflow/error.hpp"
#include "nematoflow/linear_solver.hpp"

namespace nematoflow::solver {

namespace {

// Solves shift * x - div(a grad x) = rhs (Neumann) with x as the warm start.
void solve_diffusion(const Grid& g, const Field& a, const Field& shift, const Field& rhs,
                     Field& x, double tol, bool remove_mean, const std::string& label) {
  const Field diag = grid::diffusion_diagonal(g, a, shift);
  Field xf = grid::cell_field(g);
  Field yf = grid::cell_field(g);
  auto op = [&](const linear::Vector& in, linear::Vector& out) {
    xf.values() = in;
    grid::diffusion_apply(g, a, shift, xf, yf);
    out = yf.values();
  };
  linear::CgOptions opt;
  opt.rel_tol = tol;
  opt.remove_mean = remove_mean;
  opt.label = label;
  linear::pcg(op, diag.values(), rhs.values(), x.values(), opt);
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

void validate(const StepConfig& c) {
  if (!(c.dt > 0.0)) throw PreconditionError("dt must be positive");
  if (!(c.t_end >= 0.0)) throw PreconditionError("t_end must be non-negative");
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) {
    throw PreconditionError("cfl_safety must lie in (0, 1]");
  }
  if (!(c.theta_floor > 0.0)) throw PreconditionError("theta_floor must be positive");
  if (c.output_every < 1) throw PreconditionError("output_every must be at least 1");
}

void require_supported(const material::MaterialModel& m) {
  for (const char* name : {"mu_V", "mu_D", "mu_P", "mu_L", "mu_0", "alpha_1"}) {
    const auto* r = m.params.rule(name);
    const bool zero = r->form() == material::ParameterRule::Form::constant && (*r)(1.0, 0.0) == 0.0;
    if (!zero) {
      throw ConfigError(std::string("material.") + name,
                        "the integrator supports only the simplified model; this coefficient "
                        "must be 0");
    }
  }
  if (m.params.n_dim != 2) throw ConfigError("material.n_dim", "the integrator is 2D");
}

CellCoefficients freeze_coefficients(const StateField& s, const material::MaterialModel& m) {
  const Grid& g = s.grid;
  CellCoefficients c;
  c.tau = grid::cell_tau(g, s.d1, s.d2);
  c.lambda = c.gamma = c.alpha = c.kappa = c.mu = c.dtau_energy = grid::cell_field(g);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const material::ThermoState ts{s.theta[k], c.tau[k], m.params.rho};
    const auto p = m.params.at(ts.theta, ts.tau);
    c.lambda[k] = material::lambda_coeff(m.free_energy, ts);
    c.kappa[k] = material::heat_capacity(m.free_energy, ts);
    c.dtau_energy[k] = material::dtau_internal_energy(m.free_energy, ts);
    c.gamma[k] = p.gamma;
    c.alpha[k] = p.alpha_0;
    c.mu[k] = p.mu_s;
    if (!(p.gamma > 0.0) || !(p.alpha_0 > 0.0) || !(p.mu_s > 0.0)) {
      std::ostringstream msg;
      msg << "gamma, alpha_0 and mu_s must be positive (theta=" << ts.theta << ", tau=" << ts.tau
          << ")";
      throw EvaluationError(msg.str());
    }
  }
  return c;
}

DirectorUpdate director_step(const StateField& s, const CellCoefficients& c, double dt,
                             bool renormalize, double tol) {
  const Grid& g = s.grid;
  Field ucx, ucy;
  grid::cell_velocity(g, s.u, ucx, ucy);
  Field shift = grid::cell_field(g);
  for (std::size_t k = 0; k < g.cells(); ++k) shift[k] = c.gamma[k] / dt;

  DirectorUpdate out;
  const Field* old[2] = {&s.d1, &s.d2};
  Field* next[2] = {&out.d1, &out.d2};
  for (int comp = 0; comp < 2; ++comp) {
    const Field& d = *old[comp];
    const Field adv = grid::directional_derivative(g, ucx, ucy, d);
    Field rhs = grid::cell_field(g);
    for (std::size_t k = 0; k < g.cells(); ++k) {
      rhs[k] = shift[k] * d[k] - c.gamma[k] * adv[k] + c.lambda[k] * 2.0 * c.tau[k] * d[k];
    }
    *next[comp] = d;
    solve_diffusion(g, c.lambda, shift, rhs, *next[comp], tol, false, "director solve");
  }
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double n = std::hypot(out.d1[k], out.d2[k]);
    out.drift = std::max(out.drift, std::abs(n - 1.0));
    if (renormalize) {
      if (!(n > 0.0)) throw EvaluationError("director vanished during the update");
      out.d1[k] /= n;
      out.d2[k] /= n;
    }
  }
  return out;
}

EricksenStress ericksen_stress(const StateField& s, const CellCoefficients& c, const Field& d1,
                               const Field& d2) {
  const Grid& g = s.grid;
  const auto G = grid::gradient_tensor(g, d1, d2);
  Field tl = grid::cell_field(g);
  for (std::size_t k = 0; k < g.cells(); ++k) tl[k] = s.theta[k] * c.lambda[k];
  const Field tl_n = grid::cell_to_node(g, tl);
  EricksenStress se{grid::cell_field(g), grid::cell_field(g), grid::node_field(g)};
  for (std::size_t k = 0; k < g.cells(); ++k) {
    se.sxx[k] = -tl[k] * G.gxx[k];
    se.syy[k] = -tl[k] * G.gyy[k];
  }
  for (std::size_t k = 0; k < se.sxy.size(); ++k) se.sxy[k] = -tl_n[k] * G.gxy[k];
  return se;
}

Field HeatSources::total() const {
  Field t = viscous;
  for (std::size_t k = 0; k < t.size(); ++k) t[k] += ericksen[k] + elastic[k] + couple[k];
  return t;
}

HeatSources heat_sources(const StateField& s, const CellCoefficients& c,
                         const DirectorUpdate& d_new, const EricksenStress& se, double rho,
                         double dt) {
  const Grid& g = s.grid;
  const double dx = g.dx(), dy = g.dy();
  const auto e = grid::strain(g, s.u);
  const Field mu_n = grid::cell_to_node(g, c.mu);

  HeatSources h{grid::cell_field(g), grid::cell_field(g), grid::cell_field(g),
                grid::cell_field(g)};

  // 2 mu |D|^2 and S_E : D, with the shear parts living on nodes.
  Field visc_n = grid::node_field(g);
  Field se_n = grid::node_field(g);
  for (std::size_t k = 0; k < visc_n.size(); ++k) {
    visc_n[k] = mu_n[k] * e.gxy[k] * e.gxy[k];
    se_n[k] = se.sxy[k] * e.gxy[k];
  }
  const Field visc_c = grid::node_to_cell_weighted(g, visc_n);
  const Field se_c = grid::node_to_cell_weighted(g, se_n);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    h.viscous[k] = 2.0 * c.mu[k] * (e.exx[k] * e.exx[k] + e.eyy[k] * e.eyy[k]) + visc_c[k];
    h.ericksen[k] = se.sxx[k] * e.exx[k] + se.syy[k] * e.eyy[k] + se_c[k];
  }

  // Material derivatives of d and tau.
  Field ucx, ucy;
  grid::cell_velocity(g, s.u, ucx, ucy);
  const Field a1 = grid::directional_derivative(g, ucx, ucy, s.d1);
  const Field a2 = grid::directional_derivative(g, ucx, ucy, s.d2);
  Field Dt1 = grid::cell_field(g), Dt2 = grid::cell_field(g);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    Dt1[k] = (d_new.d1[k] - s.d1[k]) / dt + a1[k];
    Dt2[k] = (d_new.d2[k] - s.d2[k]) / dt + a2[k];
  }
  const Field tau_new = grid::cell_tau(g, d_new.d1, d_new.d2);
  const Field tau_adv = grid::directional_derivative(g, ucx, ucy, c.tau);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double Dt_tau = (tau_new[k] - c.tau[k]) / dt + tau_adv[k];
    h.elastic[k] = -rho * c.dtau_energy[k] * Dt_tau;
  }

  // div(theta lambda [grad d]^T Dt d) from face fluxes; zero flux on the boundary.
  Field tl = grid::cell_field(g);
  for (std::size_t k = 0; k < g.cells(); ++k) tl[k] = s.theta[k] * c.lambda[k];
  auto flux_x = [&](int i, int j) {  // face between cells i-1 and i
    const double w = 0.5 * (tl(i - 1, j) + tl(i, j));
    const double g1 = (d_new.d1(i, j) - d_new.d1(i - 1, j)) / dx;
    const double g2 = (d_new.d2(i, j) - d_new.d2(i - 1, j)) / dx;
    return w * (g1 * 0.5 * (Dt1(i - 1, j) + Dt1(i, j)) + g2 * 0.5 * (Dt2(i - 1, j) + Dt2(i, j)));
  };
  auto flux_y = [&](int i, int j) {  // face between cells j-1 and j
    const double w = 0.5 * (tl(i, j - 1) + tl(i, j));
    const double g1 = (d_new.d1(i, j) - d_new.d1(i, j - 1)) / dy;
    const double g2 = (d_new.d2(i, j) - d_new.d2(i, j - 1)) / dy;
    return w * (g1 * 0.5 * (Dt1(i, j - 1) + Dt1(i, j)) + g2 * 0.5 * (Dt2(i, j - 1) + Dt2(i, j)));
  };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double fe = i + 1 < g.nx ? flux_x(i + 1, j) : 0.0;
      const double fw = i > 0 ? flux_x(i, j) : 0.0;
      const double fn = j + 1 < g.ny ? flux_y(i, j + 1) : 0.0;
      const double fs = j > 0 ? flux_y(i, j) : 0.0;
      h.couple(i, j) = (fe - fw) / dx + (fn - fs) / dy;
    }
  }
  return h;
}

Field temperature_step(const StateField& s, const CellCoefficients& c, const HeatSources& q,
                       double rho, double dt, double theta_floor, double tol) {
  const Grid& g = s.grid;
  Field shift = grid::cell_field(g);
  for (std::size_t k = 0; k < g.cells(); ++k) shift[k] = rho * c.kappa[k] / dt;
  const Field adv = grid::conservative_advection(g, s.u, s.theta);
  const Field src = q.total();
  Field rhs = grid::cell_field(g);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    rhs[k] = shift[k] * s.theta[k] - rho * c.kappa[k] * adv[k] + src[k];
  }
  Field theta = s.theta;
  solve_diffusion(g, c.alpha, shift, rhs, theta, tol, false, "temperature solve");
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!(theta(i, j) >= theta_floor)) {
        std::ostringstream msg;
        msg << "temperature " << theta(i, j) << " below the floor " << theta_floor
            << " in cell (" << i << ", " << j << ")";
        throw SolverAbort(s.t + dt, msg.str());
      }
    }
  }
  return theta;
}

void project(const Grid& g, Velocity& u, Field* phi_out, double tol) {
  const Field div = grid::divergence(g, u);
  Field rhs = grid::cell_field(g);
  double mean = 0.0;
  for (std::size_t k = 0; k < g.cells(); ++k) mean += div[k];
  mean /= static_cast<double>(g.cells());
  for (std::size_t k = 0; k < g.cells(); ++k) rhs[k] = -(div[k] - mean);
  const Field one = grid::cell_field(g, 1.0);
  const Field zero = grid::cell_field(g, 0.0);
  Field phi = grid::cell_field(g);
  solve_diffusion(g, one, zero, rhs, phi, tol, true, "pressure solve");
  grid::subtract_gradient(g, phi, 1.0, u);
  if (phi_out) *phi_out = std::move(phi);
}

MomentumUpdate momentum_step(const StateField& s, const CellCoefficients& c,
                             const EricksenStress& se, double rho, double dt, double tol,
                             double projection_tol) {
  const Grid& g = s.grid;
  const Field mu_n = grid::cell_to_node(g, c.mu);
  Velocity adv, force;
  grid::momentum_advection(g, s.u, adv);
  grid::tensor_divergence(g, se.sxx, se.syy, se.sxy, force);

  Velocity rhs = Velocity::zeros(g);
  for (std::size_t k = 0; k < rhs.ux.size(); ++k) {
    rhs.ux[k] = rho / dt * s.u.ux[k] + rho * adv.ux[k] + force.ux[k];
  }
  for (std::size_t k = 0; k < rhs.uy.size(); ++k) {
    rhs.uy[k] = rho / dt * s.u.uy[k] + rho * adv.uy[k] + force.uy[k];
  }
  for (int j = 0; j < g.ny; ++j) rhs.ux(0, j) = rhs.ux(g.nx, j) = 0.0;
  for (int i = 0; i < g.nx; ++i) rhs.uy(i, 0) = rhs.uy(i, g.ny) = 0.0;

  const double shift = rho / dt;
  linear::Vector b, x, diag;
  grid::flatten(rhs, b);
  grid::flatten(s.u, x);
  grid::flatten(grid::viscous_diagonal(g, c.mu, mu_n, shift), diag);
  Velocity xin = Velocity::zeros(g), yout = Velocity::zeros(g);
  auto op = [&](const linear::Vector& in, linear::Vector& out) {
    grid::unflatten(in, xin);
    grid::viscous_apply(g, c.mu, mu_n, shift, xin, yout);
    grid::flatten(yout, out);
  };
  linear::CgOptions opt;
  opt.rel_tol = tol;
  opt.label = "momentum solve";
  linear::pcg(op, diag, b, x, opt);

  MomentumUpdate out{Velocity::zeros(g), grid::cell_field(g)};
  grid::unflatten(x, out.u);
  // project() removes grad(psi) with -lap(psi) = -div(u*); the pressure is (rho/dt) psi.
  Field psi;
  project(g, out.u, &psi, projection_tol);
  for (std::size_t k = 0; k < g.cells(); ++k) out.pi[k] = rho / dt * psi[k];
  return out;
}

double cfl_limit(const StateField& s, const CellCoefficients& c, double rho, double cfl_safety) {
  const double h = std::min(s.grid.dx(), s.grid.dy());
  const double mu_max = max_abs(c.mu);
  const double u_max = std::max(max_abs(s.u.ux), max_abs(s.u.uy));
  const double inf = std::numeric_limits<double>::infinity();
  const double visc = mu_max > 0.0 ? rho * h * h / (4.0 * mu_max) : inf;
  const double conv = u_max > 0.0 ? h / u_max : inf;
  return cfl_safety * std::min(visc, conv);
}

StateField step(const StateField& s, const material::MaterialModel& m, const StepConfig& cfg,
                double dt) {
  const double rho = m.params.rho;
  const CellCoefficients c = freeze_coefficients(s, m);
  const double limit = cfl_limit(s, c, rho, cfg.cfl_safety);
  if (dt > limit) {
    std::ostringstream msg;
    msg << "time step " << dt << " exceeds the stability limit " << limit;
    throw SolverAbort(s.t, msg.str());
  }

  StateField next = s;
  DirectorUpdate d = director_step(s, c, dt, cfg.renormalize_director, cfg.solve_tol);
  const EricksenStress se = ericksen_stress(s, c, d.d1, d.d2);
  if (!cfg.isothermal) {
    const HeatSources q = heat_sources(s, c, d, se, rho, dt);
    next.theta = temperature_step(s, c, q, rho, dt, cfg.theta_floor, cfg.solve_tol);
  }
  if (!cfg.freeze_velocity) {
    MomentumUpdate mu = momentum_step(s, c, se, rho, dt, cfg.solve_tol, cfg.projection_tol);
    next.u = std::move(mu.u);
    next.pi = std::move(mu.pi);
  }
  next.d1 = std::move(d.d1);
  next.d2 = std::move(d.d2);
  next.d_drift = d.drift;
  next.t = s.t + dt;
  return next;
}

StateField run(const StateField& initial, const material::MaterialModel& m,
               const StepConfig& cfg, const std::function<void(const StateField&)>& observer,
               StateField* last_good) {
  validate(cfg);
  require_supported(m);
  StateField s = initial;
  if (cfg.freeze_velocity) {
    s.u = grid::Velocity::zeros(s.grid);
    s.pi = grid::cell_field(s.grid);
  }
  if (observer) observer(s);
  const double t0 = initial.t;
  const double span = std::max(0.0, cfg.t_end - t0);
  const auto steps = static_cast<long long>(std::ceil(span / cfg.dt - 1e-9));
  try {
    for (long long n = 1; n <= steps; ++n) {
      const double target = n == steps ? cfg.t_end : t0 + static_cast<double>(n) * cfg.dt;
      s = step(s, m, cfg, target - s.t);
      s.t = target;
      if (observer && (n % cfg.output_every == 0 || n == steps)) observer(s);
    }
  } catch (...) {
    if (last_good) *last_good = s;
    throw;
  }
  return s;
}

double NlevpResidual::l2(const Grid& g) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < r1.size(); ++k) sum += r1[k] * r1[k] + r2[k] * r2[k];
  return std::sqrt(sum * g.cell_area());
}

NlevpResidual nlevp_residual(const Grid& g, const Field& d1, const Field& d2, const Field& a) {
  const Field tau = grid::cell_tau(g, d1, d2);
  NlevpResidual r{grid::weighted_laplacian(g, a, d1), grid::weighted_laplacian(g, a, d2)};
  for (std::size_t k = 0; k < g.cells(); ++k) {
    r.r1[k] += a[k] * 2.0 * tau[k] * d1[k];
    r.r2[k] += a[k] * 2.0 * tau[k] * d2[k];
  }
  return r;
}

}  // namespace nematoflow::solver
