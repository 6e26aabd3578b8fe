#include "nematoflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "nematoflow/error.hpp"
#include "nematoflow/stress.hpp"

namespace nematoflow::diagnostics {

namespace {

using solver::Field;
using solver::Grid;

double sum(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s;
}

}  // namespace

Field entropy_production_field(const StateField& s, const material::MaterialModel& m) {
  const Grid& g = s.grid;
  const double dx = g.dx(), dy = g.dy();
  const Field tau = grid::cell_tau(g, s.d1, s.d2);
  const auto e = grid::strain(g, s.u);

  Field lambda = grid::cell_field(g);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    lambda[k] = material::lambda_value(m.free_energy, {s.theta[k], tau[k], m.params.rho});
  }
  const Field lap1 = grid::weighted_laplacian(g, lambda, s.d1);
  const Field lap2 = grid::weighted_laplacian(g, lambda, s.d2);

  Field r = grid::cell_field(g);
  stress::DissipationInputs in;
  in.D = stress::Mat(2, 2);
  in.d = stress::Vec(2);
  in.grad_theta = stress::Vec(2);
  in.a_vec = stress::Vec(2);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double shear =
          0.125 * (e.gxy(i, j) + e.gxy(i + 1, j) + e.gxy(i, j + 1) + e.gxy(i + 1, j + 1));
      in.D << e.exx(i, j), shear, shear, e.eyy(i, j);
      in.theta = s.theta(i, j);
      in.grad_theta << (s.theta.mirrored(i + 1, j) - s.theta.mirrored(i - 1, j)) / (2.0 * dx),
          (s.theta.mirrored(i, j + 1) - s.theta.mirrored(i, j - 1)) / (2.0 * dy);
      in.d << s.d1(i, j), s.d2(i, j);
      in.d.normalize();
      const double lam = lambda(i, j);
      in.a_vec << lap1(i, j), lap2(i, j);
      in.a_vec += lam * 2.0 * tau(i, j) * in.d;
      const auto c = m.params.at(s.theta(i, j), tau(i, j));
      r(i, j) = stress::entropy_production(c, in);
    }
  }
  return r;
}

DiagnosticsRecord totals(const StateField& s, const material::MaterialModel& m) {
  const Grid& g = s.grid;
  const double dA = g.cell_area();
  const double rho = m.params.rho;
  const Field tau = grid::cell_tau(g, s.d1, s.d2);
  Field ucx, ucy;
  grid::cell_velocity(g, s.u, ucx, ucy);

  DiagnosticsRecord r;
  r.t = s.t;
  r.d_drift = s.d_drift;
  r.theta_min = s.theta[0];
  r.theta_max = s.theta[0];
  double kin = 0.0, eps = 0.0, eta = 0.0, psi = 0.0, u2 = 0.0, t2 = 0.0;
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const material::ThermoState ts{s.theta[k], tau[k], rho};
    const double q = ucx[k] * ucx[k] + ucy[k] * ucy[k];
    u2 += q;
    kin += 0.5 * rho * q;
    eps += rho * material::internal_energy(m.free_energy, ts);
    eta += rho * material::entropy(m.free_energy, ts);
    psi += rho * material::free_energy(m.free_energy, ts);
    t2 += 2.0 * tau[k];
    r.theta_min = std::min(r.theta_min, s.theta[k]);
    r.theta_max = std::max(r.theta_max, s.theta[k]);
  }
  r.mass = rho * static_cast<double>(g.cells()) * dA;
  r.energy = (kin + eps) * dA;
  r.entropy = eta * dA;
  r.available_energy = (kin + psi) * dA;
  r.u_l2 = std::sqrt(u2 * dA);
  r.grad_d_l2 = std::sqrt(t2 * dA);
  r.grad_theta_l2 = std::sqrt(grid::gradient_energy(g, s.theta));
  r.entropy_production = sum(entropy_production_field(s, m)) * dA;
  const Field div = grid::divergence(g, s.u);
  for (double v : div.values()) r.div_u_max = std::max(r.div_u_max, std::abs(v));
  return r;
}

std::string csv_header() {
  return "t,mass,energy,entropy,available_energy,entropy_production,d_drift,u_l2,"
         "grad_theta_l2,grad_d_l2,theta_min,theta_max,div_u_max";
}

std::string csv_row(const DiagnosticsRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                r.t, r.mass, r.energy, r.entropy, r.available_energy, r.entropy_production,
                r.d_drift, r.u_l2, r.grad_theta_l2, r.grad_d_l2, r.theta_min, r.theta_max,
                r.div_u_max);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& series) {
  out << csv_header() << '\n';
  for (const auto& r : series) out << csv_row(r) << '\n';
}

std::vector<DiagnosticsRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) {
    throw PreconditionError("diagnostics CSV: unexpected header");
  }
  std::vector<DiagnosticsRecord> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw PreconditionError("diagnostics CSV line " + std::to_string(row) +
                                ": bad number '" + cell + "'");
      }
    }
    if (v.size() != 13) {
      throw PreconditionError("diagnostics CSV line " + std::to_string(row) + ": expected 13 columns");
    }
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11],
                   v[12]});
  }
  return out;
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series, double lo,
                        double hi, std::size_t min_samples) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, d] : series) {
    if (d >= lo && d <= hi && std::isfinite(t)) pts.emplace_back(t, std::log(d));
  }
  if (pts.size() < std::max<std::size_t>(min_samples, 2)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "decay fit: %zu samples with distance in [%g, %g], need %zu",
                  pts.size(), lo, hi, min_samples);
    throw FitError(buf);
  }
  const double n = static_cast<double>(pts.size());
  double mt = 0.0, my = 0.0;
  for (const auto& [t, y] : pts) {
    mt += t;
    my += y;
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0;
  for (const auto& [t, y] : pts) {
    stt += (t - mt) * (t - mt);
    sty += (t - mt) * (y - my);
  }
  if (!(stt > 0.0)) throw FitError("decay fit: all samples at the same time");
  DecayFit fit;
  const double slope = sty / stt;
  fit.rate = -slope;
  fit.intercept = my - slope * mt;
  fit.samples = pts.size();
  double ss = 0.0;
  for (const auto& [t, y] : pts) {
    const double e = y - (fit.intercept + slope * t);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  if (!(fit.rate > 0.0)) throw FitError("decay fit: series does not decay");
  return fit;
}

namespace {

bool is_constant(const Field& f) {
  return std::all_of(f.values().begin(), f.values().end(),
                     [&](double v) { return v == f.values().front(); });
}

}  // namespace

// Constant fields return their value exactly so that an exact equilibrium
// has distance exactly zero.
Reference mean_reference(const StateField& s) {
  const double n = static_cast<double>(s.grid.cells());
  Reference r;
  r.theta_star = is_constant(s.theta) ? s.theta[0] : sum(s.theta) / n;
  if (is_constant(s.d1) && is_constant(s.d2)) {
    r.d1 = s.d1[0];
    r.d2 = s.d2[0];
    return r;
  }
  const double m1 = sum(s.d1) / n, m2 = sum(s.d2) / n;
  const double norm = std::hypot(m1, m2);
  if (norm > 0.0) {
    r.d1 = m1 / norm;
    r.d2 = m2 / norm;
  }
  return r;
}

double equilibrium_distance(const StateField& s, const std::optional<Reference>& ref_in) {
  const Grid& g = s.grid;
  const Reference ref = ref_in ? *ref_in : mean_reference(s);
  Field ucx, ucy;
  grid::cell_velocity(g, s.u, ucx, ucy);
  const Field tau = grid::cell_tau(g, s.d1, s.d2);
  double u2 = 0.0, th2 = 0.0, d2 = 0.0, gd2 = 0.0;
  for (std::size_t k = 0; k < g.cells(); ++k) {
    u2 += ucx[k] * ucx[k] + ucy[k] * ucy[k];
    const double dt = s.theta[k] - ref.theta_star;
    th2 += dt * dt;
    const double e1 = s.d1[k] - ref.d1, e2 = s.d2[k] - ref.d2;
    d2 += e1 * e1 + e2 * e2;
    gd2 += 2.0 * tau[k];
  }
  const double dA = g.cell_area();
  return std::sqrt(u2 * dA) + std::sqrt(th2 * dA) + std::sqrt(d2 * dA) + std::sqrt(gd2 * dA);
}

SecondVariation second_variation(const solver::Grid& g, const material::MaterialModel& m,
                                 double rho_star, double theta_star, const PerturbationTriple& p,
                                 bool include_density) {
  const material::ThermoState s{theta_star, 0.0, rho_star};
  const double kappa = material::heat_capacity_value(m.free_energy, s);
  const double lambda = material::lambda_value(m.free_energy, s);
  const double dpi = material::drho_pressure(m.free_energy, s);
  SecondVariation out;
  if (!(kappa > 0.0) || !(lambda > 0.0) || (include_density && !(dpi > 0.0))) {
    out.warning = "material is not strictly stable at the equilibrium (kappa, lambda or "
                  "dpi/drho not positive)";
  }
  const double dA = g.cell_area();
  double sig = 0.0, var = 0.0;
  for (std::size_t k = 0; k < g.cells(); ++k) {
    if (include_density) sig += p.sigma[k] * p.sigma[k];
    var += p.vartheta[k] * p.vartheta[k];
  }
  double value = kappa / (theta_star * theta_star) * var * dA;
  if (include_density) value += dpi / (rho_star * theta_star) * sig * dA;
  value += lambda * (grid::gradient_energy(g, p.delta1) + grid::gradient_energy(g, p.delta2));
  out.value = value;
  return out;
}

EnergyDefect energy_identity_defect(const std::vector<DiagnosticsRecord>& series,
                                    double entropy_tolerance) {
  if (series.size() < 2) throw PreconditionError("energy identity needs at least 2 records");
  EnergyDefect d;
  const double e0 = series.front().energy;
  const double scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    d.max_relative_energy_defect =
        std::max(d.max_relative_energy_defect, std::abs(series[k].energy - e0) / scale);
    const double jump = std::abs(series[k].energy - series[k - 1].energy);
    if (jump > d.largest_jump) {
      d.largest_jump = jump;
      d.largest_jump_index = k;
    }
    const double inc = series[k].entropy - series[k - 1].entropy;
    d.entropy_increments.push_back(inc);
    if (inc < -entropy_tolerance) d.entropy_decreases.push_back(k);
  }
  return d;
}

}  // namespace nematoflow::diagnostics
