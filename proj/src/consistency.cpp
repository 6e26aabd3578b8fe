#include "nematoflow/consistency.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "nematoflow/error.hpp"

namespace nematoflow::material {

namespace {

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

std::string_view set_name(InequalitySet s) {
  switch (s) {
    case InequalitySet::consist: return "consist";
    case InequalitySet::refined: return "refined";
    case InequalitySet::stable: return "stable";
  }
  return "?";
}

// One inequality: slack >= 0 (or > 1e-12 scale when strict). The evaluator
// returns {slack, scale}.
struct Check {
  InequalitySet set;
  std::string name;
  bool strict;
  std::function<std::pair<double, double>(const Coefficients&, const FreeEnergy&,
                                          const ThermoState&)>
      eval;
};

std::pair<double, double> sum(std::initializer_list<double> terms) {
  double s = 0.0;
  double scale = 0.0;
  for (double t : terms) {
    s += t;
    scale += std::abs(t);
  }
  return {s, scale};
}

std::vector<Check> build_checks(int n, bool compressible) {
  const double dn = n;
  std::vector<Check> out;
  auto add = [&](InequalitySet set, std::string name, bool strict, auto f) {
    out.push_back(Check{set, std::move(name), strict, f});
  };
  using C = const Coefficients&;
  using F = const FreeEnergy&;
  using S = const ThermoState&;

  const auto consist = InequalitySet::consist;
  add(consist, "mu_s", false, [](C c, F, S) { return sum({c.mu_s}); });
  add(consist, "2mu_s+n*mu_b", false,
      [dn](C c, F, S) { return sum({2.0 * c.mu_s, dn * c.mu_b}); });
  add(consist, "alpha_0", false, [](C c, F, S) { return sum({c.alpha_0}); });
  add(consist, "alpha_0+alpha_1", false,
      [](C c, F, S) { return sum({c.alpha_0, c.alpha_1}); });
  add(consist, "mu_0", false, [](C c, F, S) { return sum({c.mu_0}); });
  add(consist, "mu_L", false, [](C c, F, S) { return sum({c.mu_L}); });
  add(consist, "gamma", true, [](C c, F, S) { return sum({c.gamma}); });

  const auto refined = InequalitySet::refined;
  add(refined, "2mu_s+mu_L", false, [](C c, F, S) { return sum({2.0 * c.mu_s, c.mu_L}); });
  add(refined, "2mu_s+mu_0", false, [](C c, F, S) { return sum({2.0 * c.mu_s, c.mu_0}); });
  if (compressible) {
    add(refined, "compressible_mu_0", false, [dn](C c, F, S) {
      const double lhs = 2.0 * c.mu_s + c.mu_0;
      const double rhs = 2.0 * c.mu_s / dn + c.mu_b + c.mu_0 / (dn * dn);
      const double sq = c.mu_0 * c.mu_0 / (dn * dn);
      return std::pair{lhs * rhs - sq, std::abs(lhs * rhs) + sq};
    });
  }

  const auto stable = InequalitySet::stable;
  add(stable, "mu_s", true, [](C c, F, S) { return sum({c.mu_s}); });
  add(stable, "2mu_s+n*mu_b", true,
      [dn](C c, F, S) { return sum({2.0 * c.mu_s, dn * c.mu_b}); });
  add(stable, "alpha_0", true, [](C c, F, S) { return sum({c.alpha_0}); });
  add(stable, "alpha_0+alpha_1", true, [](C c, F, S) { return sum({c.alpha_0, c.alpha_1}); });
  add(stable, "gamma", true, [](C c, F, S) { return sum({c.gamma}); });
  add(stable, "kappa", true,
      [](C, F fe, S s) { return sum({heat_capacity_value(fe, s)}); });
  add(stable, "lambda", true, [](C, F fe, S s) { return sum({lambda_value(fe, s)}); });
  add(stable, "drho_pi", true, [](C, F fe, S s) { return sum({drho_pressure(fe, s)}); });
  add(stable, "lambda+2tau*dtau_lambda", true, [](C, F fe, S s) {
    return sum({lambda_value(fe, s), 2.0 * s.tau * dtau_lambda(fe, s)});
  });
  return out;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

}  // namespace

std::vector<std::array<double, 3>> halton(std::size_t count, std::uint64_t offset) {
  std::vector<std::array<double, 3>> pts(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t i = offset + k + 1;
    pts[k] = {radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5)};
  }
  return pts;
}

ConsistencyReport check_consistency(const FreeEnergy& fe, const ParameterSet& p,
                                    const SamplingDomain& domain) {
  auto bad = [](double lo, double hi) {
    return !std::isfinite(lo) || !std::isfinite(hi) || lo > hi;
  };
  if (domain.samples == 0) throw PreconditionError("sampling domain has no samples");
  if (bad(domain.theta_min, domain.theta_max) || domain.theta_min <= 0.0) {
    throw PreconditionError("sampling domain: need 0 < theta_min <= theta_max");
  }
  if (bad(domain.tau_min, domain.tau_max) || domain.tau_min < 0.0) {
    throw PreconditionError("sampling domain: need 0 <= tau_min <= tau_max");
  }
  if (domain.rho_range &&
      (bad(domain.rho_range->first, domain.rho_range->second) || domain.rho_range->first <= 0.0)) {
    throw PreconditionError("sampling domain: need 0 < rho_min <= rho_max");
  }
  if (p.n_dim != 2 && p.n_dim != 3) throw PreconditionError("n_dim must be 2 or 3");

  const bool compressible = domain.rho_range.has_value();
  const double rlo = compressible ? domain.rho_range->first : p.rho;
  const double rhi = compressible ? domain.rho_range->second : p.rho;

  std::vector<ThermoState> points;
  for (double th : {domain.theta_min, domain.theta_max}) {
    for (double ta : {domain.tau_min, domain.tau_max}) {
      points.push_back({th, ta, rlo});
      if (compressible) points.push_back({th, ta, rhi});
    }
  }
  for (const auto& h : halton(domain.samples, domain.seed)) {
    points.push_back({domain.theta_min + h[0] * (domain.theta_max - domain.theta_min),
                      domain.tau_min + h[1] * (domain.tau_max - domain.tau_min),
                      rlo + h[2] * (rhi - rlo)});
  }

  const auto checks = build_checks(p.n_dim, compressible);
  ConsistencyReport report;
  report.sample_count = points.size();
  report.rows.resize(checks.size());
  for (std::size_t k = 0; k < checks.size(); ++k) {
    auto& row = report.rows[k];
    row.id = std::string(set_name(checks[k].set)) + "/" + checks[k].name;
    row.set = checks[k].set;
    row.strict = checks[k].strict;
    row.min_slack = std::numeric_limits<double>::infinity();
  }

  double num = 0.0;
  double den = 0.0;
  std::vector<std::pair<double, double>> vg;
  vg.reserve(points.size());
  for (const auto& s : points) {
    const Coefficients c = p.at(s.theta, s.tau);
    for (std::size_t k = 0; k < checks.size(); ++k) {
      const auto [slack, scale] = checks[k].eval(c, fe, s);
      if (!std::isfinite(slack)) {
        throw EvaluationError("inequality " + report.rows[k].id + " is not finite at theta=" +
                              fmt(s.theta) + ", tau=" + fmt(s.tau));
      }
      auto& row = report.rows[k];
      const bool ok = checks[k].strict ? slack > 1e-12 * scale : slack >= 0.0;
      if (slack < row.min_slack) {
        row.min_slack = slack;
        row.arg_min_theta = s.theta;
        row.arg_min_tau = s.tau;
        row.arg_min_rho = s.rho;
      }
      if (!ok) row.pass = false;
    }
    num += c.mu_V * c.gamma;
    den += c.gamma * c.gamma;
    vg.emplace_back(c.mu_V, c.gamma);
  }
  report.c0_estimate = den > 0.0 ? num / den : 0.0;
  for (const auto& [v, g] : vg) {
    report.c0_residual = std::max(report.c0_residual, std::abs(v - report.c0_estimate * g));
  }
  return report;
}

bool ConsistencyReport::consistent() const {
  bool all_consist = true;
  bool core = true;
  bool refined = true;
  for (const auto& r : rows) {
    if (r.set == InequalitySet::consist) {
      all_consist = all_consist && r.pass;
      if (r.id != "consist/mu_0" && r.id != "consist/mu_L") core = core && r.pass;
    } else if (r.set == InequalitySet::refined) {
      refined = refined && r.pass;
    }
  }
  return all_consist || (core && refined);
}

bool ConsistencyReport::stable() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const auto& r) { return r.set != InequalitySet::stable || r.pass; });
}

const InequalityResult* ConsistencyReport::find(const std::string& id) const {
  for (const auto& r : rows) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::vector<std::string> ConsistencyReport::failures() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (!r.pass) out.push_back(r.id);
  }
  return out;
}

std::string ConsistencyReport::table() const {
  std::ostringstream o;
  o << "inequality                        strict  min_slack                 theta       tau         verdict\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-33s %-7s %-25.17g %-11.6g %-11.6g %s\n", r.id.c_str(),
                  r.strict ? ">" : ">=", r.min_slack, r.arg_min_theta, r.arg_min_tau,
                  r.pass ? "pass" : "FAIL");
    o << buf;
  }
  std::snprintf(buf, sizeof buf, "samples %zu\nc0 %.17g residual %.17g\n", sample_count,
                c0_estimate, c0_residual);
  o << buf;
  o << "consistent " << (consistent() ? "yes" : "no") << "\nstable " << (stable() ? "yes" : "no")
    << '\n';
  return o.str();
}

std::string ConsistencyReport::csv() const {
  std::ostringstream o;
  o << "inequality_id,min_slack,arg_min_theta,arg_min_tau,pass\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%d\n", r.id.c_str(), r.min_slack,
                  r.arg_min_theta, r.arg_min_tau, r.pass ? 1 : 0);
    o << buf;
  }
  return o.str();
}

}  // namespace nematoflow::material
