#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>

#include "nematoflow/error.hpp"
#include "nematoflow/material.hpp"
#include "nematoflow/parameters.hpp"

using namespace nematoflow;
using namespace nematoflow::material;

namespace {

// Hand-derived closed forms for psi = -a t (ln t - 1) + (k0 + k1 t) tau / rho + b ln rho.
struct CoupledOracle {
  double a, k0, k1, b;
  double eta(const ThermoState& s) const { return a * std::log(s.theta) - k1 * s.tau / s.rho; }
  double eps(const ThermoState& s) const { return a * s.theta + k0 * s.tau / s.rho + b * std::log(s.rho); }
  double kappa(const ThermoState&) const { return a; }
  double lambda(const ThermoState& s) const { return (k0 + k1 * s.theta) / s.theta; }
  double pi(const ThermoState& s) const { return -(k0 + k1 * s.theta) * s.tau + b * s.rho; }
};

}  // namespace

TEST_CASE("coupled form matches hand-derived thermodynamic relations") {
  const CoupledOracle o{2.0, 0.3, 0.7, 1.5};
  const auto fe = coupled(o.a, o.k0, o.k1, o.b);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> th(0.2, 5.0), ta(0.0, 3.0), rh(0.5, 2.0);
  for (int i = 0; i < 200; ++i) {
    const ThermoState s{th(rng), ta(rng), rh(rng)};
    CHECK(entropy(fe, s) == doctest::Approx(o.eta(s)).epsilon(1e-12));
    CHECK(internal_energy(fe, s) == doctest::Approx(o.eps(s)).epsilon(1e-12));
    CHECK(heat_capacity(fe, s) == doctest::Approx(o.kappa(s)).epsilon(1e-12));
    CHECK(lambda_coeff(fe, s) == doctest::Approx(o.lambda(s)).epsilon(1e-12));
    CHECK(pressure(fe, s) == doctest::Approx(o.pi(s)).epsilon(1e-12).scale(1.0));
    CHECK(drho_pressure(fe, s) == doctest::Approx(o.b).epsilon(1e-12));
    CHECK(dtau_entropy(fe, s) == doctest::Approx(-o.k1 / s.rho).epsilon(1e-12));
    CHECK(dtau_internal_energy(fe, s) == doctest::Approx(o.k0 / s.rho).epsilon(1e-12));
    CHECK(dtau_lambda(fe, s) == doctest::Approx(0.0));
  }
}

TEST_CASE("quadratic form has lambda = k + k2 tau") {
  const auto fe = quadratic(2.0, 0.5, 0.1);
  for (double tau : {0.0, 0.3, 2.0}) {
    const ThermoState s{1.7, tau, 1.0};
    CHECK(lambda_coeff(fe, s) == doctest::Approx(0.5 + 0.1 * tau).epsilon(1e-12));
    CHECK(dtau_lambda(fe, s) == doctest::Approx(0.1).epsilon(1e-12));
  }
}

TEST_CASE("analytic partials agree with finite differences of the value") {
  for (const auto& fe : {ideal_linear(2.0, 0.5), coupled(2.0, 0.25, 0.25), quadratic(2.0, 0.5, 0.1)}) {
    const ThermoState s{1.3, 0.4, 1.1};
    for (int p = 0; p < kPartialCount; ++p) {
      const auto part = static_cast<Partial>(p);
      const double an = fe.partial(part, s);
      const double fd = fe.finite_difference(part, s);
      CAPTURE(fe.name());
      CAPTURE(partial_name(part));
      CHECK(fd == doctest::Approx(an).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("a form without analytic partials falls back to finite differences") {
  FreeEnergy fe("cubic", [](const ThermoState& s) { return s.theta * s.theta * s.theta + s.tau * s.tau; });
  const ThermoState s{1.5, 0.5, 1.0};
  CHECK_FALSE(fe.has_analytic(Partial::theta));
  CHECK(fe.partial(Partial::theta, s) == doctest::Approx(3 * 1.5 * 1.5).epsilon(1e-8));
  CHECK(fe.partial(Partial::tau_tau, s) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("admissibility and sign preconditions") {
  const auto fe = ideal_linear(2.0, 0.5);
  CHECK_THROWS_AS(entropy(fe, {0.0, 0.0, 1.0}), PreconditionError);
  CHECK_THROWS_AS(entropy(fe, {1.0, -0.1, 1.0}), PreconditionError);
  CHECK_THROWS_AS(entropy(fe, {1.0, 0.0, 0.0}), PreconditionError);
  CHECK_THROWS_AS(heat_capacity(ideal_linear(-1.0, 0.5), {1.0, 0.0, 1.0}), EvaluationError);
  CHECK_THROWS_AS(lambda_coeff(ideal_linear(2.0, -0.5), {1.0, 0.0, 1.0}), EvaluationError);
  CHECK(heat_capacity_value(ideal_linear(-1.0, 0.5), {1.0, 0.0, 1.0}) == doctest::Approx(-1.0));
}

TEST_CASE("catalog construction by name") {
  const auto fe = make_free_energy("ideal_linear", {{"k", 0.75}});
  CHECK(lambda_coeff(fe, {1.0, 0.0, 1.0}) == doctest::Approx(0.75));
  CHECK_THROWS_AS(make_free_energy("ideal_linear", {{"k2", 1.0}}), PreconditionError);
  CHECK_THROWS_AS(make_free_energy("nope", {}), PreconditionError);
  CHECK(catalog_defaults("quadratic").at("k2") == doctest::Approx(0.1));
}

TEST_CASE("Oseen-Frank density") {
  const Eigen::Vector3d d(0, 0, 1);
  CHECK(oseen_frank_density(d, Eigen::Matrix3d::Zero(), {}) == 0.0);
  CHECK_THROWS_AS(oseen_frank_density(Eigen::Vector3d(0, 0, 1.1), Eigen::Matrix3d::Zero(), {}),
                  PreconditionError);

  // With equal constants and k4 = 0 the density reduces to |grad d|^2 for any gradient.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 50; ++i) {
    Eigen::Vector3d dd(n01(rng), n01(rng), n01(rng));
    dd.normalize();
    Eigen::Matrix3d g;
    for (int k = 0; k < 9; ++k) g(k / 3, k % 3) = n01(rng);
    CHECK(oseen_frank_density(dd, g, {1, 1, 1, 0}) ==
          doctest::Approx(g.squaredNorm()).epsilon(1e-12));
  }

  // Pure splay: d = (x, 0, 0) locally, grad_d = e_x e_x.
  Eigen::Matrix3d splay = Eigen::Matrix3d::Zero();
  splay(0, 0) = 1.0;
  CHECK(oseen_frank_density(Eigen::Vector3d(1, 0, 0), splay, {2.0, 0, 0, 0}) == doctest::Approx(2.0));
  // Twist about the director: d along z, curl d = (0,0,c) from d_y varying in x.
  Eigen::Matrix3d twist = Eigen::Matrix3d::Zero();
  twist(0, 1) = 1.0;  // d d_y / dx = 1 gives curl_z = 1
  CHECK(oseen_frank_density(Eigen::Vector3d(0, 0, 1), twist, {0, 0, 3.0, -0.0}) ==
        doctest::Approx(3.0));
}

TEST_CASE("parameter rules") {
  CHECK(ParameterRule::parse("0.5")(1.0, 0.0) == 0.5);
  CHECK(ParameterRule::parse("linear 1 0.5 2")(2.0, 0.25) == doctest::Approx(2.5));
  CHECK(ParameterRule::parse("power 2 0.5")(4.0, 0.0) == doctest::Approx(4.0));
  CHECK(ParameterRule::parse("arrhenius 1 1")(1.0, 0.0) == doctest::Approx(std::exp(1.0)));
  CHECK_THROWS_AS(ParameterRule::parse("linear 1 2"), PreconditionError);
  CHECK_THROWS_AS(ParameterRule::parse("cubic 1"), PreconditionError);
  CHECK_THROWS_AS(ParameterRule::parse("1 x"), PreconditionError);
  const auto r = ParameterRule::linear(0.1, 1.0 / 3.0, 0.0);
  CHECK(ParameterRule::parse(r.describe())(1.7, 0.3) == r(1.7, 0.3));

  ParameterSet p;
  p.mu_s = ParameterRule::power(1.0, -1.0);
  CHECK(p.rule("mu_s") == &p.mu_s);
  CHECK(std::as_const(p).rule("gamma") == &p.gamma);
  CHECK(p.rule("mu_x") == nullptr);
  CHECK(ParameterSet::rule_names().size() == 10);
  p.mu_s = ParameterRule::arrhenius(1.0, 1000.0);
  try {
    (void)p.at(1e-3, 0.0);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("mu_s") != std::string::npos);
  }
}
