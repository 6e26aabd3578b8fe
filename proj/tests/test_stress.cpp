#include <doctest.h>

#include <cmath>

#include "nematoflow/consistency.hpp"
#include "nematoflow/error.hpp"
#include "nematoflow/stress.hpp"
#include "random_points.hpp"

using namespace nematoflow;
using namespace nematoflow::stress;

namespace {

double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(1.0, scale); }

}  // namespace

TEST_CASE("the random materials really are consistent") {
  for (const auto& m : testsupport::consistent_materials()) {
    CHECK(material::check_consistency(m.free_energy, m.params, {}).consistent());
  }
}

TEST_CASE("director and gradient identities of the analytic sampler") {
  testsupport::PointSampler ps(1);
  for (int n : {2, 3}) {
    for (int k = 0; k < 100; ++k) {
      const auto j = ps.director(n, 1.0);
      CHECK(std::abs(j.d.norm() - 1.0) < 1e-14);
      CHECK((j.grad_d * j.d).norm() < 1e-13 * std::max(1.0, j.grad_d.norm()));
      // d . lap d = -|grad d|^2 for a unit field.
      CHECK(rel(j.d.dot(j.laplacian), -j.grad_d.squaredNorm(), j.grad_d.squaredNorm()) < 1e-13);
    }
  }
}

TEST_CASE("orthogonality of n and a, and the dissipative-stress identity") {
  testsupport::PointSampler ps(2);
  for (const auto& m : testsupport::consistent_materials()) {
    for (int n : {2, 3}) {
      for (int k = 0; k < 50; ++k) {
        const auto p = ps.point(m, n);
        const auto b = assemble(m, p);
        const auto c = m.params.at(p.theta, p.tau);
        CHECK(std::abs(b.n_vec.dot(p.d)) <= 1e-12 * std::max(1.0, b.n_vec.norm()));
        CHECK(std::abs(b.a_vec.dot(p.d)) <= 1e-12 * std::max(1.0, p.div_lambda_grad_d.norm()));
        const auto [lhs, rhs] = diss_entropy_identity(c, b.n_vec, p.d, b.D, p.grad_u);
        CHECK(rel(lhs, rhs, std::abs(lhs) + std::abs(rhs)) < 1e-12);
      }
    }
  }
}

TEST_CASE("closed forms for a Newtonian-only material") {
  const auto m = material::default_material();
  testsupport::PointSampler ps(3);
  for (int k = 0; k < 100; ++k) {
    const auto p = ps.point(m, 2);
    const auto b = assemble(m, p);
    const auto c = m.params.at(p.theta, p.tau);
    const Mat D = 0.5 * (p.grad_u + p.grad_u.transpose());
    const double lambda = material::lambda_value(m.free_energy, {p.theta, p.tau, 1.0});
    CHECK((b.S_N - 2.0 * c.mu_s * D).norm() < 1e-14 * (1.0 + D.norm()));
    // S_E = -theta lambda grad d grad d^T, entry by entry.
    for (int i = 0; i < 2; ++i) {
      for (int jj = 0; jj < 2; ++jj) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l) s += p.grad_d(i, l) * p.grad_d(jj, l);
        CHECK(b.S_E(i, jj) == doctest::Approx(-p.theta * lambda * s).epsilon(1e-13).scale(1.0));
      }
    }
    CHECK(b.S_diss.norm() == 0.0);
    CHECK(b.S_stretch.norm() == doctest::Approx(0.0).scale(1.0));
    const double ra = 2.0 * c.mu_s * D.squaredNorm() + b.a_vec.squaredNorm() / c.gamma;
    CHECK(b.r_a == doctest::Approx(ra).epsilon(1e-13));
    const double r = ra / p.theta + c.alpha_0 * p.grad_theta.squaredNorm() / (p.theta * p.theta);
    CHECK(b.r == doctest::Approx(r).epsilon(1e-13));
    CHECK((b.q + c.alpha_0 * p.grad_theta).norm() < 1e-15 * (1.0 + p.grad_theta.norm()));
  }
}

TEST_CASE("stretch stress carries the antisymmetric coupling") {
  material::Coefficients c;
  c.mu_V = 0.3;
  c.mu_D = 0.1;
  c.gamma = 2.0;
  Vec d(2), nv(2);
  d << 1.0, 0.0;
  nv << 0.0, 1.0;
  const Mat s = stretch_stress(c, nv, d);
  // (mu_D + mu_V)/(2 gamma) n d^T + (mu_D - mu_V)/(2 gamma) d n^T
  CHECK(s(1, 0) == doctest::Approx(0.1));
  CHECK(s(0, 1) == doctest::Approx(-0.05));
  CHECK(s(0, 0) == 0.0);
}

TEST_CASE("entropy production is non-negative and vanishes at equilibrium") {
  testsupport::PointSampler ps(4);
  for (const auto& m : testsupport::consistent_materials()) {
    for (int n : {2, 3}) {
      for (int k = 0; k < 100; ++k) {
        const auto b = assemble(m, ps.point(m, n));
        CHECK(b.r >= 0.0);
        CHECK(b.r_a >= 0.0);
      }
      Vec d = ps.unit(n);
      const auto eq = KinematicPoint::make(Mat::Zero(n, n), d, Mat::Zero(n, n), Vec::Zero(n), 1.3,
                                           Vec::Zero(n), Vec::Zero(n));
      const auto b = assemble(m, eq);
      CHECK(b.r == 0.0);
      CHECK(b.r_a == 0.0);
    }
  }
}

TEST_CASE("preconditions") {
  Vec d(2);
  d << 1.0, 1e-4;
  CHECK_THROWS_AS(require_unit(d), PreconditionError);
  CHECK_THROWS_AS(ericksen_stress(0.0, 1.0, Mat::Zero(2, 2)), PreconditionError);
  const auto m = material::default_material();
  Vec u(2);
  u << 1.0, 0.0;
  auto p = KinematicPoint::make(Mat::Zero(2, 2), u, Mat::Identity(2, 2), Vec::Zero(2), 1.0,
                                Vec::Zero(2), Vec::Zero(2));
  p.tau = 0.0;
  CHECK_THROWS_AS(p.validate(), PreconditionError);
  p.tau = 1.0;
  p.theta = 0.0;
  CHECK_THROWS_AS(p.validate(), PreconditionError);
  p.theta = 1.0;
  p.grad_theta = Vec::Zero(3);
  CHECK_THROWS_AS(assemble(m, p), PreconditionError);
  DissipationInputs in{-1.0, Mat::Zero(2, 2), u, Vec::Zero(2), Vec::Zero(2)};
  CHECK_THROWS_AS(entropy_production(m.params.at(1.0, 0.0), in), PreconditionError);
}

TEST_CASE("projector and gradient split") {
  testsupport::PointSampler ps(5);
  const Vec d = ps.unit(3);
  const Mat P = projector(d);
  CHECK((P * d).norm() < 1e-15);
  CHECK((P * P - P).norm() < 1e-15);
  const Mat g = ps.gaussian(3, 3, 1.0);
  const auto [D, V] = decompose_gradient(g);
  CHECK((D + V - g).norm() < 1e-15);
  CHECK((D - D.transpose()).norm() == 0.0);
  CHECK((V + V.transpose()).norm() == 0.0);
}
