#include "nematoflow/stress.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "nematoflow/error.hpp"

namespace nematoflow::stress {

namespace {

Mat outer(const Vec& a, const Vec& b) { return a * b.transpose(); }

double contract(const Mat& A, const Mat& B) { return A.cwiseProduct(B).sum(); }

}  // namespace

KinematicPoint KinematicPoint::make(Mat grad_u, Vec d, Mat grad_d, Vec Dt_d, double theta,
                                    Vec grad_theta, Vec div_lambda_grad_d) {
  KinematicPoint k;
  k.tau = 0.5 * grad_d.squaredNorm();
  k.grad_u = std::move(grad_u);
  k.d = std::move(d);
  k.grad_d = std::move(grad_d);
  k.Dt_d = std::move(Dt_d);
  k.theta = theta;
  k.grad_theta = std::move(grad_theta);
  k.div_lambda_grad_d = std::move(div_lambda_grad_d);
  return k;
}

void KinematicPoint::validate() const {
  const auto n = d.size();
  if (n != 2 && n != 3) throw PreconditionError("dimension must be 2 or 3");
  if (grad_u.rows() != n || grad_u.cols() != n || grad_d.rows() != n || grad_d.cols() != n ||
      Dt_d.size() != n || grad_theta.size() != n || div_lambda_grad_d.size() != n) {
    throw PreconditionError("kinematic point has inconsistent shapes");
  }
  require_unit(d);
  if (!(theta > 0.0)) throw PreconditionError("theta must be positive");
  const double t = 0.5 * grad_d.squaredNorm();
  if (std::abs(tau - t) > 1e-14 * std::max(1.0, t)) {
    throw PreconditionError("tau does not match grad_d");
  }
}

void require_unit(const Vec& d) {
  if (!(std::abs(d.norm() - 1.0) <= 1e-10)) {
    throw PreconditionError("director is not a unit vector (|d| = " + std::to_string(d.norm()) +
                            ")");
  }
}

Mat projector(const Vec& d) {
  return Mat::Identity(d.size(), d.size()) - outer(d, d);
}

std::pair<Mat, Mat> decompose_gradient(const Mat& grad_u) {
  if (grad_u.rows() != grad_u.cols()) throw PreconditionError("velocity gradient must be square");
  const Mat t = grad_u.transpose();
  return {0.5 * (grad_u + t), 0.5 * (grad_u - t)};
}

Mat newton_stress(const Coefficients& c, const Mat& D, double div_u) {
  return 2.0 * c.mu_s * D + c.mu_b * div_u * Mat::Identity(D.rows(), D.cols());
}

Mat ericksen_stress(double lambda, double theta, const Mat& grad_d) {
  if (!(lambda > 0.0)) throw PreconditionError("lambda must be positive");
  return -theta * lambda * (grad_d * grad_d.transpose());
}

Vec a_vector(double lambda, const Mat& grad_d, const Vec& div_lambda_grad_d, const Vec& d) {
  require_unit(d);
  return div_lambda_grad_d + lambda * grad_d.squaredNorm() * d;
}

Vec n_vector(const Coefficients& c, const Mat& V, const Mat& D, const Vec& d, const Vec& Dt_d) {
  require_unit(d);
  return c.mu_V * (V * d) + c.mu_D * (projector(d) * (D * d)) - c.gamma * Dt_d;
}

Mat stretch_stress(const Coefficients& c, const Vec& n_vec, const Vec& d) {
  require_unit(d);
  return (c.mu_D + c.mu_V) / (2.0 * c.gamma) * outer(n_vec, d) +
         (c.mu_D - c.mu_V) / (2.0 * c.gamma) * outer(d, n_vec);
}

Mat dissipative_stress(const Coefficients& c, const Vec& n_vec, const Vec& d, const Mat& D) {
  require_unit(d);
  const Vec Dd = D * d;
  const Vec pDd = projector(d) * Dd;
  const Mat nd = outer(n_vec, d);
  const Mat pd = outer(pDd, d);
  return c.mu_P / c.gamma * (nd + nd.transpose()) +
         (c.gamma * c.mu_L + c.mu_P * c.mu_P) / (2.0 * c.gamma) * (pd + pd.transpose()) +
         c.mu_0 * Dd.dot(d) * outer(d, d);
}

std::pair<double, double> diss_entropy_identity(const Coefficients& c, const Vec& n_vec,
                                                const Vec& d, const Mat& D, const Mat& grad_u) {
  const double lhs = contract(dissipative_stress(c, n_vec, d, D), grad_u);
  const Vec Dd = D * d;
  const Vec pDd = projector(d) * Dd;
  const double dd = Dd.dot(d);
  const double rhs = 2.0 * c.mu_P / c.gamma * n_vec.dot(pDd) +
                     (c.mu_L + c.mu_P * c.mu_P / c.gamma) * pDd.squaredNorm() +
                     c.mu_0 * dd * dd;
  return {lhs, rhs};
}

Vec heat_flux(const Coefficients& c, const Vec& grad_theta, const Vec& d) {
  require_unit(d);
  return -c.alpha_0 * grad_theta - c.alpha_1 * d.dot(grad_theta) * d;
}

double available_dissipation(const Coefficients& c, const DissipationInputs& in) {
  require_unit(in.d);
  const Vec Dd = in.D * in.d;
  const Vec pDd = projector(in.d) * Dd;
  const double dd = Dd.dot(in.d);
  const double tr = in.D.trace();
  return 2.0 * c.mu_s * in.D.squaredNorm() + c.mu_b * tr * tr + c.mu_0 * dd * dd +
         c.mu_L * pDd.squaredNorm() + (in.a_vec - c.mu_P * pDd).squaredNorm() / c.gamma;
}

double entropy_production(const Coefficients& c, const DissipationInputs& in) {
  if (!(in.theta > 0.0)) throw PreconditionError("theta must be positive");
  const double g = in.d.dot(in.grad_theta);
  const double conduction =
      (c.alpha_0 * in.grad_theta.squaredNorm() + c.alpha_1 * g * g) / in.theta;
  return (conduction + available_dissipation(c, in)) / in.theta;
}

StressBundle assemble(const material::MaterialModel& m, const KinematicPoint& k) {
  k.validate();
  const material::ThermoState s{k.theta, k.tau, m.params.rho};
  const Coefficients c = m.params.at(k.theta, k.tau);
  const double lambda = material::lambda_coeff(m.free_energy, s);

  StressBundle b;
  std::tie(b.D, b.V) = decompose_gradient(k.grad_u);
  b.S_N = newton_stress(c, b.D, k.grad_u.trace());
  b.S_E = ericksen_stress(lambda, k.theta, k.grad_d);
  b.n_vec = n_vector(c, b.V, b.D, k.d, k.Dt_d);
  b.a_vec = a_vector(lambda, k.grad_d, k.div_lambda_grad_d, k.d);
  b.S_stretch = stretch_stress(c, b.n_vec, k.d);
  b.S_diss = dissipative_stress(c, b.n_vec, k.d, b.D);
  b.q = heat_flux(c, k.grad_theta, k.d);
  const DissipationInputs in{k.theta, b.D, k.d, k.grad_theta, b.a_vec};
  b.r = entropy_production(c, in);
  b.r_a = available_dissipation(c, in);
  return b;
}

}  // namespace nematoflow::stress
