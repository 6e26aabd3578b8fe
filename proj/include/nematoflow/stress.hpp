#pragma once

#include <utility>

#include <Eigen/Dense>

#include "nematoflow/parameters.hpp"

// Point-wise constitutive algebra in n = 2 or 3 dimensions. Gradient
// conventions: grad_u(i, j) = du_i/dx_j, grad_d(i, j) = dd_j/dx_i.
namespace nematoflow::stress {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using material::Coefficients;

struct KinematicPoint {
  Mat grad_u;
  Vec d;
  Mat grad_d;
  Vec Dt_d;
  double theta = 1.0;
  Vec grad_theta;
  double tau = 0.0;
  /// div(lambda grad) d, supplied by the caller.
  Vec div_lambda_grad_d;

  /// Builds a point with tau computed from grad_d.
  static KinematicPoint make(Mat grad_u, Vec d, Mat grad_d, Vec Dt_d, double theta,
                             Vec grad_theta, Vec div_lambda_grad_d);
  /// Throws PreconditionError on shape mismatch, | |d| - 1 | > 1e-10,
  /// theta <= 0, or a tau inconsistent with grad_d.
  void validate() const;
};

struct StressBundle {
  Mat D, V;
  Mat S_N, S_E, S_stretch, S_diss;
  Vec n_vec, a_vec, q;
  double r = 0.0;
  double r_a = 0.0;

  Mat total() const { return S_N + S_E + S_stretch + S_diss; }
};

/// Throws PreconditionError when | |d| - 1 | > 1e-10.
void require_unit(const Vec& d);
Mat projector(const Vec& d);

std::pair<Mat, Mat> decompose_gradient(const Mat& grad_u);
Mat newton_stress(const Coefficients& c, const Mat& D, double div_u);
Mat ericksen_stress(double lambda, double theta, const Mat& grad_d);
Vec a_vector(double lambda, const Mat& grad_d, const Vec& div_lambda_grad_d, const Vec& d);
Vec n_vector(const Coefficients& c, const Mat& V, const Mat& D, const Vec& d, const Vec& Dt_d);
Mat stretch_stress(const Coefficients& c, const Vec& n_vec, const Vec& d);
Mat dissipative_stress(const Coefficients& c, const Vec& n_vec, const Vec& d, const Mat& D);

/// Returns (S_diss : grad_u, closed form). The closed form holds when
/// Dt_d is orthogonal to d.
std::pair<double, double> diss_entropy_identity(const Coefficients& c, const Vec& n_vec,
                                                const Vec& d, const Mat& D, const Mat& grad_u);

Vec heat_flux(const Coefficients& c, const Vec& grad_theta, const Vec& d);

/// Inputs shared by the two dissipation scalars. a_vec is P_d div(lambda grad) d.
struct DissipationInputs {
  double theta = 1.0;
  Mat D;
  Vec d;
  Vec grad_theta;
  Vec a_vec;
};

/// Entropy production r. Throws PreconditionError when theta <= 0.
double entropy_production(const Coefficients& c, const DissipationInputs& in);
/// Available-energy dissipation r_a (r times theta without the conduction term).
double available_dissipation(const Coefficients& c, const DissipationInputs& in);

/// Evaluates everything at one point. lambda is taken from the free energy
/// at (theta, tau, rho).
StressBundle assemble(const material::MaterialModel& m, const KinematicPoint& k);

}  // namespace nematoflow::stress
