#include "nematoflow/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nematoflow/error.hpp"

namespace nematoflow::linear {

namespace {

void remove_mean(Vector& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  for (double& x : v) x -= m;
}

}  // namespace

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

CgResult pcg(const Operator& A, const Vector& diagonal, const Vector& b, Vector& x,
             const CgOptions& options) {
  const std::size_t n = b.size();
  CgResult result;
  result.rhs_norm = std::sqrt(dot(b, b));
  if (x.size() != n) x.assign(n, 0.0);
  if (result.rhs_norm == 0.0) {
    x.assign(n, 0.0);
    return result;
  }
  const int max_it = options.max_iterations > 0 ? options.max_iterations : static_cast<int>(10 * n);

  Vector r(n), z(n), p(n), q(n);
  if (options.remove_mean) remove_mean(x);
  A(x, q);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
  if (options.remove_mean) remove_mean(r);

  const double r0 = std::sqrt(dot(r, r));
  const double target = std::max(options.rel_tol * r0, 1e-14 * result.rhs_norm);
  double rnorm = r0;
  if (rnorm <= target) {
    result.residual_norm = rnorm;
    return result;
  }

  for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diagonal[k];
  if (options.remove_mean) remove_mean(z);
  p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= max_it; ++it) {
    A(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) {
      throw ConvergenceError(options.label + ": operator is not positive definite (p.Ap = " +
                             std::to_string(pq) + ")");
    }
    const double alpha = rz / pq;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * q[k];
    }
    rnorm = std::sqrt(dot(r, r));
    if (rnorm <= target) {
      if (options.remove_mean) remove_mean(x);
      result.iterations = it;
      result.residual_norm = rnorm;
      return result;
    }
    for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diagonal[k];
    if (options.remove_mean) remove_mean(z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  std::ostringstream msg;
  msg << options.label << ": no convergence after " << max_it << " iterations (|r| = " << rnorm
      << ", target " << target << ")";
  throw ConvergenceError(msg.str());
}

}  // namespace nematoflow::linear
