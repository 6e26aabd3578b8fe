#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nematoflow::linear {

using Vector = std::vector<double>;
using Operator = std::function<void(const Vector& x, Vector& y)>;

struct CgOptions {
  double rel_tol = 1e-10;
  /// 0 means 10 * size.
  int max_iterations = 0;
  /// Keep iterates orthogonal to constants (singular Neumann problems).
  bool remove_mean = false;
  std::string label = "linear solve";
};

struct CgResult {
  int iterations = 0;
  double residual_norm = 0.0;
  double rhs_norm = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for a symmetric positive
/// (semi)definite operator. x carries the initial guess and the result.
/// Stops when |r| <= rel_tol |r0| or |r| <= 1e-14 |b|. Throws
/// ConvergenceError after max_iterations.
CgResult pcg(const Operator& A, const Vector& diagonal, const Vector& b, Vector& x,
             const CgOptions& options = {});

double dot(const Vector& a, const Vector& b);

}  // namespace nematoflow::linear
