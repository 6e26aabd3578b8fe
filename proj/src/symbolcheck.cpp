#include "nematoflow/symbolcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "nematoflow/error.hpp"

namespace nematoflow::symbol {

namespace {

constexpr Complex kI{0.0, 1.0};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string num(Complex v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gi", v.real(), v.imag());
  return buf;
}

// Counter-based stream: every sample gets its own generator so a sweep is
// independent of how samples are split across threads.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t s_;
};

Vec random_unit(SplitMix& rng, int n) {
  Vec v(n);
  for (;;) {
    for (int k = 0; k < n; ++k) v(k) = rng.uniform(-1.0, 1.0);
    const double r = v.norm();
    if (r > 1e-3 && r <= 1.0) return v / r;
  }
}

Mat scaled_to_tau(Mat g, double tau) {
  const double norm = g.norm();
  if (norm == 0.0 || tau == 0.0) return Mat::Zero(g.rows(), g.cols());
  return g * (std::sqrt(2.0 * tau) / norm);
}

}  // namespace

FrozenCoefficients freeze(const material::MaterialModel& m, double theta0, const Mat& grad_d0,
                          const Vec& d0, FreezeMode mode) {
  const auto n = d0.size();
  if (grad_d0.rows() != n || grad_d0.cols() != n) {
    throw PreconditionError("grad_d0 must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  stress::require_unit(d0);
  if (!(theta0 > 0.0)) throw PreconditionError("theta0 must be positive");
  if ((grad_d0 * d0).norm() > 1e-10 * std::max(1.0, grad_d0.norm())) {
    throw PreconditionError("grad_d0 * d0 must vanish for a unit director field");
  }

  FrozenCoefficients fc;
  fc.theta0 = theta0;
  fc.tau0 = 0.5 * grad_d0.squaredNorm();
  fc.rho = m.params.rho;
  fc.grad_d0 = grad_d0;
  fc.d0 = d0;
  const material::ThermoState s{theta0, fc.tau0, fc.rho};
  const auto c = m.params.at(theta0, fc.tau0);
  fc.kappa0 = material::heat_capacity_value(m.free_energy, s);
  fc.alpha0 = c.alpha_0;
  fc.gamma0 = c.gamma;
  fc.lambda0 = material::lambda_value(m.free_energy, s);
  fc.dtau_lambda0 = material::dtau_lambda(m.free_energy, s);
  fc.dtau_eta0 = material::dtau_entropy(m.free_energy, s);

  auto require = [&](bool ok, const std::string& what) {
    if (!ok) {
      throw PreconditionError(what + " at theta0=" + num(theta0) + ", tau0=" + num(fc.tau0));
    }
  };
  require(fc.kappa0 > 0.0, "heat capacity is not positive");
  require(fc.alpha0 > 0.0, "alpha_0 is not positive");
  require(fc.gamma0 > 0.0, "gamma is not positive");
  require(fc.lambda0 > 0.0, "lambda is not positive");
  if (mode == FreezeMode::strict) {
    require(fc.lambda0 + 2.0 * fc.tau0 * fc.dtau_lambda0 > 0.0,
            "lambda + 2 tau dlambda/dtau is not positive");
  }

  fc.a0 = fc.alpha0 / (fc.rho * fc.kappa0);
  fc.a1 = fc.rho * theta0 * fc.dtau_eta0 * fc.dtau_eta0 / (fc.gamma0 * fc.kappa0);
  fc.b0 = theta0 * fc.dtau_eta0 / (fc.gamma0 * fc.kappa0);
  fc.b1 = fc.rho * fc.dtau_eta0 / fc.gamma0;
  return fc;
}

ReducedSymbol reduced_symbol(const FrozenCoefficients& fc, const Vec& xi) {
  if (xi.size() != fc.d0.size()) throw PreconditionError("xi has the wrong dimension");
  if (xi.norm() == 0.0) throw PreconditionError("xi must be nonzero");
  ReducedSymbol r;
  r.xi = xi;
  r.c = fc.grad_d0.transpose() * xi;
  r.c_sq = r.c.squaredNorm();
  const double xi_sq = xi.squaredNorm();
  const double s = fc.lambda0 * xi_sq + fc.dtau_lambda0 * r.c_sq;
  r.matrix << fc.a0 * xi_sq + fc.a1 * r.c_sq, -kI * fc.b0 * s, kI * fc.b1 * r.c_sq,
      s / fc.gamma0;
  r.E_red = boundary_matrix(fc);
  return r;
}

Mat2c boundary_matrix(const FrozenCoefficients& fc) {
  Mat2c e;
  e << fc.a0, -kI * fc.b0 * fc.lambda0, 0.0, fc.lambda0 / fc.gamma0;
  return e;
}

EllipticityVerdict check_normal_ellipticity(const FrozenCoefficients& fc, const Vec& xi) {
  const ReducedSymbol rs = reduced_symbol(fc, xi);
  const double tr = rs.matrix.trace().real();
  const double det = rs.matrix.determinant().real();
  double disc = tr * tr - 4.0 * det;
  if (disc < 0.0 && disc > -1e-12 * tr * tr) disc = 0.0;

  EllipticityVerdict v;
  const Complex sq = std::sqrt(Complex(disc, 0.0));
  const Complex q = -0.5 * (tr + (tr >= 0.0 ? sq : -sq));
  if (std::abs(q) > 0.0) {
    v.root1 = q;
    v.root2 = det / q;
  } else {
    v.root1 = v.root2 = 0.0;
  }
  if (std::abs(v.root1.real()) > std::abs(v.root2.real())) std::swap(v.root1, v.root2);

  const double scale = std::max(std::abs(v.root1), std::abs(v.root2));
  const bool real = std::abs(v.root1.imag()) <= 1e-12 * scale &&
                    std::abs(v.root2.imag()) <= 1e-12 * scale;
  const bool negative = v.root1.real() < 0.0 && v.root2.real() < 0.0;
  v.pass = real && negative;
  if (!real) {
    v.detail = "complex roots " + num(v.root1) + ", " + num(v.root2);
  } else if (!negative) {
    v.detail = "non-negative root " + num(std::max(v.root1.real(), v.root2.real()));
  }
  return v;
}

bool on_closed_negative_axis(Complex ev) {
  return ev.real() <= 0.0 && std::abs(ev.imag()) <= 1e-12 * std::abs(ev.real());
}

Mat2c principal_sqrt(const Mat2c& M) {
  Eigen::ComplexEigenSolver<Mat2c> es(M);
  if (es.info() == Eigen::Success) {
    const Mat2c V = es.eigenvectors();
    Eigen::JacobiSVD<Mat2c> svd(V);
    const auto sv = svd.singularValues();
    if (sv(1) > 0.0 && sv(0) / sv(1) < 1e8) {
      Eigen::Vector2cd r;
      for (int k = 0; k < 2; ++k) r(k) = std::sqrt(es.eigenvalues()(k));
      return V * r.asDiagonal() * V.inverse();
    }
  }
  Eigen::ComplexSchur<Mat2c> schur(M);
  const Mat2c U = schur.matrixU();
  const Mat2c T = schur.matrixT();
  Mat2c R = Mat2c::Zero();
  R(0, 0) = std::sqrt(T(0, 0));
  R(1, 1) = std::sqrt(T(1, 1));
  const Complex denom = R(0, 0) + R(1, 1);
  R(0, 1) = std::abs(denom) > 0.0 ? T(0, 1) / denom : Complex(0.0);
  return U * R * U.adjoint();
}

LsVerdict check_ls_matrix(const Mat2c& M) {
  LsVerdict v;
  Eigen::ComplexEigenSolver<Mat2c> es(M, false);
  v.eig_M = es.eigenvalues();
  for (int k = 0; k < 2; ++k) {
    if (on_closed_negative_axis(v.eig_M(k))) {
      v.pass = false;
      v.detail = "eigenvalue " + num(v.eig_M(k)) + " of E^-1(z + A) on (-inf, 0]";
      v.min_re_eig_B = 0.0;
      return v;
    }
  }
  const Mat2c B = principal_sqrt(M);
  Eigen::ComplexEigenSolver<Mat2c> eb(B, false);
  v.eig_B = eb.eigenvalues();
  v.min_re_eig_B = std::min(v.eig_B(0).real(), v.eig_B(1).real());
  Eigen::JacobiSVD<Mat2c> svd(B);
  v.min_singular_B = svd.singularValues()(1);
  const double tol = 1e-12 * std::max(1.0, svd.singularValues()(0));
  v.pass = v.min_re_eig_B > 0.0 && v.min_singular_B > tol;
  if (!(v.min_re_eig_B > 0.0)) {
    v.detail = "square root has eigenvalue with Re <= 0";
  } else if (!(v.min_singular_B > tol)) {
    v.detail = "square root is singular";
  }
  return v;
}

LsVerdict check_ls(const FrozenCoefficients& fc, const Vec& xi_tangent, Complex z) {
  const auto n = fc.d0.size();
  if (xi_tangent.size() != n - 1) throw PreconditionError("tangent xi must have n - 1 components");
  if (fc.grad_d0.row(n - 1).norm() != 0.0) {
    throw PreconditionError("the normal row of grad_d0 must vanish on the boundary");
  }
  if (std::abs(z) < 1e-6 && xi_tangent.norm() < 1e-6) {
    throw PreconditionError("(z, xi) too close to the origin");
  }
  if (on_closed_negative_axis(z) && std::abs(z) > 0.0) {
    throw PreconditionError("z must not lie on (-inf, 0)");
  }
  const Mat2c E = boundary_matrix(fc);
  if (std::abs(E.determinant()) == 0.0) throw PreconditionError("boundary matrix is singular");

  Mat2c A = Mat2c::Zero();
  if (xi_tangent.norm() > 0.0) {
    Vec xi = Vec::Zero(n);
    xi.head(n - 1) = xi_tangent;
    A = reduced_symbol(fc, xi).matrix;
  }
  const Mat2c M = E.inverse() * (z * Mat2c::Identity() + A);
  return check_ls_matrix(M);
}

std::size_t SweepReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.verdict != "pass"; }));
}

std::string SweepReport::csv() const {
  std::ostringstream o;
  o << "sample_id,theta0,tau0";
  for (int k = 1; k <= dim; ++k) o << ",xi_" << k;
  o << ",root1,root2,min_re_eig_B,verdict\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    o << buf;
  };
  for (const auto& r : rows) {
    o << r.sample_id;
    put(r.theta0);
    put(r.tau0);
    for (int k = 0; k < dim; ++k) put(k < r.xi.size() ? r.xi(k) : 0.0);
    put(r.root1.real());
    put(r.root2.real());
    put(r.min_re_eig_B);
    o << ',' << r.verdict << '\n';
  }
  return o.str();
}

namespace {

SweepRow sweep_sample(const material::MaterialModel& m, const SweepSpec& spec, std::size_t id) {
  SplitMix rng(spec.seed * 0x2545f4914f6cdd1dULL + id);
  const int n = spec.dim;
  SweepRow row;
  row.sample_id = id;
  row.theta0 = rng.uniform(spec.theta_min, spec.theta_max);
  row.tau0 = rng.uniform(spec.tau_min, spec.tau_max);
  const Vec d0 = random_unit(rng, n);
  Mat R(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) R(i, j) = rng.uniform(-1.0, 1.0);
  }
  const Mat P = stress::projector(d0);
  const Mat G = scaled_to_tau(R * P, row.tau0);
  const double log_lo = std::log(1e-2), log_hi = std::log(1e2);
  row.xi = random_unit(rng, n) * std::exp(rng.uniform(log_lo, log_hi));

  // Boundary state: the normal row of grad d0 vanishes (Neumann data), tau0 kept.
  Mat Gb = R * P;
  Gb.row(n - 1).setZero();
  Gb = scaled_to_tau(Gb, row.tau0);
  const Vec xt = random_unit(rng, n - 1) * std::exp(rng.uniform(log_lo, log_hi));

  FrozenCoefficients fc, fb;
  try {
    fc = freeze(m, row.theta0, G, d0, FreezeMode::permissive);
    fb = freeze(m, row.theta0, Gb, d0, FreezeMode::permissive);
  } catch (const Error& e) {
    row.verdict = "fail:freeze";
    row.detail = e.what();
    row.min_re_eig_B = std::nan("");
    return row;
  }

  const auto ne = check_normal_ellipticity(fc, row.xi);
  row.root1 = ne.root1;
  row.root2 = ne.root2;

  row.min_re_eig_B = std::numeric_limits<double>::infinity();
  std::string ls_detail;
  const int nr = std::max(spec.z_radii, 1);
  const int na = std::max(spec.z_angles, 1);
  for (int a = 0; a < na; ++a) {
    const double phi =
        na == 1 ? 0.0 : -0.5 * std::numbers::pi + std::numbers::pi * a / (na - 1);
    for (int k = 0; k < nr; ++k) {
      const double t = nr == 1 ? 0.0 : static_cast<double>(k) / (nr - 1);
      const double r = spec.z_radius_min * std::pow(spec.z_radius_max / spec.z_radius_min, t);
      const auto v = check_ls(fb, xt, std::polar(r, phi));
      row.min_re_eig_B = std::min(row.min_re_eig_B, v.min_re_eig_B);
      if (!v.pass && ls_detail.empty()) {
        ls_detail = "z=" + num(std::polar(r, phi)) + ": " + v.detail;
      }
    }
  }
  if (!ne.pass) {
    row.verdict = "fail:ellipticity";
    row.detail = ne.detail;
  } else if (!ls_detail.empty()) {
    row.verdict = "fail:ls";
    row.detail = ls_detail;
  } else {
    row.verdict = "pass";
  }
  return row;
}

}  // namespace

SweepReport run_sweep(const material::MaterialModel& m, const SweepSpec& spec) {
  if (spec.dim != 2 && spec.dim != 3) throw PreconditionError("sweep dimension must be 2 or 3");
  if (!(spec.theta_min > 0.0) || spec.theta_max < spec.theta_min || spec.tau_min < 0.0 ||
      spec.tau_max < spec.tau_min) {
    throw PreconditionError("sweep ranges are empty or inadmissible");
  }
  if (!(spec.z_radius_min > 0.0) || spec.z_radius_max < spec.z_radius_min) {
    throw PreconditionError("z radius range is empty");
  }
  SweepReport report;
  report.dim = spec.dim;
  report.rows.resize(spec.samples);
  const unsigned threads =
      std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(spec.samples)));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t, std::size_t begin, std::size_t end) {
    try {
      for (std::size_t id = begin; id < end; ++id) report.rows[id] = sweep_sample(m, spec, id);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads <= 1) {
    work(0, 0, spec.samples);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (spec.samples + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = std::min(spec.samples, t * chunk);
      const std::size_t e = std::min(spec.samples, b + chunk);
      pool.emplace_back(work, t, b, e);
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return report;
}

}  // namespace nematoflow::symbol
