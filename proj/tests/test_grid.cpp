#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "nematoflow/error.hpp"
#include "nematoflow/grid.hpp"
#include "nematoflow/linear_solver.hpp"

using namespace nematoflow;
using namespace nematoflow::grid;
using std::numbers::pi;

namespace {

struct Rand {
  std::mt19937_64 rng{99};
  std::normal_distribution<double> n01;
  void fill(Field& f) {
    for (auto& v : f.values()) v = n01(rng);
  }
  Velocity velocity(const Grid& g) {
    Velocity u = Velocity::zeros(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) u.ux(i, j) = n01(rng);
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) u.uy(i, j) = n01(rng);
    return u;
  }
};

double inner(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double inner(const Velocity& a, const Velocity& b) { return inner(a.ux, b.ux) + inner(a.uy, b.uy); }

double node_inner(const Grid& g, const Field& a, const Field& b) {
  double s = 0.0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) s += node_weight(g, i, j) * a(i, j) * b(i, j);
  return s;
}

const Grid kGrid{7, 5, 1.3, 0.9};

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW(kGrid.validate());
  CHECK_THROWS_AS((Grid{1, 4, 1.0, 1.0}.validate()), PreconditionError);
  CHECK_THROWS_AS((Grid{4, 4, 0.0, 1.0}.validate()), PreconditionError);
}

TEST_CASE("divergence is the negative adjoint of the face gradient") {
  Rand r;
  const Grid& g = kGrid;
  Field phi = cell_field(g);
  r.fill(phi);
  const Velocity u = r.velocity(g);
  Velocity grad = Velocity::zeros(g);
  subtract_gradient(g, phi, -1.0, grad);
  const double lhs = inner(divergence(g, u), phi) * g.cell_area();
  const double rhs = -inner(u, grad) * g.cell_area();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("diffusion operator is symmetric and its diagonal is exact") {
  Rand r;
  const Grid& g = kGrid;
  Field a = cell_field(g), shift = cell_field(g), x = cell_field(g), y = cell_field(g);
  r.fill(a);
  for (auto& v : a.values()) v = 1.0 + v * v;
  r.fill(shift);
  for (auto& v : shift.values()) v = std::abs(v);
  r.fill(x);
  r.fill(y);
  Field Ax = cell_field(g), Ay = cell_field(g);
  diffusion_apply(g, a, shift, x, Ax);
  diffusion_apply(g, a, shift, y, Ay);
  CHECK(inner(Ax, y) == doctest::Approx(inner(x, Ay)).epsilon(1e-12));
  CHECK(inner(Ax, x) > 0.0);
  const Field diag = diffusion_diagonal(g, a, shift);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    Field ek = cell_field(g), col = cell_field(g);
    ek[k] = 1.0;
    diffusion_apply(g, a, shift, ek, col);
    CHECK(diag[k] == doctest::Approx(col[k]).epsilon(1e-14));
  }
}

TEST_CASE("cosine modes are exact Neumann eigenvectors") {
  const Grid g{16, 12, 2.0, 1.5};
  Field phi = cell_field(g), one = cell_field(g, 1.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) phi(i, j) = std::cos(pi * (i + 0.5) * g.dx() / g.lx);
  const Field lap = weighted_laplacian(g, one, phi);
  const double h = g.dx();
  const double ev = 2.0 * (1.0 - std::cos(pi * h / g.lx)) / (h * h);
  for (std::size_t k = 0; k < g.cells(); ++k) CHECK(lap[k] == doctest::Approx(-ev * phi[k]).scale(1.0));
  // Summation by parts against the gradient energy.
  CHECK(gradient_energy(g, phi) == doctest::Approx(-inner(phi, lap) * g.cell_area()).epsilon(1e-12));
}

TEST_CASE("tau of a uniformly rotating director") {
  const Grid g{20, 6, 1.0, 0.3};
  const double k = 2.3;
  Field d1 = cell_field(g), d2 = cell_field(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = (i + 0.5) * g.dx();
      d1(i, j) = std::cos(k * x);
      d2(i, j) = std::sin(k * x);
    }
  }
  const Field tau = cell_tau(g, d1, d2);
  const double s = 2.0 * std::sin(k * g.dx() / 2.0) / g.dx();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) CHECK(tau(i, j) == doctest::Approx(0.5 * s * s).epsilon(1e-12));
    CHECK(tau(0, j) == doctest::Approx(0.25 * s * s).epsilon(1e-12));
  }
}

TEST_CASE("strain of a linear shear flow") {
  const Grid g{6, 6, 1.0, 1.0};
  Velocity u = Velocity::zeros(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) u.ux(i, j) = (j + 0.5) * g.dy();
  const Strain s = strain(g, u);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) CHECK(s.gxy(i, j) == doctest::Approx(1.0));
  // Away from the side walls, where the normal velocity is pinned to zero.
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx - 1; ++i) CHECK(s.exx(i, j) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("tensor divergence is the negative adjoint of the strain") {
  Rand r;
  const Grid& g = kGrid;
  const Velocity u = r.velocity(g);
  Field sxx = cell_field(g), syy = cell_field(g), sxy = node_field(g);
  r.fill(sxx);
  r.fill(syy);
  r.fill(sxy);
  Velocity div = Velocity::zeros(g);
  tensor_divergence(g, sxx, syy, sxy, div);
  const Strain e = strain(g, u);
  const double work = inner(u, div);
  const double power = inner(sxx, e.exx) + inner(syy, e.eyy) + node_inner(g, sxy, e.gxy);
  CHECK(work == doctest::Approx(-power).epsilon(1e-12));
}

TEST_CASE("viscous operator is symmetric positive with an exact diagonal") {
  Rand r;
  const Grid& g = kGrid;
  Field mu_c = cell_field(g), mu_n = node_field(g);
  r.fill(mu_c);
  r.fill(mu_n);
  for (auto& v : mu_c.values()) v = 0.5 + v * v;
  for (auto& v : mu_n.values()) v = 0.5 + v * v;
  const Velocity a = r.velocity(g), b = r.velocity(g);
  Velocity Aa = Velocity::zeros(g), Ab = Velocity::zeros(g);
  viscous_apply(g, mu_c, mu_n, 2.0, a, Aa);
  viscous_apply(g, mu_c, mu_n, 2.0, b, Ab);
  CHECK(inner(Aa, b) == doctest::Approx(inner(a, Ab)).epsilon(1e-12));
  CHECK(inner(Aa, a) > 0.0);
  const Velocity diag = viscous_diagonal(g, mu_c, mu_n, 2.0);
  std::vector<double> flat, dflat, col;
  flatten(diag, dflat);
  flatten(a, flat);
  for (std::size_t k = 0; k < flat.size(); ++k) {
    std::vector<double> ek(flat.size(), 0.0);
    ek[k] = 1.0;
    Velocity ev = Velocity::zeros(g), out = Velocity::zeros(g);
    unflatten(ek, ev);
    viscous_apply(g, mu_c, mu_n, 2.0, ev, out);
    flatten(out, col);
    CHECK(dflat[k] == doctest::Approx(col[k]).epsilon(1e-14));
  }
}

TEST_CASE("conservative transport and node redistribution preserve totals") {
  Rand r;
  const Grid& g = kGrid;
  const Velocity u = r.velocity(g);
  Field phi = cell_field(g);
  r.fill(phi);
  const Field adv = conservative_advection(g, u, phi);
  double s = 0.0;
  for (double v : adv.values()) s += v;
  CHECK(s == doctest::Approx(0.0).scale(1.0));

  Field nodes = node_field(g);
  r.fill(nodes);
  const Field cells = node_to_cell_weighted(g, nodes);
  double total = 0.0;
  for (double v : cells.values()) total += v;
  Field ones = node_field(g, 1.0);
  CHECK(total == doctest::Approx(node_inner(g, nodes, ones)).epsilon(1e-12));
}

TEST_CASE("velocity helpers") {
  Rand r;
  const Grid& g = kGrid;
  const Velocity u = r.velocity(g);
  std::vector<double> flat;
  flatten(u, flat);
  CHECK(flat.size() == u.size());
  Velocity v = Velocity::zeros(g);
  unflatten(flat, v);
  CHECK(v.ux.values() == u.ux.values());
  CHECK(v.uy.values() == u.uy.values());
  CHECK(ux_reflected(u, 3, -1) == -u.ux(3, 0));
  CHECK(ux_reflected(u, 3, g.ny) == -u.ux(3, g.ny - 1));
  CHECK(uy_reflected(u, -1, 2) == -u.uy(0, 2));
  Field cx = cell_field(g), cy = cell_field(g);
  cell_velocity(g, u, cx, cy);
  CHECK(cx(2, 1) == doctest::Approx(0.5 * (u.ux(2, 1) + u.ux(3, 1))));
  CHECK(cy(2, 1) == doctest::Approx(0.5 * (u.uy(2, 1) + u.uy(2, 2))));
}

TEST_CASE("preconditioned CG against a dense solve") {
  const int n = 40;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 2.0 + 0.1 * i;
    if (i > 0) A(i, i - 1) = A(i - 1, i) = -1.0;
  }
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, -1.0, 2.0);
  const Eigen::VectorXd ref = A.ldlt().solve(b);
  linear::Vector bb(b.data(), b.data() + n), x(n, 0.0), diag(n);
  for (int i = 0; i < n; ++i) diag[i] = A(i, i);
  auto op = [&](const linear::Vector& in, linear::Vector& out) {
    Eigen::Map<const Eigen::VectorXd> vi(in.data(), n);
    Eigen::Map<Eigen::VectorXd>(out.data(), n) = A * vi;
  };
  const auto res = linear::pcg(op, diag, bb, x, {1e-12});
  CHECK(res.iterations <= n + 1);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref(i)).epsilon(1e-9));
}

TEST_CASE("CG on a singular Neumann problem and failure modes") {
  const Grid g{8, 8, 1.0, 1.0};
  Field a = cell_field(g, 1.0), zero = cell_field(g);
  Rand r;
  Field bf = cell_field(g);
  r.fill(bf);
  double mean = 0.0;
  for (double v : bf.values()) mean += v / g.cells();
  for (auto& v : bf.values()) v -= mean;
  auto op = [&](const linear::Vector& in, linear::Vector& out) {
    Field xf = cell_field(g), yf = cell_field(g);
    xf.values() = in;
    diffusion_apply(g, a, zero, xf, yf);
    out = yf.values();
  };
  linear::Vector diag = diffusion_diagonal(g, a, zero).values();
  linear::Vector x(g.cells(), 0.0);
  linear::CgOptions opt;
  opt.rel_tol = 1e-12;
  opt.remove_mean = true;
  linear::pcg(op, diag, bf.values(), x, opt);
  linear::Vector ax(g.cells());
  op(x, ax);
  for (std::size_t k = 0; k < ax.size(); ++k) CHECK(ax[k] == doctest::Approx(bf[k]).scale(1.0).epsilon(1e-9));

  auto neg = [](const linear::Vector& in, linear::Vector& out) {
    for (std::size_t k = 0; k < in.size(); ++k) out[k] = -in[k];
  };
  linear::Vector y(4, 0.0), b4(4, 1.0), d4(4, 1.0);
  CHECK_THROWS_AS(linear::pcg(neg, d4, b4, y), ConvergenceError);

  linear::Vector z(g.cells(), 0.0);
  linear::CgOptions tight;
  tight.max_iterations = 2;
  tight.remove_mean = true;
  CHECK_THROWS_AS(linear::pcg(op, diag, bf.values(), z, tight), ConvergenceError);
}
