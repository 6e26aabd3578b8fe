#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

// MAC grid on [0, lx] x [0, ly]. Cell (i, j) has centre ((i + 1/2) dx,
// (j + 1/2) dy). ux lives on vertical faces (nx + 1) x ny, uy on horizontal
// faces nx x (ny + 1), node fields on (nx + 1) x (ny + 1). Storage is
// row-major: index j * width + i.
//
// Ghost values are never stored. Cell fields read outside the domain return
// the mirrored interior value (homogeneous Neumann); tangential velocity
// outside the domain is the negated reflection (no slip); normal velocity on
// boundary faces is held at zero.
namespace nematoflow::grid {

struct Grid {
  int nx = 0;
  int ny = 0;
  double lx = 1.0;
  double ly = 1.0;

  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  double cell_area() const { return dx() * dy(); }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
  /// Throws PreconditionError unless nx, ny >= 2 and lx, ly > 0.
  void validate() const;
};

class Field {
 public:
  Field() = default;
  Field(int w, int h, double value = 0.0)
      : w_(w), h_(h), v_(static_cast<std::size_t>(w) * h, value) {}

  int width() const { return w_; }
  int height() const { return h_; }
  std::size_t size() const { return v_.size(); }
  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(j) * w_ + i]; }
  double operator()(int i, int j) const { return v_[static_cast<std::size_t>(j) * w_ + i]; }
  double& operator[](std::size_t k) { return v_[k]; }
  double operator[](std::size_t k) const { return v_[k]; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }
  void fill(double value) { std::fill(v_.begin(), v_.end(), value); }

  /// Cell-field read with Neumann mirroring for indices one past the edge.
  double mirrored(int i, int j) const {
    return (*this)(std::clamp(i, 0, w_ - 1), std::clamp(j, 0, h_ - 1));
  }

 private:
  int w_ = 0;
  int h_ = 0;
  std::vector<double> v_;
};

Field cell_field(const Grid& g, double value = 0.0);
Field node_field(const Grid& g, double value = 0.0);

struct Velocity {
  Field ux;
  Field uy;

  static Velocity zeros(const Grid& g);
  std::size_t size() const { return ux.size() + uy.size(); }
};

/// ux at (i, j) for j in [-1, ny]; out-of-range rows reflect with a sign flip.
double ux_reflected(const Velocity& u, int i, int j);
/// uy at (i, j) for i in [-1, nx]; out-of-range columns reflect with a sign flip.
double uy_reflected(const Velocity& u, int i, int j);

// Copies between a Velocity and a flat vector [ux..., uy...].
void flatten(const Velocity& u, std::vector<double>& out);
void unflatten(const std::vector<double>& in, Velocity& u);

/// Cell-centred velocity by averaging the two faces.
void cell_velocity(const Grid& g, const Velocity& u, Field& uc_x, Field& uc_y);

/// Discrete divergence at cells.
Field divergence(const Grid& g, const Velocity& u);
/// u -= scale * grad(phi) on interior faces.
void subtract_gradient(const Grid& g, const Field& phi, double scale, Velocity& u);

/// y = shift * x - div(a grad x) with zero flux through the boundary. Face
/// coefficients are arithmetic means of the two adjacent cells.
void diffusion_apply(const Grid& g, const Field& a, const Field& shift, const Field& x, Field& y);
Field diffusion_diagonal(const Grid& g, const Field& a, const Field& shift);

/// Node average of the existing adjacent cells.
Field cell_to_node(const Grid& g, const Field& c);

/// Strain components: exx, eyy at cells and the engineering shear
/// g = d(ux)/dy + d(uy)/dx at nodes (no-slip reflection on the boundary).
struct Strain {
  Field exx;
  Field eyy;
  Field gxy;
};
Strain strain(const Grid& g, const Velocity& u);

/// Weight of a node in node-based quadrature: 1 inside, 1/2 on an edge,
/// 1/4 at a corner.
double node_weight(const Grid& g, int i, int j);

/// Face values of div S for a symmetric tensor given as sxx, syy at cells
/// and sxy at nodes. Boundary faces are set to zero.
void tensor_divergence(const Grid& g, const Field& sxx, const Field& syy, const Field& sxy,
                       Velocity& out);

/// out = shift * u - div(2 mu D(u)); identity rows on boundary faces.
void viscous_apply(const Grid& g, const Field& mu_c, const Field& mu_n, double shift,
                   const Velocity& u, Velocity& out);
Velocity viscous_diagonal(const Grid& g, const Field& mu_c, const Field& mu_n, double shift);

/// Node-based quadratic terms distributed to cells: each node's value times
/// its weight is shared equally among its adjacent cells.
Field node_to_cell_weighted(const Grid& g, const Field& node_values);

/// Face values of -div(u (x) u), centred and conservative. Zero on boundary faces.
void momentum_advection(const Grid& g, const Velocity& u, Velocity& out);

/// div(u phi) at cells with centred face fluxes.
Field conservative_advection(const Grid& g, const Velocity& u, const Field& phi);

/// (u . grad) phi at cells with cell-averaged velocity and centred
/// differences on mirrored ghosts.
Field directional_derivative(const Grid& g, const Field& uc_x, const Field& uc_y,
                             const Field& phi);

/// Director-gradient tensor G = grad d grad d^T: gxx, gyy at cells from
/// face-averaged squared differences, gxy at nodes from averaged differences.
/// Boundary face differences vanish, so tau = (gxx + gyy) / 2 per cell.
struct GradientTensor {
  Field gxx;
  Field gyy;
  Field gxy;
};
GradientTensor gradient_tensor(const Grid& g, const Field& d1, const Field& d2);
Field cell_tau(const Grid& g, const Field& d1, const Field& d2);

/// Sum of squared face differences of a cell field divided by h^2, times the
/// cell area: the discrete integral of |grad phi|^2.
double gradient_energy(const Grid& g, const Field& phi);

/// div(a grad phi) evaluated explicitly (Neumann), with face coefficients
/// the arithmetic mean of the adjacent cells.
Field weighted_laplacian(const Grid& g, const Field& a, const Field& phi);

}  // namespace nematoflow::grid
