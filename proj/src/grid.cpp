#include "nematoflow/grid.hpp"

#include "nematoflow/error.hpp"

namespace nematoflow::grid {

void Grid::validate() const {
  if (nx < 2 || ny < 2) throw PreconditionError("grid needs at least 2 cells per axis");
  if (!(lx > 0.0) || !(ly > 0.0)) throw PreconditionError("domain lengths must be positive");
}

Field cell_field(const Grid& g, double value) { return Field(g.nx, g.ny, value); }
Field node_field(const Grid& g, double value) { return Field(g.nx + 1, g.ny + 1, value); }

Velocity Velocity::zeros(const Grid& g) {
  return Velocity{Field(g.nx + 1, g.ny), Field(g.nx, g.ny + 1)};
}

double ux_reflected(const Velocity& u, int i, int j) {
  const int ny = u.ux.height();
  if (j < 0) return -u.ux(i, 0);
  if (j >= ny) return -u.ux(i, ny - 1);
  return u.ux(i, j);
}

double uy_reflected(const Velocity& u, int i, int j) {
  const int nx = u.uy.width();
  if (i < 0) return -u.uy(0, j);
  if (i >= nx) return -u.uy(nx - 1, j);
  return u.uy(i, j);
}

void flatten(const Velocity& u, std::vector<double>& out) {
  out.resize(u.size());
  std::copy(u.ux.values().begin(), u.ux.values().end(), out.begin());
  std::copy(u.uy.values().begin(), u.uy.values().end(), out.begin() + u.ux.size());
}

void unflatten(const std::vector<double>& in, Velocity& u) {
  std::copy(in.begin(), in.begin() + u.ux.size(), u.ux.values().begin());
  std::copy(in.begin() + u.ux.size(), in.end(), u.uy.values().begin());
}

void cell_velocity(const Grid& g, const Velocity& u, Field& uc_x, Field& uc_y) {
  uc_x = cell_field(g);
  uc_y = cell_field(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      uc_x(i, j) = 0.5 * (u.ux(i, j) + u.ux(i + 1, j));
      uc_y(i, j) = 0.5 * (u.uy(i, j) + u.uy(i, j + 1));
    }
  }
}

Field divergence(const Grid& g, const Velocity& u) {
  Field out = cell_field(g);
  const double dx = g.dx(), dy = g.dy();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      out(i, j) = (u.ux(i + 1, j) - u.ux(i, j)) / dx + (u.uy(i, j + 1) - u.uy(i, j)) / dy;
    }
  }
  return out;
}

void subtract_gradient(const Grid& g, const Field& phi, double scale, Velocity& u) {
  const double dx = g.dx(), dy = g.dy();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) u.ux(i, j) -= scale * (phi(i, j) - phi(i - 1, j)) / dx;
  }
  for (int j = 1; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) u.uy(i, j) -= scale * (phi(i, j) - phi(i, j - 1)) / dy;
  }
}

void diffusion_apply(const Grid& g, const Field& a, const Field& shift, const Field& x,
                     Field& y) {
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idy2 = 1.0 / (g.dy() * g.dy());
  if (y.size() != x.size()) y = cell_field(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double xc = x(i, j);
      const double ac = a(i, j);
      double flux = 0.0;
      if (i > 0) flux += 0.5 * (ac + a(i - 1, j)) * (x(i - 1, j) - xc) * idx2;
      if (i + 1 < g.nx) flux += 0.5 * (ac + a(i + 1, j)) * (x(i + 1, j) - xc) * idx2;
      if (j > 0) flux += 0.5 * (ac + a(i, j - 1)) * (x(i, j - 1) - xc) * idy2;
      if (j + 1 < g.ny) flux += 0.5 * (ac + a(i, j + 1)) * (x(i, j + 1) - xc) * idy2;
      y(i, j) = shift(i, j) * xc - flux;
    }
  }
}

Field diffusion_diagonal(const Grid& g, const Field& a, const Field& shift) {
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idy2 = 1.0 / (g.dy() * g.dy());
  Field out = cell_field(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double ac = a(i, j);
      double s = shift(i, j);
      if (i > 0) s += 0.5 * (ac + a(i - 1, j)) * idx2;
      if (i + 1 < g.nx) s += 0.5 * (ac + a(i + 1, j)) * idx2;
      if (j > 0) s += 0.5 * (ac + a(i, j - 1)) * idy2;
      if (j + 1 < g.ny) s += 0.5 * (ac + a(i, j + 1)) * idy2;
      out(i, j) = s;
    }
  }
  return out;
}

Field cell_to_node(const Grid& g, const Field& c) {
  Field out = node_field(g);
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      double s = 0.0;
      int n = 0;
      for (int jj = j - 1; jj <= j; ++jj) {
        for (int ii = i - 1; ii <= i; ++ii) {
          if (ii >= 0 && ii < g.nx && jj >= 0 && jj < g.ny) {
            s += c(ii, jj);
            ++n;
          }
        }
      }
      out(i, j) = s / n;
    }
  }
  return out;
}

Strain strain(const Grid& g, const Velocity& u) {
  const double dx = g.dx(), dy = g.dy();
  Strain s{cell_field(g), cell_field(g), node_field(g)};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      s.exx(i, j) = (u.ux(i + 1, j) - u.ux(i, j)) / dx;
      s.eyy(i, j) = (u.uy(i, j + 1) - u.uy(i, j)) / dy;
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      // ux on the x = 0, lx faces and uy on the y = 0, ly faces are zero, so
      // the corresponding derivative vanishes along those node lines.
      double dudy = 0.0;
      if (i > 0 && i < g.nx) dudy = (ux_reflected(u, i, j) - ux_reflected(u, i, j - 1)) / dy;
      double dvdx = 0.0;
      if (j > 0 && j < g.ny) dvdx = (uy_reflected(u, i, j) - uy_reflected(u, i - 1, j)) / dx;
      s.gxy(i, j) = dudy + dvdx;
    }
  }
  return s;
}

double node_weight(const Grid& g, int i, int j) {
  const double wx = (i == 0 || i == g.nx) ? 0.5 : 1.0;
  const double wy = (j == 0 || j == g.ny) ? 0.5 : 1.0;
  return wx * wy;
}

void tensor_divergence(const Grid& g, const Field& sxx, const Field& syy, const Field& sxy,
                       Velocity& out) {
  const double dx = g.dx(), dy = g.dy();
  if (out.ux.size() == 0) out = Velocity::zeros(g);
  for (int j = 0; j < g.ny; ++j) {
    out.ux(0, j) = 0.0;
    out.ux(g.nx, j) = 0.0;
    for (int i = 1; i < g.nx; ++i) {
      out.ux(i, j) =
          (sxx(i, j) - sxx(i - 1, j)) / dx + (sxy(i, j + 1) - sxy(i, j)) / dy;
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    out.uy(i, 0) = 0.0;
    out.uy(i, g.ny) = 0.0;
  }
  for (int j = 1; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      out.uy(i, j) =
          (sxy(i + 1, j) - sxy(i, j)) / dx + (syy(i, j) - syy(i, j - 1)) / dy;
    }
  }
}

void viscous_apply(const Grid& g, const Field& mu_c, const Field& mu_n, double shift,
                   const Velocity& u, Velocity& out) {
  Strain s = strain(g, u);
  for (std::size_t k = 0; k < s.exx.size(); ++k) {
    s.exx[k] *= 2.0 * mu_c[k];
    s.eyy[k] *= 2.0 * mu_c[k];
  }
  for (std::size_t k = 0; k < s.gxy.size(); ++k) s.gxy[k] *= mu_n[k];
  tensor_divergence(g, s.exx, s.eyy, s.gxy, out);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const bool boundary = i == 0 || i == g.nx;
      out.ux(i, j) = boundary ? u.ux(i, j) : shift * u.ux(i, j) - out.ux(i, j);
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const bool boundary = j == 0 || j == g.ny;
      out.uy(i, j) = boundary ? u.uy(i, j) : shift * u.uy(i, j) - out.uy(i, j);
    }
  }
}

Velocity viscous_diagonal(const Grid& g, const Field& mu_c, const Field& mu_n, double shift) {
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idy2 = 1.0 / (g.dy() * g.dy());
  Velocity d = Velocity::zeros(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      if (i == 0 || i == g.nx) {
        d.ux(i, j) = 1.0;
        continue;
      }
      const double top = mu_n(i, j + 1) * (j + 1 == g.ny ? 2.0 : 1.0);
      const double bottom = mu_n(i, j) * (j == 0 ? 2.0 : 1.0);
      d.ux(i, j) = shift + 2.0 * (mu_c(i - 1, j) + mu_c(i, j)) * idx2 + (top + bottom) * idy2;
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (j == 0 || j == g.ny) {
        d.uy(i, j) = 1.0;
        continue;
      }
      const double right = mu_n(i + 1, j) * (i + 1 == g.nx ? 2.0 : 1.0);
      const double left = mu_n(i, j) * (i == 0 ? 2.0 : 1.0);
      d.uy(i, j) = shift + 2.0 * (mu_c(i, j - 1) + mu_c(i, j)) * idy2 + (left + right) * idx2;
    }
  }
  return d;
}

Field node_to_cell_weighted(const Grid& g, const Field& node_values) {
  Field out = cell_field(g);
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const double v = node_values(i, j) * node_weight(g, i, j);
      int n = 0;
      for (int jj = j - 1; jj <= j; ++jj) {
        for (int ii = i - 1; ii <= i; ++ii) {
          if (ii >= 0 && ii < g.nx && jj >= 0 && jj < g.ny) ++n;
        }
      }
      for (int jj = j - 1; jj <= j; ++jj) {
        for (int ii = i - 1; ii <= i; ++ii) {
          if (ii >= 0 && ii < g.nx && jj >= 0 && jj < g.ny) out(ii, jj) += v / n;
        }
      }
    }
  }
  return out;
}

void momentum_advection(const Grid& g, const Velocity& u, Velocity& out) {
  const double dx = g.dx(), dy = g.dy();
  out = Velocity::zeros(g);
  // x-momentum: d(ux ux)/dx at cells, d(uy ux)/dy at nodes.
  auto uxux = [&](int i, int j) {
    const double c = 0.5 * (u.ux(i, j) + u.ux(i + 1, j));
    return c * c;
  };
  auto uyux = [&](int i, int j) {
    const double vy = 0.5 * (uy_reflected(u, i - 1, j) + uy_reflected(u, i, j));
    const double vx = 0.5 * (ux_reflected(u, i, j - 1) + ux_reflected(u, i, j));
    return vx * vy;
  };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) {
      out.ux(i, j) = -((uxux(i, j) - uxux(i - 1, j)) / dx + (uyux(i, j + 1) - uyux(i, j)) / dy);
    }
  }
  auto uyuy = [&](int i, int j) {
    const double c = 0.5 * (u.uy(i, j) + u.uy(i, j + 1));
    return c * c;
  };
  for (int j = 1; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      out.uy(i, j) = -((uyux(i + 1, j) - uyux(i, j)) / dx + (uyuy(i, j) - uyuy(i, j - 1)) / dy);
    }
  }
}

Field conservative_advection(const Grid& g, const Velocity& u, const Field& phi) {
  const double dx = g.dx(), dy = g.dy();
  Field out = cell_field(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double fe = u.ux(i + 1, j) * 0.5 * (phi(i, j) + phi.mirrored(i + 1, j));
      const double fw = u.ux(i, j) * 0.5 * (phi(i, j) + phi.mirrored(i - 1, j));
      const double fn = u.uy(i, j + 1) * 0.5 * (phi(i, j) + phi.mirrored(i, j + 1));
      const double fs = u.uy(i, j) * 0.5 * (phi(i, j) + phi.mirrored(i, j - 1));
      out(i, j) = (fe - fw) / dx + (fn - fs) / dy;
    }
  }
  return out;
}

Field directional_derivative(const Grid& g, const Field& uc_x, const Field& uc_y,
                             const Field& phi) {
  const double dx = g.dx(), dy = g.dy();
  Field out = cell_field(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double px = (phi.mirrored(i + 1, j) - phi.mirrored(i - 1, j)) / (2.0 * dx);
      const double py = (phi.mirrored(i, j + 1) - phi.mirrored(i, j - 1)) / (2.0 * dy);
      out(i, j) = uc_x(i, j) * px + uc_y(i, j) * py;
    }
  }
  return out;
}

GradientTensor gradient_tensor(const Grid& g, const Field& d1, const Field& d2) {
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idy2 = 1.0 / (g.dy() * g.dy());
  GradientTensor t{cell_field(g), cell_field(g), node_field(g)};
  const Field* comps[2] = {&d1, &d2};
  for (const Field* f : comps) {
    const Field& d = *f;
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const double c = d(i, j);
        const double w = c - d.mirrored(i - 1, j);
        const double e = d.mirrored(i + 1, j) - c;
        const double s = c - d.mirrored(i, j - 1);
        const double n = d.mirrored(i, j + 1) - c;
        t.gxx(i, j) += 0.5 * (w * w + e * e) * idx2;
        t.gyy(i, j) += 0.5 * (s * s + n * n) * idy2;
      }
    }
    for (int j = 0; j <= g.ny; ++j) {
      for (int i = 0; i <= g.nx; ++i) {
        const double ddx = 0.5 * ((d.mirrored(i, j) - d.mirrored(i - 1, j)) +
                                  (d.mirrored(i, j - 1) - d.mirrored(i - 1, j - 1))) / g.dx();
        const double ddy = 0.5 * ((d.mirrored(i, j) - d.mirrored(i, j - 1)) +
                                  (d.mirrored(i - 1, j) - d.mirrored(i - 1, j - 1))) / g.dy();
        t.gxy(i, j) += ddx * ddy;
      }
    }
  }
  return t;
}

Field cell_tau(const Grid& g, const Field& d1, const Field& d2) {
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idy2 = 1.0 / (g.dy() * g.dy());
  Field tau = cell_field(g);
  for (const Field* f : {&d1, &d2}) {
    const Field& d = *f;
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const double c = d(i, j);
        const double w = c - d.mirrored(i - 1, j);
        const double e = d.mirrored(i + 1, j) - c;
        const double s = c - d.mirrored(i, j - 1);
        const double n = d.mirrored(i, j + 1) - c;
        tau(i, j) += 0.25 * ((w * w + e * e) * idx2 + (s * s + n * n) * idy2);
      }
    }
  }
  return tau;
}

double gradient_energy(const Grid& g, const Field& phi) {
  const double idx2 = 1.0 / (g.dx() * g.dx());
  const double idy2 = 1.0 / (g.dy() * g.dy());
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i + 1 < g.nx) {
        const double e = phi(i + 1, j) - phi(i, j);
        s += e * e * idx2;
      }
      if (j + 1 < g.ny) {
        const double n = phi(i, j + 1) - phi(i, j);
        s += n * n * idy2;
      }
    }
  }
  return s * g.cell_area();
}

Field weighted_laplacian(const Grid& g, const Field& a, const Field& phi) {
  Field zero = cell_field(g);
  Field out = cell_field(g);
  diffusion_apply(g, a, zero, phi, out);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = -out[k];
  return out;
}

}  // namespace nematoflow::grid
