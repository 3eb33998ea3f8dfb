#include "fdw/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "fdw/errors.hpp"

namespace fdw {

Grid2D::Grid2D(double lx_, double rx_, double ly_, double ry_, int mx_, int my_)
    : lx(lx_), rx(rx_), ly(ly_), ry(ry_), mx(mx_), my(my_) {
  if (mx < 2 || my < 2) throw ConfigError("Grid2D requires mx, my >= 2");
  if (!(rx > lx && ry > ly)) throw ConfigError("Grid2D requires a nonempty box");
}

bool Grid2D::same_box(const Grid2D& o) const {
  return lx == o.lx && rx == o.rx && ly == o.ly && ry == o.ry;
}

bool Grid2D::operator==(const Grid2D& o) const {
  return same_box(o) && mx == o.mx && my == o.my;
}

GridFunction::GridFunction(const Grid2D& grid, bool zero_boundary)
    : grid_(grid), v_(grid.node_count(), 0.0), zero_boundary_(zero_boundary) {}

GridFunction GridFunction::sample(const Grid2D& grid,
                                  const std::function<double(double, double)>& f,
                                  bool zero_boundary) {
  GridFunction u(grid, zero_boundary);
  for (int j = 0; j <= grid.my; ++j) {
    for (int i = 0; i <= grid.mx; ++i) {
      u.at(i, j) = f(grid.x(i), grid.y(j));
    }
  }
  if (zero_boundary) u.zero_out_boundary();
  return u;
}

void GridFunction::zero_out_boundary() {
  for (int i = 0; i <= grid_.mx; ++i) {
    at(i, 0) = 0.0;
    at(i, grid_.my) = 0.0;
  }
  for (int j = 0; j <= grid_.my; ++j) {
    at(0, j) = 0.0;
    at(grid_.mx, j) = 0.0;
  }
}

namespace {

void require_same_grid(const GridFunction& u, const GridFunction& w) {
  if (!(u.grid() == w.grid())) throw UsageError("grid mismatch");
}

}  // namespace

GridFunction apply_compact_A(const GridFunction& u) {
  const Grid2D& g = u.grid();
  // x sweep
  GridFunction tmp(g, false);
  for (int j = 0; j <= g.my; ++j) {
    tmp.at(0, j) = u.at(0, j);
    tmp.at(g.mx, j) = u.at(g.mx, j);
    for (int i = 1; i < g.mx; ++i) {
      tmp.at(i, j) = (u.at(i - 1, j) + 10.0 * u.at(i, j) + u.at(i + 1, j)) / 12.0;
    }
  }
  // y sweep
  GridFunction out(g, u.zero_boundary());
  for (int i = 0; i <= g.mx; ++i) {
    out.at(i, 0) = tmp.at(i, 0);
    out.at(i, g.my) = tmp.at(i, g.my);
  }
  for (int j = 1; j < g.my; ++j) {
    for (int i = 0; i <= g.mx; ++i) {
      out.at(i, j) = (tmp.at(i, j - 1) + 10.0 * tmp.at(i, j) + tmp.at(i, j + 1)) / 12.0;
    }
  }
  return out;
}

GridFunction apply_lambda(const GridFunction& u) {
  if (!u.zero_boundary()) {
    throw UsageError("apply_lambda requires a zero-boundary grid function");
  }
  const Grid2D& g = u.grid();
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = 1.0 / (g.hy() * g.hy());
  GridFunction out(g, true);
  // Lambda = A_y dxx + A_x dyy; on interior nodes both composition orders of
  // A and the second difference touch only the 3x3 neighborhood, with the
  // boundary identity branch irrelevant because u vanishes there.
  for (int j = 1; j < g.my; ++j) {
    for (int i = 1; i < g.mx; ++i) {
      auto dxx = [&](int jj) {
        return (u.at(i - 1, jj) - 2.0 * u.at(i, jj) + u.at(i + 1, jj)) * ihx2;
      };
      auto dyy = [&](int ii) {
        return (u.at(ii, j - 1) - 2.0 * u.at(ii, j) + u.at(ii, j + 1)) * ihy2;
      };
      const double ay_dxx = (dxx(j - 1) + 10.0 * dxx(j) + dxx(j + 1)) / 12.0;
      const double ax_dyy = (dyy(i - 1) + 10.0 * dyy(i) + dyy(i + 1)) / 12.0;
      out.at(i, j) = ay_dxx + ax_dyy;
    }
  }
  return out;
}

double inner_product(const GridFunction& u, const GridFunction& w) {
  require_same_grid(u, w);
  const Grid2D& g = u.grid();
  double s = 0.0;
  for (int j = 1; j < g.my; ++j) {
    for (int i = 1; i < g.mx; ++i) {
      s += u.at(i, j) * w.at(i, j);
    }
  }
  return g.hx() * g.hy() * s;
}

double norm_l2(const GridFunction& u) { return std::sqrt(inner_product(u, u)); }

double norm_inf(const GridFunction& u) {
  double m = 0.0;
  const double* p = u.data();
  for (std::size_t k = 0; k < u.size(); ++k) m = std::max(m, std::abs(p[k]));
  return m;
}

double norm_A(const GridFunction& u) {
  return std::sqrt(inner_product(u, apply_compact_A(u)));
}

void write_csv(const GridFunction& u, std::ostream& out) {
  const Grid2D& g = u.grid();
  out << "i,j,x,y,value\n";
  char buf[128];
  for (int j = 0; j <= g.my; ++j) {
    for (int i = 0; i <= g.mx; ++i) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", i, j, g.x(i), g.y(j),
                    u.at(i, j));
      out << buf;
    }
  }
}

void axpy(GridFunction& dst, double a, const GridFunction& src) {
  require_same_grid(dst, src);
  double* d = dst.data();
  const double* s = src.data();
  const std::size_t n = dst.size();
  for (std::size_t k = 0; k < n; ++k) d[k] += a * s[k];
}

void scale(GridFunction& dst, double a) {
  double* d = dst.data();
  for (std::size_t k = 0; k < dst.size(); ++k) d[k] *= a;
}

}  // namespace fdw
