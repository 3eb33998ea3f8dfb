#include "fdw/spline.hpp"

#include <cmath>

#include "fdw/errors.hpp"

namespace fdw {

SplineCoeffs1D cubic_spline_moments(std::span<const double> values, double x0, double h,
                                    double m0, double mM) {
  const int m = static_cast<int>(values.size()) - 1;  // interval count
  if (m < 2) throw UsageError("cubic_spline_moments: need at least 3 nodes");
  if (!(h > 0.0)) throw UsageError("cubic_spline_moments: spacing must be positive");

  SplineCoeffs1D c;
  c.node_values.assign(values.begin(), values.end());
  c.x0 = x0;
  c.h = h;
  c.moments.assign(m + 1, 0.0);
  c.moments[0] = m0;
  c.moments[m] = mM;

  // Interior system: (1/2)(M_{i-1} + 4 M_i + M_{i+1}) = 3 [d2 w]_i, with the
  // first and last rows absorbing the prescribed end moments.
  const int n = m - 1;
  std::vector<double> diag(n, 2.0), rhs(n);
  const double ih2 = 1.0 / (h * h);
  for (int i = 1; i <= n; ++i) {
    rhs[i - 1] = 3.0 * (values[i - 1] - 2.0 * values[i] + values[i + 1]) * ih2;
  }
  rhs[0] -= 0.5 * m0;
  rhs[n - 1] -= 0.5 * mM;

  // Thomas sweep; off-diagonals are constant 1/2 and the matrix is strictly
  // diagonally dominant, so no pivoting is needed.
  for (int i = 1; i < n; ++i) {
    const double f = 0.5 / diag[i - 1];
    diag[i] -= f * 0.5;
    rhs[i] -= f * rhs[i - 1];
  }
  c.moments[n] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 1; i >= 1; --i) {
    c.moments[i] = (rhs[i - 1] - 0.5 * c.moments[i + 1]) / diag[i - 1];
  }
  return c;
}

double spline_eval(const SplineCoeffs1D& c, double x) {
  const int m = static_cast<int>(c.node_values.size()) - 1;
  const double xm = c.x0 + m * c.h;
  const double pad = 1e-12 * (std::abs(c.x0) + std::abs(xm) + c.h);
  if (x < c.x0 - pad || x > xm + pad) {
    throw UsageError("spline_eval: x outside the node range");
  }
  int i = static_cast<int>(std::floor((x - c.x0) / c.h)) + 1;  // interval [x_{i-1}, x_i]
  if (i < 1) i = 1;
  if (i > m) i = m;
  const double xl = c.x0 + (i - 1) * c.h;
  const double xr = xl + c.h;
  const double dl = x - xl;
  const double dr = xr - x;
  const double h = c.h;
  const double Ml = c.moments[i - 1];
  const double Mr = c.moments[i];
  return Ml * dr * dr * dr / (6.0 * h) + Mr * dl * dl * dl / (6.0 * h) +
         (c.node_values[i - 1] - Ml * h * h / 6.0) * dr / h +
         (c.node_values[i] - Mr * h * h / 6.0) * dl / h;
}

GridFunction prolongate_bicubic(const GridFunction& coarse, const Grid2D& fine) {
  const Grid2D& cg = coarse.grid();
  if (!coarse.zero_boundary()) {
    throw UsageError("prolongate_bicubic: coarse input must be zero-boundary");
  }
  if (!cg.same_box(fine) || fine.mx % cg.mx != 0 || fine.my % cg.my != 0 ||
      fine.mx / cg.mx < 2 || fine.my / cg.my < 2) {
    throw UsageError("prolongate_bicubic: fine grid not nested with integer ratio >= 2");
  }

  // x pass: one spline per coarse row, evaluated at every fine x node.
  std::vector<double> line(cg.nodes_x());
  std::vector<std::vector<double>> rows(cg.nodes_y(), std::vector<double>(fine.nodes_x()));
  for (int j = 0; j <= cg.my; ++j) {
    for (int i = 0; i <= cg.mx; ++i) line[i] = coarse.at(i, j);
    const SplineCoeffs1D sx = cubic_spline_moments(line, cg.lx, cg.hx(), 0.0, 0.0);
    for (int fi = 0; fi <= fine.mx; ++fi) {
      rows[j][fi] = spline_eval(sx, fine.x(fi));
    }
  }

  // y pass: one spline per fine column over the intermediate coarse rows.
  GridFunction out(fine, true);
  std::vector<double> col(cg.nodes_y());
  for (int fi = 0; fi <= fine.mx; ++fi) {
    for (int j = 0; j <= cg.my; ++j) col[j] = rows[j][fi];
    const SplineCoeffs1D sy = cubic_spline_moments(col, cg.ly, cg.hy(), 0.0, 0.0);
    for (int fj = 0; fj <= fine.my; ++fj) {
      out.at(fi, fj) = spline_eval(sy, fine.y(fj));
    }
  }
  out.zero_out_boundary();
  return out;
}

}  // namespace fdw
