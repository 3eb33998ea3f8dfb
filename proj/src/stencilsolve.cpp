#include "fdw/stencilsolve.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

#include "fdw/errors.hpp"

namespace fdw {

namespace {

// 1D compact-average masks; index d in {-1, 0, 1} shifted by 1.
constexpr double kAvg[3] = {1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0};

}  // namespace

struct StencilMatrix::Impl {
  Grid2D grid;
  double a;
  double b;
  GridFunction r;
  int n;           // interior unknowns
  int band;        // kl = ku = mx
  int ldab;        // 2*kl + ku + 1
  std::vector<double> ab;  // factored banded storage, column-major
  std::vector<lapack_int> ipiv;

  // Stencil coefficient multiplying v at neighbor (i+di, j+dj) in the row of
  // interior node (i, j).
  double coeff(int i, int j, int di, int dj) const {
    const double hx2 = grid.hx() * grid.hx();
    const double hy2 = grid.hy() * grid.hy();
    const double avg2 = kAvg[di + 1] * kAvg[dj + 1];
    // Lambda = A_y dxx + A_x dyy: cross mask of 1D average and 1D second
    // difference in each direction.
    const double lap_x = kAvg[dj + 1] * (di == 0 ? -2.0 : 1.0) / hx2;
    const double lap_y = kAvg[di + 1] * (dj == 0 ? -2.0 : 1.0) / hy2;
    return a * avg2 - b * (lap_x + lap_y) - avg2 * r.at(i + di, j + dj);
  }

  int index(int i, int j) const { return (j - 1) * (grid.mx - 1) + (i - 1); }
};

StencilMatrix::StencilMatrix(const Grid2D& grid, double a, double b, const GridFunction& r)
    : impl_(std::make_unique<Impl>()) {
  if (b < 0.0) throw UsageError("StencilMatrix: diffusion weight must be nonnegative");
  if (!(r.grid() == grid)) throw UsageError("StencilMatrix: reaction field grid mismatch");
  impl_->grid = grid;
  impl_->a = a;
  impl_->b = b;
  impl_->r = r;
  impl_->n = static_cast<int>(grid.interior_count());
  impl_->band = grid.mx;  // farthest coupling: (i+1, j+1) -> offset (mx-1)+1
  impl_->ldab = 3 * impl_->band + 1;
  impl_->ab.assign(static_cast<std::size_t>(impl_->ldab) * impl_->n, 0.0);
  impl_->ipiv.resize(impl_->n);

  const int kl = impl_->band, ku = impl_->band, ldab = impl_->ldab;
  for (int j = 1; j < grid.my; ++j) {
    for (int i = 1; i < grid.mx; ++i) {
      const int row = impl_->index(i, j);
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii < 1 || ii > grid.mx - 1 || jj < 1 || jj > grid.my - 1) continue;
          const int col = impl_->index(ii, jj);
          // dgbtrf layout: AB(kl + ku + 1 + row - col, col), 1-based rows.
          impl_->ab[static_cast<std::size_t>(col) * ldab + (kl + ku + row - col)] =
              impl_->coeff(i, j, di, dj);
        }
      }
    }
  }

  const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, impl_->n, impl_->n, kl, ku,
                                         impl_->ab.data(), ldab, impl_->ipiv.data());
  if (info != 0) {
    throw SolverError("banded LU factorization failed (info = " + std::to_string(info) + ")");
  }
}

StencilMatrix::~StencilMatrix() = default;
StencilMatrix::StencilMatrix(StencilMatrix&&) noexcept = default;
StencilMatrix& StencilMatrix::operator=(StencilMatrix&&) noexcept = default;

const Grid2D& StencilMatrix::grid() const { return impl_->grid; }

GridFunction StencilMatrix::apply(const GridFunction& v) const {
  if (!(v.grid() == impl_->grid)) throw UsageError("StencilMatrix::apply: grid mismatch");
  if (!v.zero_boundary()) throw UsageError("StencilMatrix::apply: input must be zero-boundary");
  const Grid2D& g = impl_->grid;
  GridFunction out(g, true);
  for (int j = 1; j < g.my; ++j) {
    for (int i = 1; i < g.mx; ++i) {
      double s = 0.0;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          s += impl_->coeff(i, j, di, dj) * v.at(i + di, j + dj);
        }
      }
      out.at(i, j) = s;
    }
  }
  return out;
}

GridFunction StencilMatrix::solve(const GridFunction& rhs) const {
  if (!(rhs.grid() == impl_->grid)) throw UsageError("StencilMatrix::solve: grid mismatch");
  if (!rhs.zero_boundary()) throw UsageError("StencilMatrix::solve: rhs must be zero-boundary");
  const Grid2D& g = impl_->grid;

  std::vector<double> x(impl_->n);
  for (int j = 1; j < g.my; ++j) {
    for (int i = 1; i < g.mx; ++i) x[impl_->index(i, j)] = rhs.at(i, j);
  }
  const lapack_int info =
      LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', impl_->n, impl_->band, impl_->band, 1,
                     impl_->ab.data(), impl_->ldab, impl_->ipiv.data(), x.data(), impl_->n);
  if (info != 0) {
    throw SolverError("banded back-substitution failed (info = " + std::to_string(info) + ")");
  }

  GridFunction u(g, true);
  for (int j = 1; j < g.my; ++j) {
    for (int i = 1; i < g.mx; ++i) u.at(i, j) = x[impl_->index(i, j)];
  }

  // Residual contract.
  GridFunction res = apply(u);
  axpy(res, -1.0, rhs);
  const double rn = norm_l2(res);
  const double bn = norm_l2(rhs);
  if (bn > 0.0 && rn > kResidualContract * bn) {
    throw SolverError("solve residual " + std::to_string(rn / bn) + " exceeds contract");
  }
  return u;
}

}  // namespace fdw
