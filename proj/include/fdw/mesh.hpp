#ifndef FDW_MESH_HPP
#define FDW_MESH_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

namespace fdw {

// Uniform tensor grid over [lx, rx] x [ly, ry] with mx, my intervals.
struct Grid2D {
  double lx = 0.0, rx = 1.0, ly = 0.0, ry = 1.0;
  int mx = 0, my = 0;

  Grid2D() = default;
  Grid2D(double lx_, double rx_, double ly_, double ry_, int mx_, int my_);
  static Grid2D unit_square(int m) { return Grid2D(0.0, 1.0, 0.0, 1.0, m, m); }

  double hx() const { return (rx - lx) / mx; }
  double hy() const { return (ry - ly) / my; }
  double x(int i) const { return lx + i * hx(); }
  double y(int j) const { return ly + j * hy(); }
  int nodes_x() const { return mx + 1; }
  int nodes_y() const { return my + 1; }
  std::size_t node_count() const { return static_cast<std::size_t>(mx + 1) * (my + 1); }
  std::size_t interior_count() const { return static_cast<std::size_t>(mx - 1) * (my - 1); }

  bool same_box(const Grid2D& o) const;
  bool operator==(const Grid2D& o) const;
};

// Nodal values including boundary nodes, row-major in i (x index fastest).
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const Grid2D& grid, bool zero_boundary = true);

  static GridFunction sample(const Grid2D& grid,
                             const std::function<double(double, double)>& f,
                             bool zero_boundary = true);

  const Grid2D& grid() const { return grid_; }
  bool zero_boundary() const { return zero_boundary_; }
  void mark_zero_boundary(bool flag) { zero_boundary_ = flag; }

  double& at(int i, int j) { return v_[static_cast<std::size_t>(j) * grid_.nodes_x() + i]; }
  double at(int i, int j) const { return v_[static_cast<std::size_t>(j) * grid_.nodes_x() + i]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::size_t size() const { return v_.size(); }

  void zero_out_boundary();

 private:
  Grid2D grid_;
  std::vector<double> v_;
  bool zero_boundary_ = true;
};

// Tensor compact average A = A_x A_y with 1D mask (1, 10, 1)/12 on interior
// lines and the identity on boundary rows/columns.
GridFunction apply_compact_A(const GridFunction& u);

// Compact Laplacian Lambda = A_y dxx + A_x dyy on interior nodes; input must
// be zero-boundary, output is zero-boundary.
GridFunction apply_lambda(const GridFunction& u);

double inner_product(const GridFunction& u, const GridFunction& w);
double norm_l2(const GridFunction& u);
double norm_inf(const GridFunction& u);
double norm_A(const GridFunction& u);

// CSV serialization with fixed columns i, j, x, y, value.
void write_csv(const GridFunction& u, std::ostream& out);

// In-place helpers used by the steppers' history sums.
void axpy(GridFunction& dst, double a, const GridFunction& src);  // dst += a*src
void scale(GridFunction& dst, double a);

}  // namespace fdw

#endif
