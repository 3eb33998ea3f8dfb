#ifndef FDW_SPLINE_HPP
#define FDW_SPLINE_HPP

#include <span>
#include <vector>

#include "fdw/mesh.hpp"

namespace fdw {

// One-dimensional cubic spline in moment form: node values w_i plus second
// derivatives M_i at the nodes, uniform spacing h starting at x0.
struct SplineCoeffs1D {
  std::vector<double> node_values;
  std::vector<double> moments;
  double x0 = 0.0;
  double h = 0.0;
};

// Solves the tridiagonal moment system (1/2) tridiag(1,4,1) M = D with
// D_i = 3 [d2 w]_i and prescribed end moments m0, mM (Thomas elimination).
SplineCoeffs1D cubic_spline_moments(std::span<const double> values, double x0, double h,
                                    double m0, double mM);

double spline_eval(const SplineCoeffs1D& c, double x);

// Bicubic coarse-to-fine transfer Pi_H = Pi_{H,y} Pi_{H,x} with zero end
// moments on every spline line. fine must be nested in coarse.grid() with an
// integer ratio J >= 2 in both directions.
GridFunction prolongate_bicubic(const GridFunction& coarse, const Grid2D& fine);

}  // namespace fdw

#endif
