#ifndef FDW_QUADRATURE_HPP
#define FDW_QUADRATURE_HPP

#include <functional>

namespace fdw {

// Result of an adaptive quadrature: value plus the last refinement change,
// which serves as the error estimate.
struct QuadResult {
  double value;
  double error_estimate;
  bool converged;
};

// Double-exponential (tanh-sinh) rule for integrals over (0, length] whose
// integrand may blow up like v^p with p > -1 as v -> 0+. The integrand is
// called with the distance v from the singular endpoint, computed in a way
// that stays accurate down to ~1e-280 * length, so endpoint singularities
// are never evaluated at v == 0.
//
// The caller maps its integral so that the (possible) singularity sits at
// the left endpoint. The far endpoint must be regular.
QuadResult tanh_sinh_left(const std::function<double(double)>& f, double length,
                          double abs_tol, int max_level = 12);

// 4-point Gauss-Legendre on [a, b].
double gauss_legendre_4(const std::function<double(double)>& f, double a, double b);

}  // namespace fdw

#endif
