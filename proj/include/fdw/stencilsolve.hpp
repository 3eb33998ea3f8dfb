#ifndef FDW_STENCILSOLVE_HPP
#define FDW_STENCILSOLVE_HPP

#include <memory>
#include <vector>

#include "fdw/mesh.hpp"

namespace fdw {

// Interior-unknown matrix of the 9-point operator
//   v  ->  a * A v  -  b * Lambda v  -  A (r .* v)
// on zero-boundary grid functions, stored and factored in LAPACK banded
// form. Immutable after construction; solves against one factorization are
// read-only.
class StencilMatrix {
 public:
  StencilMatrix(const Grid2D& grid, double a, double b, const GridFunction& r);
  ~StencilMatrix();
  StencilMatrix(StencilMatrix&&) noexcept;
  StencilMatrix& operator=(StencilMatrix&&) noexcept;
  StencilMatrix(const StencilMatrix&) = delete;
  StencilMatrix& operator=(const StencilMatrix&) = delete;

  const Grid2D& grid() const;

  // Matrix action on a zero-boundary grid function (stencil application, no
  // factorization involved); used for residual checks and tests.
  GridFunction apply(const GridFunction& v) const;

  // Banded back-substitution; verifies the relative residual contract
  // ||M U - rhs|| <= 1e-11 ||rhs|| and throws SolverError on violation.
  GridFunction solve(const GridFunction& rhs) const;

  static constexpr double kResidualContract = 1e-11;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fdw

#endif
