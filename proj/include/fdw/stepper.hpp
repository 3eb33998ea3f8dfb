#ifndef FDW_STEPPER_HPP
#define FDW_STEPPER_HPP

#include <functional>
#include <string>
#include <vector>

#include "fdw/exponent.hpp"
#include "fdw/mesh.hpp"

namespace fdw {

// Nonlinear source f(u) with its analytic derivative.
struct NonlinearTerm {
  std::function<double(double)> f;
  std::function<double(double)> fprime;
  std::string label;

  static NonlinearTerm case_one();          // u^2/(1+u^2) - u, |f'| bounded
  static NonlinearTerm case_two();          // u - u^3, f' unbounded
  static NonlinearTerm zero();
  static NonlinearTerm linear(double c);    // c * u
};

struct ProblemInstance {
  ExponentSchedule schedule;
  std::function<double(double, double)> u0;
  std::function<double(double, double)> ubar0;
  NonlinearTerm nonlinearity;
  double T = 1.0;
  double lx = 0.0, rx = 1.0, ly = 0.0, ry = 1.0;

  Grid2D make_grid(int m) const { return Grid2D(lx, rx, ly, ry, m, m); }
};

struct NewtonOptions {
  double tol = 1e-12;   // ||delta||_inf <= tol * (1 + ||U^n||_inf)
  int max_iters = 50;
};

// Per-level state of one scheme execution: stored levels U^n plus the cached
// fields the history sums consume.
class SchemeRun {
 public:
  SchemeRun(const ProblemInstance& problem, const Grid2D& grid, const KernelTable& table,
            std::vector<double> conv_weights);

  int current_level() const { return static_cast<int>(levels_.size()) - 1; }
  const GridFunction& level(int k) const { return levels_.at(k); }
  const GridFunction& cached_a_dt(int k) const { return a_dt_.at(k); }     // A dt U^k, k >= 1
  const GridFunction& cached_lambda_u(int k) const { return lam_u_.at(k); }
  const GridFunction& cached_a_f(int k) const { return a_f_.at(k); }
  const std::vector<int>& newton_iteration_counts() const { return newton_iters_; }
  const KernelTable& table() const { return table_; }

  // theta_1 = lambda_{1,1}, theta_n = lambda_{n,n}/2 for n >= 2.
  double theta(int n) const;

  // All level-n terms known before U^n: time-derivative transport, w~ and
  // PI histories, f history, and the source A b^n with b^n = gbar_n ubar0.
  GridFunction assemble_rhs(int n) const;

  // Newton solve of the implicit nonlinear equation at level n.
  const GridFunction& step_nonlinear(int n, const NewtonOptions& opts = {});

  // Single linearized solve at level n about the prolonged coarse solution.
  const GridFunction& step_fine_linearized(int n, const GridFunction& prolonged_coarse);

  // Installs a level directly (initial data, restarts, synthetic histories
  // in tests) and computes its caches.
  void append_level(const GridFunction& u);

  // Residual of the discrete level-n equation evaluated on stored levels.
  double scheme_residual(int n) const;

 private:
  GridFunction residual(const GridFunction& u, double th, const GridFunction& rhs) const;

  const ProblemInstance* problem_;
  Grid2D grid_;
  KernelTable table_;
  std::vector<double> conv_;
  GridFunction a_ubar0_;  // A applied to the sampled ubar0
  std::vector<GridFunction> levels_, a_dt_, lam_u_, a_f_;
  std::vector<GridFunction> hist_sum_;  // lam_u + a_f, the lambda~-weighted stream
  std::vector<int> newton_iters_;
};

struct Trajectory {
  std::vector<GridFunction> levels;
  double wall_seconds = 0.0;    // stepping loop only
  double setup_seconds = 0.0;   // kernel table + weight construction
  int newton_iterations = 0;
};

struct StgResult {
  Trajectory coarse;
  Trajectory fine;
  double prolongation_seconds = 0.0;
};

Trajectory run_standard(const ProblemInstance& problem, const Grid2D& grid, int n_steps,
                        double quad_tol = 1e-12, const NewtonOptions& opts = {});

// Coarse nonlinear sweep on m_coarse, then the fine linearized sweep on
// m_coarse * ratio, prolongating the coarse solution level by level.
StgResult run_stg(const ProblemInstance& problem, int m_coarse, int ratio, int n_steps,
                  double quad_tol = 1e-12, const NewtonOptions& opts = {});

}  // namespace fdw

#endif
