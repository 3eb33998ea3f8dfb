#ifndef FDW_EXPONENT_HPP
#define FDW_EXPONENT_HPP

#include <vector>

namespace fdw {

// Variable exponent alpha(t) = alpha0 + c * t^p on [0, T], with p >= 2 so
// that alpha'(0) = 0 holds structurally. The constructor enforces
// 1 < alpha(t) < 2 on the whole horizon.
class ExponentSchedule {
 public:
  ExponentSchedule(double alpha0, double poly_coeff, int poly_power, double horizon);

  static ExponentSchedule constant(double alpha0, double horizon) {
    return ExponentSchedule(alpha0, 0.0, 2, horizon);
  }

  double alpha(double t) const;
  double alpha0() const { return alpha0_; }
  double alpha_bar() const { return alpha0_ - 1.0; }
  double poly_coeff() const { return poly_coeff_; }
  int poly_power() const { return poly_power_; }
  double horizon() const { return horizon_; }
  bool is_constant() const { return poly_coeff_ == 0.0; }

  // Abel kernel k(t) = t^(1 - alpha(t)) / Gamma(2 - alpha(t)), t > 0.
  double kernel(double t) const;

 private:
  double alpha0_;
  double poly_coeff_;
  int poly_power_;
  double horizon_;
};

// Generalized identity function
//   g(t) = int_0^t (t-s)^(alpha0-2) / Gamma(alpha0-1) * k(s) ds,
// with g(0) = 1, evaluated by singular quadrature to absolute tolerance tol.
double compute_g(const ExponentSchedule& schedule, double t, double tol = 1e-12);

// Per-run table of g values, slab averages and history weights on the
// uniform time grid t_k = k * tau.
struct KernelTable {
  double tau = 0.0;
  int n_steps = 0;
  std::vector<double> g_nodes;       // g(t_k), k = 0..N
  std::vector<double> g_slab_means;  // (1/tau) int over slab n, n = 1..N (index n-1)
  std::vector<double> w;             // w_k = g(t_{k+1}) - g(t_k), k = 0..N-1
  std::vector<double> w_tilde;       // w~_0 = w_0/2, w~_k = (w_k + w_{k-1})/2
  double c0 = 1.0;                   // 1 + w_0/2
};

// N >= 2 required. Constant schedules short-circuit to the exact g == 1
// (Beta-function identity), so their history weights vanish identically.
KernelTable build_kernel_table(const ExponentSchedule& schedule, double T, int N,
                               double tol = 1e-12);

}  // namespace fdw

#endif
