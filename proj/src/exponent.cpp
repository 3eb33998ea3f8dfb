#include "fdw/exponent.hpp"

#include <cmath>
#include <sstream>

#include "fdw/errors.hpp"
#include "fdw/quadrature.hpp"

namespace fdw {

ExponentSchedule::ExponentSchedule(double alpha0, double poly_coeff, int poly_power,
                                   double horizon)
    : alpha0_(alpha0), poly_coeff_(poly_coeff), poly_power_(poly_power), horizon_(horizon) {
  if (poly_power_ < 2) {
    throw ConfigError("exponent polynomial power must be >= 2 (needed for alpha'(0)=0)");
  }
  if (!(horizon_ > 0.0)) {
    throw ConfigError("exponent schedule horizon must be positive");
  }
  // The polynomial family is monotone on [0, T], so the extremes sit at the
  // endpoints; sample a few interior points anyway.
  const int samples = 16;
  for (int k = 0; k <= samples; ++k) {
    const double t = horizon_ * static_cast<double>(k) / samples;
    const double a = alpha0_ + poly_coeff_ * std::pow(t, poly_power_);
    if (!(a > 1.0 && a < 2.0)) {
      std::ostringstream msg;
      msg << "alpha(t) = " << a << " at t = " << t << " leaves (1, 2)";
      throw ConfigError(msg.str());
    }
  }
}

double ExponentSchedule::alpha(double t) const {
  if (t < 0.0 || t > horizon_) {
    throw UsageError("alpha(t) evaluated outside [0, T]");
  }
  return alpha0_ + poly_coeff_ * std::pow(t, poly_power_);
}

double ExponentSchedule::kernel(double t) const {
  if (!(t > 0.0)) {
    throw UsageError("Abel kernel is singular at t <= 0");
  }
  const double a = alpha(t);
  return std::pow(t, 1.0 - a) / std::tgamma(2.0 - a);
}

double compute_g(const ExponentSchedule& schedule, double t, double tol) {
  if (t < 0.0 || t > schedule.horizon()) {
    throw UsageError("compute_g: t outside [0, T]");
  }
  if (!(tol > 0.0)) {
    throw UsageError("compute_g: tolerance must be positive");
  }
  if (t == 0.0) return 1.0;

  const double a0 = schedule.alpha0();
  const double inv_gamma = 1.0 / std::tgamma(a0 - 1.0);
  const double half = 0.5 * t;

  // Split at t/2 so each panel has a single endpoint singularity, handled by
  // the tanh-sinh rule with the singular endpoint mapped to the origin.
  //
  // Panel A: s in (0, t/2], integrand (t-s)^(a0-2)/Gamma(a0-1) * k(s),
  // singular like s^(1-alpha(s)) at s = 0.
  auto panel_a = [&](double s) {
    return std::pow(t - s, a0 - 2.0) * inv_gamma * schedule.kernel(s);
  };
  // Panel B: v = t - s in (0, t/2], integrand v^(a0-2)/Gamma(a0-1) * k(t-v),
  // singular like v^(a0-2) at v = 0. k is regular near s = t, so the rounded
  // argument t - v is harmless there.
  auto panel_b = [&](double v) {
    double s = t - v;
    if (s <= 0.0) s = v;  // only reachable through rounding at v ~ t
    return std::pow(v, a0 - 2.0) * inv_gamma * schedule.kernel(s);
  };

  const QuadResult ra = tanh_sinh_left(panel_a, half, 0.5 * tol);
  const QuadResult rb = tanh_sinh_left(panel_b, half, 0.5 * tol);
  if (!ra.converged || !rb.converged) {
    throw NumericalError("compute_g quadrature did not reach tolerance",
                         ra.error_estimate + rb.error_estimate);
  }
  return ra.value + rb.value;
}

KernelTable build_kernel_table(const ExponentSchedule& schedule, double T, int N,
                               double tol) {
  if (N < 2) {
    throw ConfigError("build_kernel_table requires N >= 2");
  }
  if (!(T > 0.0) || T > schedule.horizon()) {
    throw ConfigError("build_kernel_table: T must lie in (0, horizon]");
  }
  KernelTable table;
  table.tau = T / N;
  table.n_steps = N;
  table.g_nodes.resize(N + 1);
  table.g_slab_means.resize(N);
  table.w.resize(N);
  table.w_tilde.resize(N);

  if (schedule.is_constant()) {
    // Beta identity: g == 1 exactly for constant alpha, so every history
    // weight vanishes and c0 = 1.
    for (int k = 0; k <= N; ++k) table.g_nodes[k] = 1.0;
    for (int n = 0; n < N; ++n) table.g_slab_means[n] = 1.0;
    // w, w_tilde already zero
    table.c0 = 1.0;
    return table;
  }

  for (int k = 0; k <= N; ++k) {
    table.g_nodes[k] = compute_g(schedule, k * table.tau, tol);
  }
  auto g_at = [&](double t) { return compute_g(schedule, t, tol); };
  for (int n = 1; n <= N; ++n) {
    const double a = (n - 1) * table.tau;
    const double b = n * table.tau;
    table.g_slab_means[n - 1] = gauss_legendre_4(g_at, a, b) / table.tau;
  }
  for (int k = 0; k < N; ++k) {
    table.w[k] = table.g_nodes[k + 1] - table.g_nodes[k];
  }
  table.w_tilde[0] = 0.5 * table.w[0];
  for (int k = 1; k < N; ++k) {
    table.w_tilde[k] = 0.5 * (table.w[k] + table.w[k - 1]);
  }
  table.c0 = 1.0 + 0.5 * table.w[0];
  return table;
}

}  // namespace fdw
