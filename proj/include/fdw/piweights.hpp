#ifndef FDW_PIWEIGHTS_HPP
#define FDW_PIWEIGHTS_HPP

#include <span>
#include <vector>

namespace fdw {

// Averaged product-integration weights at one level n:
//   lambda[j-1]       = lambda_{n,j},      j = 1..n
//   lambda_tilde[k-1] = lambda~_{n,k},     k = 1..n-1 (empty for n = 1)
struct PIWeightRow {
  int level = 0;
  std::vector<double> lambda;
  std::vector<double> lambda_tilde;
};

// Closed form of (1/tau) int_{t_{n-1}}^{t_n} int_{t_{j-1}}^{min(t,t_j)}
// beta_abar(t-s) ds dt. Depends only on n - j for j <= n - 1.
double lambda_weight(double abar, double tau, int n, int j);

// Convolution vector: conv[m] = lambda_{n, n-m} for m = 1..n_max-1, and
// conv[0] = lambda_{n,n} = tau^abar / Gamma(abar+2). One vector serves every
// level of a run.
std::vector<double> build_conv_weights(double abar, double tau, int n_max);

PIWeightRow build_pi_row(double abar, double tau, int n);

// I^n phi = lambda_{n,1} phi^1 + sum_{j=2..n} lambda_{n,j} phi^{j-1/2}.
// phi_half holds phi^{3/2}, ..., phi^{n-1/2} (n-1 entries).
double apply_averaged_pi(const PIWeightRow& row, double phi1,
                         std::span<const double> phi_half);

}  // namespace fdw

#endif
