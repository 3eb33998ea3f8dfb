#include "fdw/piweights.hpp"

#include <cmath>

#include "fdw/errors.hpp"

namespace fdw {

namespace {

// Second difference (m+1)^q - 2 m^q + (m-1)^q without the catastrophic
// cancellation the naive form suffers for large m. Writing
//   (m+-1)^q = m^q exp(q log1p(+-1/m)),
// the sum of the two exponentials minus 2 is evaluated through the power
// sums p_k = a^k + b^k of a = q log1p(1/m), b = q log1p(-1/m), whose k = 1
// term a + b = q log1p(-1/m^2) carries no cancellation.
double second_difference_pow(double m, double q) {
  if (m <= 4.0) {
    return std::pow(m + 1.0, q) - 2.0 * std::pow(m, q) + std::pow(m - 1.0, q);
  }
  const double a = q * std::log1p(1.0 / m);
  const double b = q * std::log1p(-1.0 / m);
  const double s = q * std::log1p(-1.0 / (m * m));  // a + b, stable
  const double e = a * b;
  double sum = s;          // k = 1 term
  double pkm1 = s;         // p_1
  double pkm2 = 2.0;       // p_0
  double factorial = 1.0;  // k!
  for (int k = 2; k <= 40; ++k) {
    const double pk = s * pkm1 - e * pkm2;
    factorial *= k;
    const double term = pk / factorial;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    pkm2 = pkm1;
    pkm1 = pk;
  }
  return std::pow(m, q) * sum;
}

void check_abar(double abar) {
  if (!(abar > 0.0 && abar < 1.0)) {
    throw ConfigError("PI weights require abar in (0, 1)");
  }
}

}  // namespace

double lambda_weight(double abar, double tau, int n, int j) {
  check_abar(abar);
  if (!(tau > 0.0)) throw ConfigError("lambda_weight: tau must be positive");
  if (j < 1 || j > n) throw UsageError("lambda_weight: index out of range (1 <= j <= n)");
  const double scale = std::pow(tau, abar) / std::tgamma(abar + 2.0);
  if (j == n) return scale;
  return scale * second_difference_pow(static_cast<double>(n - j), abar + 1.0);
}

std::vector<double> build_conv_weights(double abar, double tau, int n_max) {
  check_abar(abar);
  if (!(tau > 0.0)) throw ConfigError("build_conv_weights: tau must be positive");
  if (n_max < 1) throw ConfigError("build_conv_weights: n_max must be >= 1");
  const double scale = std::pow(tau, abar) / std::tgamma(abar + 2.0);
  std::vector<double> conv(n_max);
  conv[0] = scale;
  for (int m = 1; m < n_max; ++m) {
    conv[m] = scale * second_difference_pow(static_cast<double>(m), abar + 1.0);
  }
  return conv;
}

PIWeightRow build_pi_row(double abar, double tau, int n) {
  if (n < 1) throw UsageError("build_pi_row: n must be >= 1");
  PIWeightRow row;
  row.level = n;
  row.lambda.resize(n);
  for (int j = 1; j <= n; ++j) {
    row.lambda[j - 1] = lambda_weight(abar, tau, n, j);
  }
  if (n >= 2) {
    row.lambda_tilde.resize(n - 1);
    row.lambda_tilde[0] = row.lambda[0] + 0.5 * row.lambda[1];
    for (int k = 2; k <= n - 1; ++k) {
      row.lambda_tilde[k - 1] = 0.5 * (row.lambda[k] + row.lambda[k - 1]);
    }
  }
  return row;
}

double apply_averaged_pi(const PIWeightRow& row, double phi1,
                         std::span<const double> phi_half) {
  const int n = row.level;
  if (static_cast<int>(phi_half.size()) != n - 1) {
    throw UsageError("apply_averaged_pi: phi_half must have n-1 entries");
  }
  double acc = row.lambda[0] * phi1;
  for (int j = 2; j <= n; ++j) {
    acc += row.lambda[j - 1] * phi_half[j - 2];
  }
  return acc;
}

}  // namespace fdw
