#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fdw/errors.hpp"
#include "fdw/exponent.hpp"

using namespace fdw;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

TEST_CASE("exponent schedule evaluates alpha0 + c t^p") {
  ExponentSchedule s(1.5, 1.0 / 11.0, 2, 1.0);
  CHECK(s.alpha(0.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(s.alpha(1.0) == doctest::Approx(1.5 + 1.0 / 11.0).epsilon(1e-15));
  CHECK(s.alpha(0.5) == doctest::Approx(1.5 + 0.25 / 11.0).epsilon(1e-15));
  CHECK(s.alpha_bar() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(s.is_constant());

  ExponentSchedule c = ExponentSchedule::constant(1.31, 2.0);
  CHECK(c.is_constant());
  CHECK(c.alpha(1.7) == doctest::Approx(1.31).epsilon(1e-15));
}

TEST_CASE("exponent schedule rejects invalid configurations") {
  // alpha(T) = 1.95 + 1/11 > 2.
  CHECK_THROWS_AS(ExponentSchedule(1.95, 1.0 / 11.0, 2, 1.0), ConfigError);
  CHECK_THROWS_AS(ExponentSchedule(1.0, 0.0, 2, 1.0), ConfigError);
  CHECK_THROWS_AS(ExponentSchedule(2.0, 0.0, 2, 1.0), ConfigError);
  // p < 2 breaks the alpha'(0) = 0 requirement.
  CHECK_THROWS_AS(ExponentSchedule(1.5, 0.1, 1, 1.0), ConfigError);
  // Dips below 1 inside the horizon.
  CHECK_THROWS_AS(ExponentSchedule(1.05, -1.0 / 11.0, 2, 1.0), ConfigError);

  ExponentSchedule s(1.5, 1.0 / 11.0, 2, 1.0);
  CHECK_THROWS_AS(s.alpha(-0.1), UsageError);
  CHECK_THROWS_AS(s.alpha(1.1), UsageError);
  CHECK_THROWS_AS(s.kernel(0.0), UsageError);
}

TEST_CASE("Abel kernel values for a constant exponent") {
  // k(t) = t^(1-alpha) / Gamma(2-alpha); alpha = 1.5 gives 1/sqrt(pi t).
  ExponentSchedule s = ExponentSchedule::constant(1.5, 4.0);
  CHECK(s.kernel(1.0) == doctest::Approx(1.0 / kSqrtPi).epsilon(1e-14));
  CHECK(s.kernel(4.0) == doctest::Approx(0.5 / kSqrtPi).epsilon(1e-14));
  CHECK(s.kernel(0.25) == doctest::Approx(2.0 / kSqrtPi).epsilon(1e-14));
}

TEST_CASE("Abel kernel tracks the variable exponent") {
  ExponentSchedule s(1.2, 1.0 / 11.0, 2, 1.0);
  const double t = 0.5;
  const double a = 1.2 + 0.25 / 11.0;
  const double expect = std::pow(t, 1.0 - a) / std::tgamma(2.0 - a);
  CHECK(s.kernel(t) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("g equals 1 identically for constant exponents") {
  ExponentSchedule s = ExponentSchedule::constant(1.7, 1.0);
  CHECK(compute_g(s, 0.0, 1e-12) == 1.0);
  for (double t : {1e-3, 0.1, 0.37, 0.9, 1.0})
    CHECK(std::fabs(compute_g(s, t, 1e-12) - 1.0) <= 1e-11);
}

TEST_CASE("g matches high-precision reference values") {
  // References computed by quadrature after substitutions that remove both
  // endpoint singularities exactly, evaluated at 50 decimal digits.
  struct Pin {
    double a0, t, g;
  };
  const Pin pins[] = {
      {1.2, 0.25, 1.0020383849437608151}, {1.2, 1.0, 0.9385081833339463616},
      {1.5, 0.5, 0.99079183789740138807}, {1.5, 1.0, 0.9389830023990087381},
      {1.8, 1.0, 0.94646606439061201412},
  };
  for (const Pin& p : pins) {
    ExponentSchedule s(p.a0, 1.0 / 11.0, 2, 1.0);
    CHECK(compute_g(s, p.t, 1e-13) == doctest::Approx(p.g).epsilon(1e-12));
  }
  ExponentSchedule s(1.31, 1.0 / 11.0, 2, 1.0);
  CHECK(compute_g(s, 0.77, 1e-13) ==
        doctest::Approx(0.97164869532414939483).epsilon(1e-12));
}

TEST_CASE("g is stable under tolerance refinement") {
  ExponentSchedule s(1.4, 1.0 / 11.0, 2, 1.0);
  for (double t : {0.1, 0.5, 1.0}) {
    const double loose = compute_g(s, t, 1e-10);
    const double tight = compute_g(s, t, 1e-13);
    CHECK(std::fabs(loose - tight) <= 1e-9);
  }
}

TEST_CASE("kernel table wiring: nodes, slabs, weights") {
  ExponentSchedule s(1.5, 1.0 / 11.0, 2, 1.0);
  const int n = 8;
  KernelTable kt = build_kernel_table(s, 1.0, n, 1e-12);
  CHECK(kt.n_steps == n);
  CHECK(kt.tau == doctest::Approx(1.0 / n).epsilon(1e-15));
  REQUIRE(kt.g_nodes.size() == static_cast<std::size_t>(n + 1));
  REQUIRE(kt.g_slab_means.size() == static_cast<std::size_t>(n));
  REQUIRE(kt.w.size() == static_cast<std::size_t>(n));
  REQUIRE(kt.w_tilde.size() == static_cast<std::size_t>(n));

  CHECK(kt.g_nodes[0] == 1.0);
  for (int k = 0; k <= n; ++k)
    CHECK(kt.g_nodes[static_cast<std::size_t>(k)] ==
          doctest::Approx(compute_g(s, k * kt.tau, 1e-12)).epsilon(1e-11));

  for (int k = 0; k < n; ++k) {
    CHECK(kt.w[static_cast<std::size_t>(k)] ==
          doctest::Approx(kt.g_nodes[static_cast<std::size_t>(k + 1)] -
                          kt.g_nodes[static_cast<std::size_t>(k)])
              .epsilon(1e-13));
    const double expect = (k == 0) ? 0.5 * kt.w[0]
                                   : 0.5 * (kt.w[static_cast<std::size_t>(k)] +
                                            kt.w[static_cast<std::size_t>(k - 1)]);
    CHECK(kt.w_tilde[static_cast<std::size_t>(k)] == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK(kt.c0 == doctest::Approx(1.0 + 0.5 * kt.w[0]).epsilon(1e-14));

  // Slab means sit between the adjacent node values (g is monotone here).
  for (int k = 0; k < n; ++k) {
    const double lo = std::min(kt.g_nodes[static_cast<std::size_t>(k)],
                               kt.g_nodes[static_cast<std::size_t>(k + 1)]);
    const double hi = std::max(kt.g_nodes[static_cast<std::size_t>(k)],
                               kt.g_nodes[static_cast<std::size_t>(k + 1)]);
    CHECK(kt.g_slab_means[static_cast<std::size_t>(k)] >= lo - 1e-6);
    CHECK(kt.g_slab_means[static_cast<std::size_t>(k)] <= hi + 1e-6);
  }
}

TEST_CASE("kernel table short-circuits constant exponents exactly") {
  KernelTable kt = build_kernel_table(ExponentSchedule::constant(1.3, 1.0), 1.0, 5, 1e-12);
  for (double g : kt.g_nodes) CHECK(g == 1.0);
  for (double gm : kt.g_slab_means) CHECK(gm == 1.0);
  for (double w : kt.w) CHECK(w == 0.0);
  for (double wt : kt.w_tilde) CHECK(wt == 0.0);
  CHECK(kt.c0 == 1.0);
}

TEST_CASE("kernel table rejects degenerate step counts") {
  ExponentSchedule s(1.5, 1.0 / 11.0, 2, 1.0);
  CHECK_THROWS_AS(build_kernel_table(s, 1.0, 1, 1e-12), ConfigError);
  CHECK_THROWS_AS(build_kernel_table(s, 0.0, 8, 1e-12), ConfigError);
}
