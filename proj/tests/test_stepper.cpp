#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdw/errors.hpp"
#include "fdw/exponent.hpp"
#include "fdw/mesh.hpp"
#include "fdw/piweights.hpp"
#include "fdw/stepper.hpp"

using namespace fdw;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProblemInstance test_problem(double alpha0, NonlinearTerm f, bool constant_alpha = false) {
  ProblemInstance p{constant_alpha ? ExponentSchedule::constant(alpha0, 1.0)
                                   : ExponentSchedule(alpha0, 1.0 / 11.0, 2, 1.0),
                    [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); },
                    [](double x, double y) {
                      return std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
                    },
                    std::move(f),
                    1.0};
  return p;
}

double max_level_diff(const std::vector<GridFunction>& a, const std::vector<GridFunction>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    GridFunction d = a[k];
    axpy(d, -1.0, b[k]);
    worst = std::max(worst, norm_inf(d));
  }
  return worst;
}

}  // namespace

TEST_CASE("first-level right-hand side is the transported initial data") {
  ProblemInstance p = test_problem(1.4, NonlinearTerm::case_one());
  Grid2D g = Grid2D::unit_square(8);
  const int n_steps = 4;
  KernelTable kt = build_kernel_table(p.schedule, p.T, n_steps, 1e-12);
  SchemeRun run(p, g, kt, build_conv_weights(p.schedule.alpha_bar(), kt.tau, n_steps));

  GridFunction want = apply_compact_A(GridFunction::sample(g, p.u0));
  scale(want, kt.c0 / kt.tau);
  axpy(want, kt.g_slab_means[0], apply_compact_A(GridFunction::sample(g, p.ubar0)));
  want.zero_out_boundary();

  GridFunction got = run.assemble_rhs(1);
  axpy(got, -1.0, want);
  CHECK(norm_inf(got) <= 1e-13 * norm_inf(want));
  CHECK(run.theta(1) == doctest::Approx(lambda_weight(0.4, kt.tau, 1, 1)).epsilon(1e-15));
  CHECK(run.theta(3) == doctest::Approx(0.5 * lambda_weight(0.4, kt.tau, 3, 3)).epsilon(1e-15));
}

TEST_CASE("assembled history matches a straight-loop midpoint oracle") {
  ProblemInstance p = test_problem(1.3, NonlinearTerm::case_two());
  Grid2D g = Grid2D::unit_square(8);
  const int n_steps = 4;
  KernelTable kt = build_kernel_table(p.schedule, p.T, n_steps, 1e-12);
  const double abar = p.schedule.alpha_bar();
  SchemeRun run(p, g, kt, build_conv_weights(abar, kt.tau, n_steps));
  run.step_nonlinear(1);
  run.step_nonlinear(2);

  const int n = 3;
  // Oracle: re-derive the known part of the discrete equation directly from
  // the stored levels, using per-level lambda_{n,j} and midpoint averages
  // instead of the merged lambda~ convolution path.
  auto phi = [&](int k) {
    GridFunction v = apply_lambda(run.level(k));
    GridFunction fu(g, false);
    for (int j = 0; j <= g.my; ++j)
      for (int i = 0; i <= g.mx; ++i) fu.at(i, j) = p.nonlinearity.f(run.level(k).at(i, j));
    axpy(v, 1.0, apply_compact_A(fu));
    return v;
  };
  GridFunction oracle = apply_compact_A(run.level(n - 1));
  scale(oracle, kt.c0 / kt.tau);
  axpy(oracle, kt.g_slab_means[n - 1], apply_compact_A(GridFunction::sample(g, p.ubar0)));
  // history of A dt U with the averaged kernel weights
  for (int k = 1; k <= n - 1; ++k) {
    GridFunction dt = run.level(k);
    axpy(dt, -1.0, run.level(k - 1));
    scale(dt, 1.0 / kt.tau);
    axpy(oracle, -kt.w_tilde[n - k], apply_compact_A(dt));
  }
  // lambda_{n,1} phi^1 + sum_{j=2}^{n} lambda_{n,j} (phi^{j-1} + phi^j)/2,
  // with the unknown phi^n dropped (it belongs to the implicit side).
  axpy(oracle, lambda_weight(abar, kt.tau, n, 1), phi(1));
  for (int j = 2; j <= n; ++j) {
    const double w = 0.5 * lambda_weight(abar, kt.tau, n, j);
    axpy(oracle, w, phi(j - 1));
    if (j < n) axpy(oracle, w, phi(j));
  }
  oracle.zero_out_boundary();

  GridFunction got = run.assemble_rhs(n);
  axpy(got, -1.0, oracle);
  CHECK(norm_inf(got) <= 1e-13 * norm_inf(oracle));
}

TEST_CASE("newton converges quadratically and satisfies the scheme residual") {
  ProblemInstance p = test_problem(1.5, NonlinearTerm::case_two());
  Grid2D g = Grid2D::unit_square(12);
  const int n_steps = 6;
  KernelTable kt = build_kernel_table(p.schedule, p.T, n_steps, 1e-12);
  SchemeRun run(p, g, kt, build_conv_weights(p.schedule.alpha_bar(), kt.tau, n_steps));
  for (int n = 1; n <= n_steps; ++n) {
    const GridFunction& u = run.step_nonlinear(n);
    CHECK(u.zero_boundary());
    CHECK(run.scheme_residual(n) <= 1e-10 * (1.0 + norm_inf(run.assemble_rhs(n))));
  }
  for (int it : run.newton_iteration_counts()) CHECK(it <= 6);
}

TEST_CASE("history caches stay coherent with the stored levels") {
  ProblemInstance p = test_problem(1.6, NonlinearTerm::case_one());
  Grid2D g = Grid2D::unit_square(8);
  const int n_steps = 5;
  KernelTable kt = build_kernel_table(p.schedule, p.T, n_steps, 1e-12);
  SchemeRun run(p, g, kt, build_conv_weights(p.schedule.alpha_bar(), kt.tau, n_steps));
  for (int n = 1; n <= n_steps; ++n) run.step_nonlinear(n);
  for (int k = 1; k <= n_steps; ++k) {
    GridFunction lam = apply_lambda(run.level(k));
    axpy(lam, -1.0, run.cached_lambda_u(k));
    CHECK(norm_inf(lam) <= 1e-13);

    GridFunction fu(g, false);
    for (int j = 0; j <= g.my; ++j)
      for (int i = 0; i <= g.mx; ++i) fu.at(i, j) = p.nonlinearity.f(run.level(k).at(i, j));
    GridFunction af = apply_compact_A(fu);
    axpy(af, -1.0, run.cached_a_f(k));
    CHECK(norm_inf(af) <= 1e-13);

    GridFunction dt = run.level(k);
    axpy(dt, -1.0, run.level(k - 1));
    scale(dt, 1.0 / kt.tau);
    GridFunction adt = apply_compact_A(dt);
    axpy(adt, -1.0, run.cached_a_dt(k));
    CHECK(norm_inf(adt) <= 1e-12 * std::max(1.0, norm_inf(run.cached_a_dt(k))));
  }
}

TEST_CASE("two-grid fine sweep degenerates to the standard scheme for f == 0") {
  ProblemInstance p = test_problem(1.4, NonlinearTerm::zero());
  const int n_steps = 8;
  StgResult stg = run_stg(p, 4, 4, n_steps);
  Trajectory std_run = run_standard(p, p.make_grid(16), n_steps);
  CHECK(max_level_diff(stg.fine.levels, std_run.levels) <= 1e-9);
}

TEST_CASE("two-grid fine sweep is exact for linear nonlinearities") {
  ProblemInstance p = test_problem(1.7, NonlinearTerm::linear(-0.8));
  const int n_steps = 8;
  StgResult stg = run_stg(p, 4, 4, n_steps);
  Trajectory std_run = run_standard(p, p.make_grid(16), n_steps);
  CHECK(max_level_diff(stg.fine.levels, std_run.levels) <= 1e-9);
}

TEST_CASE("constant exponent trajectory matches a dense reference") {
  // alpha == 1.5, f(u) = -u: g == 1, all w vanish, and the scheme reduces to
  //   (1/tau) A U^n - theta_n (Lambda - A) U^n = rhs^n.
  // The reference rebuilds everything on a 9x9-node grid with dense linear
  // algebra and the naive weight formulas.
  const double a0 = 1.5, abar = a0 - 1.0;
  ProblemInstance p = test_problem(a0, NonlinearTerm::linear(-1.0), /*constant_alpha=*/true);
  Grid2D g = Grid2D::unit_square(8);
  const int n_steps = 6;
  const double tau = 1.0 / n_steps;
  Trajectory run = run_standard(p, g, n_steps);

  const int nx = g.mx - 1, nn = nx * nx;
  auto idx = [&](int i, int j) { return (j - 1) * nx + (i - 1); };
  // dense A and Lambda from the stencil masks
  std::vector<double> A(static_cast<std::size_t>(nn) * nn, 0.0);
  std::vector<double> L(static_cast<std::size_t>(nn) * nn, 0.0);
  const double ax[3] = {1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0};
  const double h2 = 1.0 / (g.hx() * g.hx());
  for (int j = 1; j < g.my; ++j)
    for (int i = 1; i < g.mx; ++i)
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii < 1 || ii > g.mx - 1 || jj < 1 || jj > g.my - 1) continue;
          const std::size_t at = static_cast<std::size_t>(idx(i, j)) * nn + idx(ii, jj);
          A[at] += ax[di + 1] * ax[dj + 1];
          const double dxx = (di == 0 ? -2.0 : 1.0) * h2;
          const double dyy = (dj == 0 ? -2.0 : 1.0) * h2;
          L[at] += ax[dj + 1] * dxx + ax[di + 1] * dyy;
        }
  std::vector<double> lam(static_cast<std::size_t>(n_steps));
  const double q = abar + 1.0, scale0 = std::pow(tau, abar) / std::tgamma(abar + 2.0);
  lam[0] = scale0;
  for (int m = 1; m < n_steps; ++m)
    lam[static_cast<std::size_t>(m)] =
        scale0 * (std::pow(m + 1.0, q) - 2.0 * std::pow(m, q) + std::pow(m - 1.0, q));

  auto matvec = [&](const std::vector<double>& m, const std::vector<double>& v) {
    std::vector<double> out(static_cast<std::size_t>(nn), 0.0);
    for (int r = 0; r < nn; ++r)
      for (int c = 0; c < nn; ++c)
        out[static_cast<std::size_t>(r)] += m[static_cast<std::size_t>(r) * nn + c] *
                                            v[static_cast<std::size_t>(c)];
    return out;
  };
  auto dense_gauss = [&](std::vector<double> m, std::vector<double> b) {
    for (int k = 0; k < nn; ++k) {
      int piv = k;
      for (int r = k + 1; r < nn; ++r)
        if (std::fabs(m[static_cast<std::size_t>(r) * nn + k]) >
            std::fabs(m[static_cast<std::size_t>(piv) * nn + k]))
          piv = r;
      for (int c = 0; c < nn; ++c)
        std::swap(m[static_cast<std::size_t>(k) * nn + c], m[static_cast<std::size_t>(piv) * nn + c]);
      std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
      for (int r = k + 1; r < nn; ++r) {
        const double f = m[static_cast<std::size_t>(r) * nn + k] / m[static_cast<std::size_t>(k) * nn + k];
        for (int c = k; c < nn; ++c)
          m[static_cast<std::size_t>(r) * nn + c] -= f * m[static_cast<std::size_t>(k) * nn + c];
        b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(k)];
      }
    }
    for (int k = nn - 1; k >= 0; --k) {
      for (int c = k + 1; c < nn; ++c)
        b[static_cast<std::size_t>(k)] -= m[static_cast<std::size_t>(k) * nn + c] * b[static_cast<std::size_t>(c)];
      b[static_cast<std::size_t>(k)] /= m[static_cast<std::size_t>(k) * nn + k];
    }
    return b;
  };

  std::vector<std::vector<double>> U(static_cast<std::size_t>(n_steps) + 1,
                                     std::vector<double>(static_cast<std::size_t>(nn)));
  std::vector<double> ub(static_cast<std::size_t>(nn));
  for (int j = 1; j < g.my; ++j)
    for (int i = 1; i < g.mx; ++i) {
      U[0][static_cast<std::size_t>(idx(i, j))] = std::sin(kPi * g.x(i)) * std::sin(kPi * g.y(j));
      ub[static_cast<std::size_t>(idx(i, j))] =
          std::sin(2.0 * kPi * g.x(i)) * std::sin(2.0 * kPi * g.y(j));
    }
  std::vector<double> a_ub = matvec(A, ub);
  // phi^k = (Lambda - A) U^k since f(u) = -u
  auto phi = [&](int k) {
    std::vector<double> out = matvec(L, U[static_cast<std::size_t>(k)]);
    std::vector<double> au = matvec(A, U[static_cast<std::size_t>(k)]);
    for (int r = 0; r < nn; ++r) out[static_cast<std::size_t>(r)] -= au[static_cast<std::size_t>(r)];
    return out;
  };
  for (int n = 1; n <= n_steps; ++n) {
    const double theta = (n == 1) ? lam[0] : 0.5 * lam[0];
    std::vector<double> rhs = matvec(A, U[static_cast<std::size_t>(n - 1)]);
    for (int r = 0; r < nn; ++r)
      rhs[static_cast<std::size_t>(r)] =
          rhs[static_cast<std::size_t>(r)] / tau + a_ub[static_cast<std::size_t>(r)];
    // lambda_{n,1} phi^1 + midpoint sums, unknown phi^n split off
    if (n >= 2) {
      std::vector<double> acc(static_cast<std::size_t>(nn), 0.0);
      auto add = [&](double w, const std::vector<double>& v) {
        for (int r = 0; r < nn; ++r) acc[static_cast<std::size_t>(r)] += w * v[static_cast<std::size_t>(r)];
      };
      add(lam[static_cast<std::size_t>(n - 1)], phi(1));
      for (int j = 2; j <= n; ++j) {
        add(0.5 * lam[static_cast<std::size_t>(n - j)], phi(j - 1));
        if (j < n) add(0.5 * lam[static_cast<std::size_t>(n - j)], phi(j));
      }
      for (int r = 0; r < nn; ++r) rhs[static_cast<std::size_t>(r)] += acc[static_cast<std::size_t>(r)];
    }
    std::vector<double> mat(static_cast<std::size_t>(nn) * nn);
    for (int r = 0; r < nn; ++r)
      for (int c = 0; c < nn; ++c) {
        const std::size_t at = static_cast<std::size_t>(r) * nn + c;
        mat[at] = A[at] / tau - theta * (L[at] - A[at]);
      }
    U[static_cast<std::size_t>(n)] = dense_gauss(std::move(mat), std::move(rhs));
  }

  double worst = 0.0;
  for (int n = 0; n <= n_steps; ++n)
    for (int j = 1; j < g.my; ++j)
      for (int i = 1; i < g.mx; ++i)
        worst = std::max(worst, std::fabs(run.levels[static_cast<std::size_t>(n)].at(i, j) -
                                          U[static_cast<std::size_t>(n)][static_cast<std::size_t>(
                                              idx(i, j))]));
  CHECK(worst <= 1e-10);
}

TEST_CASE("constant exponent: no kernel history and quadrature independence") {
  ProblemInstance p = test_problem(1.5, NonlinearTerm::case_one(), /*constant_alpha=*/true);
  const int n_steps = 5;
  KernelTable kt = build_kernel_table(p.schedule, p.T, n_steps, 1e-12);
  for (double wt : kt.w_tilde) CHECK(wt == 0.0);
  Grid2D g = Grid2D::unit_square(8);
  Trajectory tight = run_standard(p, g, n_steps, 1e-13);
  Trajectory loose = run_standard(p, g, n_steps, 1e-6);
  CHECK(max_level_diff(tight.levels, loose.levels) == 0.0);
}

TEST_CASE("stepping misuse is rejected") {
  ProblemInstance p = test_problem(1.5, NonlinearTerm::case_one());
  Grid2D g = Grid2D::unit_square(4);
  KernelTable kt = build_kernel_table(p.schedule, p.T, 3, 1e-10);
  SchemeRun run(p, g, kt, build_conv_weights(0.5, kt.tau, 3));
  CHECK_THROWS_AS(run.step_nonlinear(2), UsageError);
  CHECK_THROWS_AS(run.assemble_rhs(2), UsageError);
  CHECK_THROWS_AS(run.append_level(GridFunction{Grid2D::unit_square(6)}), UsageError);
  CHECK_THROWS_AS(run.step_fine_linearized(1, GridFunction{Grid2D::unit_square(6)}), UsageError);
  CHECK_THROWS_AS(run_stg(p, 4, 1, 3), ConfigError);
}
