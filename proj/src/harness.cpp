#include "fdw/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <random>
#include <thread>
#include <utility>

#include "fdw/errors.hpp"
#include "fdw/piweights.hpp"
#include "fdw/spline.hpp"
#include "fdw/stencilsolve.hpp"

namespace fdw {

namespace {

constexpr double kPi = 3.14159265358979323846;

NonlinearTerm nonlinearity_for_case(int case_id) {
  if (case_id == 1) return NonlinearTerm::case_one();
  if (case_id == 2) return NonlinearTerm::case_two();
  throw ConfigError("case must be 1 or 2");
}

struct RunOutcome {
  std::vector<GridFunction> levels;
  double cpu_seconds = 0.0;
  double phase_coarse_s = 0.0;
  double phase_fine_s = 0.0;
};

RunOutcome execute(const StudyConfig& cfg, double a0, int m_coarse, int n_steps) {
  ProblemInstance problem = make_benchmark_problem(a0, cfg.case_id, cfg.t_final);
  RunOutcome out;
  if (cfg.scheme == Scheme::kStg) {
    StgResult r = run_stg(problem, m_coarse, cfg.ratio, n_steps, cfg.quad_tol, cfg.newton);
    out.levels = std::move(r.fine.levels);
    out.phase_coarse_s = r.coarse.wall_seconds;
    out.phase_fine_s = r.fine.wall_seconds;
    out.cpu_seconds = r.coarse.wall_seconds + r.fine.wall_seconds;
    if (cfg.include_setup_time) out.cpu_seconds += r.coarse.setup_seconds;
  } else {
    Grid2D grid = problem.make_grid(m_coarse * cfg.ratio);
    Trajectory t = run_standard(problem, grid, n_steps, cfg.quad_tol, cfg.newton);
    out.levels = std::move(t.levels);
    out.phase_fine_s = t.wall_seconds;
    out.cpu_seconds = t.wall_seconds;
    if (cfg.include_setup_time) out.cpu_seconds += t.setup_seconds;
  }
  return out;
}

StudyRow base_row(const StudyConfig& cfg, double a0, int m_coarse, int n_steps) {
  StudyRow row;
  row.scheme = scheme_name(cfg.scheme);
  row.case_id = cfg.case_id;
  row.alpha0 = a0;
  row.n_steps = n_steps;
  row.m_coarse = m_coarse;
  row.m_fine = m_coarse * cfg.ratio;
  return row;
}

// Runs fn(i) for i in [0, count) on at most worker_count() threads.
void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

std::string scheme_name(Scheme s) { return s == Scheme::kStg ? "stg" : "nonlinear"; }

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("FDW_WORKERS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1)
      throw ConfigError("FDW_WORKERS must be a positive integer");
    n = static_cast<int>(std::min<long>(n, cap));
  }
  return n;
}

ProblemInstance make_benchmark_problem(double alpha0, int case_id, double t_final) {
  ProblemInstance p{ExponentSchedule(alpha0, 1.0 / 11.0, 2, t_final),
                    [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); },
                    [](double x, double y) {
                      return std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
                    },
                    nonlinearity_for_case(case_id),
                    t_final};
  return p;
}

double temporal_two_mesh_error(const std::vector<GridFunction>& coarse_dt,
                               const std::vector<GridFunction>& half_dt) {
  if (half_dt.size() != 2 * coarse_dt.size() - 1)
    throw UsageError("temporal_two_mesh_error: runs do not differ by a factor of two in steps");
  double err = 0.0;
  for (std::size_t n = 1; n < coarse_dt.size(); ++n) {
    GridFunction d = coarse_dt[n];
    axpy(d, -1.0, half_dt[2 * n]);
    err = std::max(err, norm_l2(d));
  }
  return err;
}

double spatial_two_mesh_error(const GridFunction& u_h, const GridFunction& u_half_h) {
  const Grid2D& g = u_h.grid();
  const Grid2D& g2 = u_half_h.grid();
  if (!g.same_box(g2) || g2.mx != 2 * g.mx || g2.my != 2 * g.my)
    throw UsageError("spatial_two_mesh_error: meshes do not differ by a factor of two");
  double s = 0.0;
  for (int j = 1; j < g.my; ++j)
    for (int i = 1; i < g.mx; ++i) {
      const double d = u_h.at(i, j) - u_half_h.at(2 * i, 2 * j);
      s += d * d;
    }
  return std::sqrt(g.hx() * g.hy() * s);
}

std::vector<StudyRow> two_mesh_temporal(const StudyConfig& cfg) {
  std::vector<std::vector<StudyRow>> groups(cfg.alpha0.size());
  parallel_for(static_cast<int>(cfg.alpha0.size()), [&](int ai) {
    const double a0 = cfg.alpha0[static_cast<std::size_t>(ai)];
    std::map<int, RunOutcome> cache;
    auto get = [&](int n) -> RunOutcome& {
      auto it = cache.find(n);
      if (it == cache.end()) it = cache.emplace(n, execute(cfg, a0, cfg.m_coarse, n)).first;
      return it->second;
    };
    double prev_err = 0.0;
    for (std::size_t r = 0; r < cfg.n_list.size(); ++r) {
      const int n = cfg.n_list[r];
      if (n < 2 || n % 2 != 0)
        throw ConfigError("temporal study: each N must be even (the row compares N/2 and N)");
      RunOutcome& run = get(n);
      const double err = temporal_two_mesh_error(get(n / 2).levels, run.levels);
      StudyRow row = base_row(cfg, a0, cfg.m_coarse, n);
      row.error = err;
      if (r > 0) {
        row.rate = std::log2(prev_err / err);
        row.has_rate = true;
      }
      row.cpu_seconds = run.cpu_seconds;
      row.phase_coarse_s = run.phase_coarse_s;
      row.phase_fine_s = run.phase_fine_s;
      groups[static_cast<std::size_t>(ai)].push_back(row);
      prev_err = err;
      cache.erase(n / 2);  // ladder entries are consumed left to right
    }
  });
  std::vector<StudyRow> rows;
  for (auto& g : groups)
    for (auto& r : g) rows.push_back(std::move(r));
  return rows;
}

std::vector<StudyRow> two_mesh_spatial(const StudyConfig& cfg) {
  std::vector<std::vector<StudyRow>> groups(cfg.alpha0.size());
  parallel_for(static_cast<int>(cfg.alpha0.size()), [&](int ai) {
    const double a0 = cfg.alpha0[static_cast<std::size_t>(ai)];
    struct Final {
      GridFunction u;
      double cpu, coarse_s, fine_s;
    };
    std::map<int, Final> cache;
    auto get = [&](int mh) -> Final& {
      auto it = cache.find(mh);
      if (it == cache.end()) {
        RunOutcome run = execute(cfg, a0, mh, cfg.n_steps);
        it = cache
                 .emplace(mh, Final{std::move(run.levels.back()), run.cpu_seconds,
                                    run.phase_coarse_s, run.phase_fine_s})
                 .first;
      }
      return it->second;
    };
    double prev_err = 0.0;
    for (std::size_t r = 0; r < cfg.mh_list.size(); ++r) {
      const int mh = cfg.mh_list[r];
      if (mh < 4 || mh % 2 != 0)
        throw ConfigError("spatial study: each M_H must be even and >= 4 "
                          "(the row compares M_H/2 and M_H)");
      Final& run = get(mh);
      const double err = spatial_two_mesh_error(get(mh / 2).u, run.u);
      StudyRow row = base_row(cfg, a0, mh, cfg.n_steps);
      row.error = err;
      if (r > 0) {
        row.rate = std::log2(prev_err / err);
        row.has_rate = true;
      }
      row.cpu_seconds = run.cpu;
      row.phase_coarse_s = run.coarse_s;
      row.phase_fine_s = run.fine_s;
      groups[static_cast<std::size_t>(ai)].push_back(row);
      prev_err = err;
      cache.erase(mh / 2);
    }
  });
  std::vector<StudyRow> rows;
  for (auto& g : groups)
    for (auto& r : g) rows.push_back(std::move(r));
  return rows;
}

std::vector<StudyRow> bench_compare(const StudyConfig& cfg) {
  std::vector<StudyRow> rows;
  for (double a0 : cfg.alpha0)
    for (int n : cfg.n_list) {
      StudyConfig stg_cfg = cfg;
      stg_cfg.scheme = Scheme::kStg;
      RunOutcome stg = execute(stg_cfg, a0, cfg.m_coarse, n);
      StudyConfig non_cfg = cfg;
      non_cfg.scheme = Scheme::kNonlinear;
      RunOutcome non = execute(non_cfg, a0, cfg.m_coarse, n);

      // Shared error column: final-time discrepancy between the two schemes.
      GridFunction d = stg.levels.back();
      axpy(d, -1.0, non.levels.back());
      const double disc = norm_l2(d);

      StudyRow srow = base_row(stg_cfg, a0, cfg.m_coarse, n);
      srow.error = disc;
      srow.cpu_seconds = stg.cpu_seconds;
      srow.phase_coarse_s = stg.phase_coarse_s;
      srow.phase_fine_s = stg.phase_fine_s;
      rows.push_back(srow);

      StudyRow nrow = base_row(non_cfg, a0, cfg.m_coarse, n);
      nrow.error = disc;
      nrow.cpu_seconds = non.cpu_seconds;
      nrow.phase_fine_s = non.phase_fine_s;
      rows.push_back(nrow);
    }
  return rows;
}

void write_rows_csv(const std::vector<StudyRow>& rows, std::ostream& out) {
  out << "scheme,case,alpha0,N,M_H,M_h,error,rate,cpu_seconds,phase_coarse_s,phase_fine_s\n";
  char buf[256];
  for (const StudyRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.6g,%d,%d,%d,%.6e,", r.scheme.c_str(), r.case_id,
                  r.alpha0, r.n_steps, r.m_coarse, r.m_fine, r.error);
    out << buf;
    if (r.has_rate) {
      std::snprintf(buf, sizeof buf, "%.4f", r.rate);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f\n", r.cpu_seconds, r.phase_coarse_s,
                  r.phase_fine_s);
    out << buf;
  }
}

namespace {

bool report(std::ostream& out, const char* name, bool ok, double measured) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-44s %s   (%.3e)\n", name, ok ? "ok" : "FAIL", measured);
  out << buf;
  return ok;
}

}  // namespace

bool selftest(std::ostream& out) {
  bool all = true;

  {  // Row-sum identity of the averaged product-integration weights.
    const double abar = 0.5, tau = 1e-2;
    const int n = 500;
    std::vector<double> conv = build_conv_weights(abar, tau, n);
    double sum = 0.0;
    for (int j = 1; j <= n; ++j) sum += conv[n - j];
    const double tn = n * tau, tn1 = (n - 1) * tau;
    const double exact =
        (std::pow(tn, abar + 1.0) - std::pow(tn1, abar + 1.0)) / (tau * std::tgamma(abar + 2.0));
    const double rel = std::fabs(sum - exact) / exact;
    all &= report(out, "pi-weights row-sum identity", rel <= 1e-12, rel);
  }

  {  // Series-evaluated weights against a plain long-double second difference.
    const double abar = 0.35, tau = 0.02;
    double worst = 0.0;
    for (int m : {5, 9, 33}) {
      const long double q = abar + 1.0L;
      const long double d2 = powl(m + 1.0L, q) - 2.0L * powl((long double)m, q) +
                             powl(m - 1.0L, q);
      const double expect =
          static_cast<double>(d2) * std::pow(tau, abar) / std::tgamma(abar + 2.0);
      const double got = lambda_weight(abar, tau, m + 1, 1);
      worst = std::max(worst, std::fabs(got - expect) / expect);
    }
    all &= report(out, "pi-weights series evaluation", worst <= 1e-12, worst);
  }

  {  // g == 1 for a constant exponent (Beta-function identity).
    const double g = compute_g(ExponentSchedule::constant(1.4, 1.0), 0.7, 1e-13);
    const double err = std::fabs(g - 1.0);
    all &= report(out, "kernel identity g(t) == 1, constant alpha", err <= 1e-11, err);
  }

  {  // Norm equivalence and symmetry of the compact average.
    Grid2D grid = Grid2D::unit_square(17);
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    bool equiv = true;
    double sym = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
      GridFunction u(grid), v(grid);
      for (int j = 1; j < grid.my; ++j)
        for (int i = 1; i < grid.mx; ++i) {
          u.at(i, j) = unif(rng);
          v.at(i, j) = unif(rng);
        }
      const double n2 = inner_product(u, u), na2 = inner_product(u, apply_compact_A(u));
      equiv &= (na2 >= n2 / 3.0 - 1e-13 && na2 <= n2 + 1e-13);
      sym = std::max(sym, std::fabs(inner_product(apply_compact_A(u), v) -
                                    inner_product(u, apply_compact_A(v))));
    }
    all &= report(out, "compact-average norm equivalence", equiv, sym);
    all &= report(out, "compact-average symmetry", sym <= 1e-13, sym);
  }

  {  // Cubic reproduction of the moment-form spline.
    const int m = 7;
    std::vector<double> w(m + 1);
    for (int i = 0; i <= m; ++i) {
      const double x = i / static_cast<double>(m);
      w[static_cast<std::size_t>(i)] = x * x * x;
    }
    SplineCoeffs1D c = cubic_spline_moments(w, 0.0, 1.0 / m, 0.0, 6.0);
    double worst = 0.0;
    for (int k = 0; k <= 50; ++k) {
      const double x = k / 50.0;
      worst = std::max(worst, std::fabs(spline_eval(c, x) - x * x * x));
    }
    all &= report(out, "cubic-spline polynomial reproduction", worst <= 1e-13, worst);
  }

  {  // One tiny factor-and-solve round trip under the residual contract.
    Grid2D grid = Grid2D::unit_square(9);
    GridFunction r(grid);
    StencilMatrix mat(grid, 3.0, 0.02, r);
    GridFunction rhs = GridFunction::sample(
        grid, [](double x, double y) { return std::sin(kPi * x) * std::sin(2.0 * kPi * y); });
    GridFunction u = mat.solve(rhs);
    GridFunction res = mat.apply(u);
    axpy(res, -1.0, rhs);
    const double rel = norm_l2(res) / norm_l2(rhs);
    all &= report(out, "banded solve residual contract", rel <= StencilMatrix::kResidualContract,
                  rel);
  }

  return all;
}

}  // namespace fdw
