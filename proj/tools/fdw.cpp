// Benchmark driver for the two-grid fractional diffusion-wave solver.
//
// Subcommands:
//   solve          run one configuration, print summary, optionally dump the
//                  final field as CSV
//   converge-time  two-mesh temporal refinement study (CSV)
//   converge-space two-mesh spatial refinement study (CSV)
//   bench          paired two-grid vs direct-nonlinear timing rows (CSV)
//   selftest       fast invariant sweep
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "fdw/errors.hpp"
#include "fdw/harness.hpp"

namespace {

struct CommonOpts {
  std::string scheme = "stg";
  int case_id = 1;
  std::vector<double> alpha0{1.5};
  int m_coarse = 8;
  int ratio = 8;
  double t_final = 1.0;
  double quad_tol = 1e-12;
  bool include_setup = false;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scheme = true, bool with_mh = true) {
  if (with_scheme)
    cmd->add_option("--scheme", o.scheme, "stg or nonlinear")
        ->check(CLI::IsMember({"stg", "nonlinear"}));
  cmd->add_option("--case", o.case_id, "nonlinearity case (1 or 2)")->check(CLI::Range(1, 2));
  cmd->add_option("--alpha0", o.alpha0, "initial exponent value(s), each in (1, 2)")
      ->delimiter(',');
  if (with_mh)
    cmd->add_option("--MH", o.m_coarse, "coarse mesh intervals per direction")
        ->check(CLI::PositiveNumber);
  cmd->add_option("--J", o.ratio, "fine/coarse mesh ratio")->check(CLI::Range(2, 1 << 16));
  cmd->add_option("--T", o.t_final, "final time")->check(CLI::PositiveNumber);
  cmd->add_option("--quad-tol", o.quad_tol, "kernel quadrature tolerance");
  cmd->add_flag("--include-setup", o.include_setup,
                "count kernel-table construction in cpu_seconds");
  cmd->add_option("-o,--out", o.out_path, "write CSV here instead of stdout");
}

fdw::StudyConfig to_config(const CommonOpts& o) {
  fdw::StudyConfig cfg;
  cfg.scheme = (o.scheme == "stg") ? fdw::Scheme::kStg : fdw::Scheme::kNonlinear;
  cfg.case_id = o.case_id;
  cfg.alpha0 = o.alpha0;
  cfg.m_coarse = o.m_coarse;
  cfg.ratio = o.ratio;
  cfg.t_final = o.t_final;
  cfg.quad_tol = o.quad_tol;
  cfg.include_setup_time = o.include_setup;
  return cfg;
}

std::ostream& open_out(const CommonOpts& o, std::ofstream& file) {
  if (o.out_path.empty()) return std::cout;
  file.open(o.out_path);
  if (!file) throw fdw::ConfigError("cannot open output file: " + o.out_path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-grid solver for a variable-exponent fractional diffusion-wave benchmark"};
  app.require_subcommand(1);

  CommonOpts solve_o, time_o, space_o, bench_o;
  int solve_n = 64;
  std::string dump_path;
  std::vector<int> time_ladder{8, 16, 32, 64};
  std::vector<int> space_ladder{4, 8, 16};
  int space_steps = 16;
  std::vector<int> bench_steps{64};

  CLI::App* solve = app.add_subcommand("solve", "run one configuration");
  add_common(solve, solve_o);
  int solve_mh = 0;
  solve->add_option("--N", solve_n, "time steps")->check(CLI::PositiveNumber);
  solve->add_option("--Mh", solve_mh, "fine mesh intervals per direction (overrides --MH * --J)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--dump-final", dump_path, "write the final field as CSV (i,j,x,y,value)");

  CLI::App* ctime = app.add_subcommand("converge-time", "temporal refinement study");
  add_common(ctime, time_o);
  ctime->add_option("--N", time_ladder, "time-step ladder (each row compares the N/2 and N runs)")
      ->delimiter(',');

  CLI::App* cspace = app.add_subcommand("converge-space", "spatial refinement study");
  add_common(cspace, space_o, /*with_scheme=*/true, /*with_mh=*/false);
  cspace->add_option("--MH", space_ladder, "coarse-mesh ladder (each row compares the MH/2 and MH runs)")
      ->delimiter(',');
  cspace->add_option("--N", space_steps, "fixed time steps")->check(CLI::PositiveNumber);

  CLI::App* bench = app.add_subcommand("bench", "paired scheme timings");
  add_common(bench, bench_o, /*with_scheme=*/false);
  bench->add_option("--N", bench_steps, "time steps for each paired row");

  app.add_subcommand("selftest", "fast invariant sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) {
      fdw::StudyConfig cfg = to_config(solve_o);
      if (cfg.alpha0.size() != 1)
        throw fdw::ConfigError("solve expects exactly one --alpha0 value");
      fdw::ProblemInstance problem =
          fdw::make_benchmark_problem(cfg.alpha0[0], cfg.case_id, cfg.t_final);
      std::vector<fdw::GridFunction> levels;
      double cpu = 0.0;
      if (solve_mh > 0) {
        if (cfg.scheme == fdw::Scheme::kStg) {
          if (solve_mh % cfg.m_coarse != 0)
            throw fdw::ConfigError("--Mh must be a multiple of --MH");
          cfg.ratio = solve_mh / cfg.m_coarse;
        } else {
          cfg.m_coarse = solve_mh;
          cfg.ratio = 1;
        }
      }
      if (cfg.scheme == fdw::Scheme::kStg) {
        fdw::StgResult r =
            fdw::run_stg(problem, cfg.m_coarse, cfg.ratio, solve_n, cfg.quad_tol, cfg.newton);
        levels = std::move(r.fine.levels);
        cpu = r.coarse.wall_seconds + r.fine.wall_seconds +
              (cfg.include_setup_time ? r.coarse.setup_seconds : 0.0);
        std::cout << "phase_coarse_s=" << r.coarse.wall_seconds
                  << " phase_fine_s=" << r.fine.wall_seconds
                  << " prolongation_s=" << r.prolongation_seconds << "\n";
      } else {
        fdw::Trajectory t = fdw::run_standard(problem, problem.make_grid(cfg.m_coarse * cfg.ratio),
                                              solve_n, cfg.quad_tol, cfg.newton);
        levels = std::move(t.levels);
        cpu = t.wall_seconds + (cfg.include_setup_time ? t.setup_seconds : 0.0);
        std::cout << "newton_iterations=" << t.newton_iterations << "\n";
      }
      std::cout << "scheme=" << fdw::scheme_name(cfg.scheme) << " case=" << cfg.case_id
                << " alpha0=" << cfg.alpha0[0] << " N=" << solve_n
                << " M_h=" << cfg.m_coarse * cfg.ratio << " cpu_seconds=" << cpu
                << " final_norm=" << fdw::norm_l2(levels.back()) << "\n";
      if (!dump_path.empty()) {
        std::ofstream f(dump_path);
        if (!f) throw fdw::ConfigError("cannot open output file: " + dump_path);
        fdw::write_csv(levels.back(), f);
      }
      return 0;
    }
    if (ctime->parsed()) {
      fdw::StudyConfig cfg = to_config(time_o);
      cfg.n_list = time_ladder;
      std::ofstream file;
      fdw::write_rows_csv(fdw::two_mesh_temporal(cfg), open_out(time_o, file));
      return 0;
    }
    if (cspace->parsed()) {
      fdw::StudyConfig cfg = to_config(space_o);
      cfg.mh_list = space_ladder;
      cfg.n_steps = space_steps;
      std::ofstream file;
      fdw::write_rows_csv(fdw::two_mesh_spatial(cfg), open_out(space_o, file));
      return 0;
    }
    if (bench->parsed()) {
      fdw::StudyConfig cfg = to_config(bench_o);
      cfg.n_list = bench_steps;
      std::ofstream file;
      fdw::write_rows_csv(fdw::bench_compare(cfg), open_out(bench_o, file));
      return 0;
    }
    // selftest
    return fdw::selftest(std::cout) ? 0 : 2;
  } catch (const fdw::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const fdw::UsageError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
