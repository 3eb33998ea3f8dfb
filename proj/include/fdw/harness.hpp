#ifndef FDW_HARNESS_HPP
#define FDW_HARNESS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "fdw/stepper.hpp"

namespace fdw {

enum class Scheme { kStg, kNonlinear };

std::string scheme_name(Scheme s);

// Configuration of a convergence or timing study on the standard benchmark
// problem: u0 = sin(pi x) sin(pi y), ubar0 = sin(2 pi x) sin(2 pi y) on the
// unit square, alpha(t) = alpha0 + t^2 / 11.
struct StudyConfig {
  Scheme scheme = Scheme::kStg;
  int case_id = 1;                    // 1: bounded f', 2: f = u - u^3
  std::vector<double> alpha0{1.5};
  std::vector<int> n_list{8, 16, 32};  // temporal ladder; row N compares N/2 vs N
  std::vector<int> mh_list{4, 8};     // spatial ladder; row M_H compares M_H/2 vs M_H
  int m_coarse = 8;                   // M_H for temporal/bench studies
  int ratio = 8;                      // J = M_h / M_H
  int n_steps = 16;                   // fixed step count for spatial studies
  double t_final = 1.0;
  double quad_tol = 1e-12;
  NewtonOptions newton;
  bool include_setup_time = false;    // fold table construction into cpu_seconds
};

struct StudyRow {
  std::string scheme;
  int case_id = 0;
  double alpha0 = 0.0;
  int n_steps = 0;
  int m_coarse = 0;
  int m_fine = 0;
  double error = 0.0;
  double rate = 0.0;
  bool has_rate = false;
  double cpu_seconds = 0.0;
  double phase_coarse_s = 0.0;
  double phase_fine_s = 0.0;
};

ProblemInstance make_benchmark_problem(double alpha0, int case_id, double t_final = 1.0);

// Two-mesh temporal error: E = max_n || U^n(2 tau) - U^{2n}(tau) ||_h over the
// common levels, fixed spatial mesh. The first argument is the coarser run.
double temporal_two_mesh_error(const std::vector<GridFunction>& coarse_dt,
                               const std::vector<GridFunction>& half_dt);

// Two-mesh spatial error at the final level: nodes of the h-mesh against the
// coincident nodes of the h/2-mesh.
double spatial_two_mesh_error(const GridFunction& u_h, const GridFunction& u_half_h);

// One row per (alpha0, N): errors against the doubled-step companion run.
std::vector<StudyRow> two_mesh_temporal(const StudyConfig& config);

// One row per (alpha0, M_H): errors against the doubled-mesh companion run.
std::vector<StudyRow> two_mesh_spatial(const StudyConfig& config);

// Paired rows (two-grid vs direct nonlinear) at identical resolution.
std::vector<StudyRow> bench_compare(const StudyConfig& config);

void write_rows_csv(const std::vector<StudyRow>& rows, std::ostream& out);

// Cheap invariant sweep (weight identities, operator properties, spline
// reproduction, one tiny solve); prints one line per check.
bool selftest(std::ostream& out);

// Worker cap from the FDW_WORKERS environment variable (>= 1).
int worker_count();

}  // namespace fdw

#endif
