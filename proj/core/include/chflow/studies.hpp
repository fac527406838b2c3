#pragma once

#include <string>
#include <vector>

#include "chflow/config.hpp"
#include "chflow/picard.hpp"

namespace chflow {

// Library entry points behind the CLI subcommands. Each writes its artifacts
// into cfg.out_dir and returns the data so tests can assert on it directly.

struct SolveResult {
  IterationLog log;
  ResidualReport residuals;
  DiffeoReport diffeo;
  double d0 = 0.0;
  int exit_code = 0;
  std::string error;
};
// Runs the fixed-point solver; writes fields_z.csv, fields_x.csv, flowmap.csv
// and log.json (the log is written even when the run fails).
SolveResult cmd_solve(const RunConfig& cfg);

struct MmsErrors {
  double v_l2 = 0.0;
  double v_h1 = 0.0;
  double w_l2 = 0.0;
};
// One manufactured-solution solve of the linear system on the identity map.
MmsErrors mms_single(const Params& params, double eps);

struct MmsRow {
  int n = 0;
  MmsErrors err;
  double order_v_l2 = 0.0;
  double order_v_h1 = 0.0;
  double order_w_l2 = 0.0;
};
struct MmsResult {
  std::vector<MmsRow> rows;
  bool pass = false;
};
// Convergence study over n in {16, 32, 64, 128}; asserts observed L2 orders
// >= 1.8 for velocity and density on the finest pair.
MmsResult cmd_mms(const RunConfig& cfg);

struct KornResult {
  double min_korn = 0.0;
  double min_poincare = 0.0;
  // Closed-form sine-field row, computed with analytically sampled gradients.
  double sine_two_D2 = 0.0;
  double sine_grad2 = 0.0;
  double sine_div2 = 0.0;
  // FE-gradient diagnostics of the same fields.
  double sine_korn_fe = 0.0;
  double poincare_pure_x1_fe = 0.0;
  bool pass = false;
};
KornResult cmd_korn(const RunConfig& cfg);

struct ThresholdRow {
  double mu = 0.0;
  bool converged = false;
  int steps = 0;
  double final_ratio = 0.0;
  double final_norm = 0.0;
  std::string error;
};
struct ThresholdResult {
  std::vector<ThresholdRow> rows;
  bool pass = false;
};
ThresholdResult cmd_threshold(const RunConfig& cfg);

struct ScalingRow {
  double amplitude = 0.0;
  double d0 = 0.0;
  double final_norm = 0.0;
  double e_norm = 0.0;
  double min_jac = 0.0;
  bool converged = false;
};
struct ScalingResult {
  std::vector<ScalingRow> rows;
  std::vector<double> norm_ratios;  // successive final-norm ratios
  bool pass = false;
};
ScalingResult cmd_scaling(const RunConfig& cfg);

}  // namespace chflow
