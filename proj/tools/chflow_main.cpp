// Command-line driver: solve | mms | korn | threshold | scaling, each taking
// a JSON run configuration. Exit codes: 0 success, 1 study assertion failed,
// 2 configuration error, 10-15 solver error classes (see errors.hpp).

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "chflow/errors.hpp"
#include "chflow/studies.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration")->required();
  cmd->add_option("--out", args.out_dir, "output directory override");
  cmd->add_option("--seed", args.seed, "seed override for random-field studies");
}

chflow::RunConfig load(const CommonArgs& args, const std::string& mode) {
  chflow::RunConfig cfg = chflow::load_config(args.config_path);
  cfg.mode = mode;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady compressible channel-flow solver near the shear background"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* solve = app.add_subcommand("solve", "run the fixed-point solver");
  CLI::App* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  CLI::App* korn = app.add_subcommand("korn", "Korn/Poincare ratio study");
  CLI::App* threshold = app.add_subcommand("threshold", "viscosity threshold sweep");
  CLI::App* scaling = app.add_subcommand("scaling", "data-smallness scaling study");
  for (CLI::App* c : {solve, mms, korn, threshold, scaling}) add_common(c, args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      chflow::SolveResult r = chflow::cmd_solve(load(args, "solve"));
      if (r.exit_code == 0) {
        std::printf("converged in %zu steps, D0=%.6g, combined residual=%.3g\n",
                    r.log.steps.size(), r.d0, r.residuals.combined);
      } else {
        std::fprintf(stderr, "run failed: %s (exit %d), log retained\n", r.error.c_str(),
                     r.exit_code);
      }
      return r.exit_code;
    }
    if (mms->parsed()) {
      chflow::MmsResult r = chflow::cmd_mms(load(args, "mms"));
      for (const auto& row : r.rows)
        std::printf("n=%3d  err_v_l2=%.3e  err_w_l2=%.3e  order_v=%.2f  order_w=%.2f\n", row.n,
                    row.err.v_l2, row.err.w_l2, row.order_v_l2, row.order_w_l2);
      std::printf("mms %s\n", r.pass ? "PASS" : "FAIL");
      return r.pass ? 0 : 1;
    }
    if (korn->parsed()) {
      chflow::KornResult r = chflow::cmd_korn(load(args, "korn"));
      std::printf("min Korn ratio %.6f, min Poincare ratio %.6f\n", r.min_korn, r.min_poincare);
      std::printf("sine row: 2|D|^2=%.9f  |grad|^2=%.9f  div^2=%.9f\n", r.sine_two_D2,
                  r.sine_grad2, r.sine_div2);
      std::printf("korn %s\n", r.pass ? "PASS" : "FAIL");
      return r.pass ? 0 : 1;
    }
    if (threshold->parsed()) {
      chflow::ThresholdResult r = chflow::cmd_threshold(load(args, "threshold"));
      for (const auto& row : r.rows)
        std::printf("mu=%.6g  converged=%d  steps=%d  final_norm=%.3e %s\n", row.mu,
                    row.converged ? 1 : 0, row.steps, row.final_norm, row.error.c_str());
      std::printf("threshold %s\n", r.pass ? "PASS" : "FAIL");
      return r.pass ? 0 : 1;
    }
    if (scaling->parsed()) {
      chflow::ScalingResult r = chflow::cmd_scaling(load(args, "scaling"));
      for (const auto& row : r.rows)
        std::printf("amplitude=%.4g  D0=%.4e  final_norm=%.4e\n", row.amplitude, row.d0,
                    row.final_norm);
      std::printf("scaling %s\n", r.pass ? "PASS" : "FAIL");
      return r.pass ? 0 : 1;
    }
  } catch (const chflow::SolverError& e) {
    std::fprintf(stderr, "error [%s]: %s\n", chflow::SolverError::name(e.kind()), e.what());
    return chflow::SolverError::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
