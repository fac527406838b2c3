#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "chflow/background.hpp"
#include "chflow/linsolve.hpp"
#include "chflow/params.hpp"
#include "chflow/transform.hpp"

namespace chflow {

// One outer iterate together with the streamline map induced by it.
// dz1_w is the transport-reconstructed z1-derivative of w, kept separate from
// differenced derivatives because the transport equation provides it exactly.
struct IterationState {
  VectorField v;
  ScalarField w;
  ScalarField dz1_w;
  FlowMap map;  // built from v + u_tilde
};

struct StepRecord {
  int step = 0;
  double norm_v_h1 = 0.0;
  double norm_v_w2p = 0.0;
  double norm_w_w1p = 0.0;
  double delta = 0.0;
  double ratio = std::numeric_limits<double>::quiet_NaN();  // recorded from step 2 on
  double min_jac = 0.0;
  double e_norm = 0.0;
  int inner_iters = 0;
  double inner_residual = 0.0;
};

struct IterationLog {
  std::vector<StepRecord> steps;
  bool converged = false;
  double d0 = 0.0;
  std::string error;  // error class name when a run aborts
};

struct Solution {
  VectorField v;
  ScalarField w;
  ScalarField dz1_w;
  FlowMap map;
  LiftResult lift;
  Params params;
};

// Nonlinear sources of the transformed system evaluated at the state, with
// the operator-difference corrections taken through state.map.
std::pair<ScalarField, VectorField> compute_sources(const IterationState& state,
                                                    const LiftResult& lift,
                                                    const Params& params);

// Wall datum of the transformed system: B - 2 mu n.R(v, D).tau per wall.
std::pair<BoundaryProfile, BoundaryProfile> compute_Btilde(const IterationState& state,
                                                           const BoundarySpec& spec,
                                                           const Params& params);

struct StepStats {
  int inner_iters = 0;
  double inner_residual = 0.0;
};

// One outer update: sources and wall datum from the current state, one
// linearized solve, then the map of the new iterate.
IterationState picard_step(const IterationState& state, const BoundarySpec& spec,
                           const LiftResult& lift, const Params& params,
                           StepStats* stats = nullptr);

IterationState initial_state(const LiftResult& lift, const Params& params);

// Outer fixed-point loop. The log is filled progressively and remains valid
// when an error is thrown (the error name is recorded in it).
Solution run_picard(const BoundarySpec& spec, const Params& params, IterationLog& log);

struct XFields {
  VectorField u;
  ScalarField rho;
};

// Changes back to the original coordinates: per column, inverts the row map
// by monotone bisection (tolerance h^3) and resamples, then adds the shear
// background.
XFields reconstruct_x(const Solution& sol);

struct ResidualReport {
  double mass_fixed_point = 0.0;  // sup |w - S(F~ - div v)|
  double momentum_weak = 0.0;     // normalized algebraic residual of the momentum block
  double combined = 0.0;          // sum of the two above
  double z_mass_lp = 0.0;         // strong-form interior residuals (differencing floor O(h^2))
  double z_momentum_lp = 0.0;
  double x_mass_lp = 0.0;
  double x_momentum_lp = 0.0;
  double wall_navier_sup = 0.0;
};

ResidualReport nonlinear_residual(const Solution& sol, const BoundarySpec& spec,
                                  const Params& params);

}  // namespace chflow
