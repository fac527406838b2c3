#pragma once

#include "chflow/grid.hpp"

namespace chflow {

// Physical and numerical constants shared by all modules.
//
//   mu, nu     viscosity pair, mu > 0 and mu + nu >= 0
//   gamma      heat ratio of the pressure law rho^gamma, > 1
//   alpha      wall friction coefficient, >= 0
//   p_norm     Lebesgue exponent used by the p-dependent norms, in (2, inf)
//   n          cells per side, grid spacing h = 1/n
//   c_floor    lower bound enforced on the transport coefficient
//   j_floor    lower bound on the flow-map Jacobian determinant
struct Params {
  double mu = 1.0;
  double nu = 0.0;
  double gamma = 2.0;
  double alpha = 1.0;
  double p_norm = 4.0;
  int n = 64;
  double tol_inner = 1e-10;
  double tol_outer = 1e-8;
  int max_inner = 200;
  int max_outer = 50;
  double c_floor = 0.1;
  double j_floor = 0.5;
  // Damping factor for the staggered mass/momentum inner iteration; 1 is the
  // plain staggered update. The solver halves it and restarts when the
  // undamped loop diverges.
  double inner_relax = 1.0;
  // First-order streamline upwinding of the convection term, for threshold
  // studies at small mu. Off by default.
  bool upwind = false;

  Grid grid() const { return Grid(n); }

  // Throws SolverError(Config) when an invariant is violated.
  void validate() const;
};

}  // namespace chflow
