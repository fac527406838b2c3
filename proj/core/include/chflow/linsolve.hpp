#pragma once

#include "chflow/fem.hpp"
#include "chflow/field.hpp"
#include "chflow/params.hpp"
#include "chflow/profile.hpp"
#include "chflow/transform.hpp"
#include "chflow/transport.hpp"

namespace chflow {

// Data of one linearized solve: sources, wall datum, inflow density trace,
// the frozen flow map, and the transport/convection field it came from.
struct LinearData {
  ScalarField f;
  VectorField g;
  BoundaryProfile b_tilde_bottom, b_tilde_top;
  BoundaryProfile w_in;
  FlowMap map;
  VectorField v_bar;
  Params params;
};

struct LinearSolution {
  VectorField v;
  ScalarField w;
  int inner_iterations = 0;
  double inner_residual = 0.0;
};

// Momentum block: assembled and factorized once per LinearData; the density
// coupling enters through the right-hand side gamma * (w, div phi).
//
// Weak form over the constrained bilinear space:
//   ((Ubar o psi) d1 v, phi) + (v2, phi1) + 2 mu (D(v), D(phi))
//   + nu (div v, div phi) + alpha <v.tau, phi.tau>_wall
//   = (g, phi) + <B~, phi.tau>_wall + gamma (w, div phi)
class MomentumSystem {
 public:
  explicit MomentumSystem(const LinearData& data);

  Eigen::VectorXd rhs(const ScalarField& w) const;
  VectorField solve_with_density(const ScalarField& w) const;
  const fem::VelocitySolver& fem_solver() const { return *solver_; }

 private:
  std::unique_ptr<fem::VelocitySolver> solver_;
  Eigen::VectorXd rhs_data_;
  double gamma_;
};

inline MomentumSystem assemble_momentum(const LinearData& data) { return MomentumSystem(data); }

// Staggered inner iteration: w^k = S(f - div v^{k-1}), then the momentum
// solve with w^k, repeated until the combined increment drops below
// tol_inner. Raises InnerDivergence after five consecutive increment growths;
// the solver retries with a halved relaxation factor (three times) before
// giving up, which leaves the fixed point unchanged.
LinearSolution solve_linear_system(const LinearData& data);

// Dense monolithic assembly of the same discrete system (the transport
// coupling substituted into the momentum matrix column by column). Oracle for
// the staggered iteration on coarse grids.
LinearSolution solve_monolithic(const LinearData& data);

}  // namespace chflow
