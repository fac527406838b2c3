#pragma once

#include <utility>

#include "chflow/field.hpp"
#include "chflow/params.hpp"
#include "chflow/profile.hpp"

namespace chflow {

// Boundary data of the full problem: velocity traces on inflow/outflow,
// density on the inflow, wall friction data on the two wall segments.
struct BoundarySpec {
  VectorProfile u0_in, u0_out;
  BoundaryProfile rho_in;
  BoundaryProfile b_bottom, b_top;

  // Checks the inflow sign (first component >= c_floor), positivity of
  // rho_in, and the corner-vanishing requirement on the perturbation
  // profiles (two nodes at each corner). Throws SolverError.
  void validate(const Params& params) const;
};

struct LiftResult {
  VectorField u_tilde;
  double w2p_norm = 0.0;       // discrete W^{2,p} norm of the lift
  double wall_residual = 0.0;  // max |2 mu n.D(u~).tau + alpha u~.tau| at wall nodes
};

// Background shear state: velocity ((1+x2, 0)) and unit density.
std::pair<std::array<double, 2>, double> eval_shear(double x1, double x2);

// Shear velocity traces on the inflow/outflow sides, indexed by j.
VectorProfile shear_trace(int n);

// Wall datum induced by the shear flow, tau = e1 on both walls:
// bottom -mu + alpha, top mu + 2*alpha (constant profiles).
std::pair<BoundaryProfile, BoundaryProfile> compute_btilde(const Params& params);

// Aggregate trace-norm distance of the boundary data from the shear data:
// sum of |u0 - U0| in the (2-1/p, p) trace norm over both Dirichlet sides,
// |b - btilde| in (1-1/p, p) over both walls, |rho_in - 1| in W^{1,p}.
double compute_D0(const BoundarySpec& spec, const Params& params);

// Homogenizing lift: bilinear Galerkin solution of the homogeneous elastic
// system with Dirichlet values u0 - U0 on inflow/outflow, zero normal
// component on the walls, and the friction condition imposed weakly.
LiftResult solve_lame_lift(const BoundarySpec& spec, const Params& params);

// Trace norm used for the velocity data term of D0: W^{1,p} plus the
// Slobodeckij seminorm of the derivative at order 1 - 1/p.
double trace_norm_2mp(const BoundaryProfile& f, double p);

}  // namespace chflow
