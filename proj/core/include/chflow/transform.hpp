#pragma once

#include "chflow/field.hpp"
#include "chflow/params.hpp"

namespace chflow {

// The slope field driving the streamline map, with the data needed to
// integrate it: tilde v = (v+u~)^(2) / (Ubar + (v+u~)^(1)) at the nodes,
// its x2-derivative, and the denominator (for the transport floor).
struct TildeV {
  ScalarField vt;
  ScalarField dvt_dx2;
  ScalarField denom;
  double min_denom = 0.0;
};

TildeV tilde_v(const VectorField& v_plus_u, const Params& params);

// Builds a TildeV from a raw nodal slope field (denominator taken as the
// plain shear profile); used by closed-form map tests.
TildeV tilde_v_from_field(const ScalarField& vt);

// The streamline transformation per grid row: psi2 holds the mapped x2 of
// each node, e21/e22 the Jacobian perturbation entries, jac = 1 + e22 the
// determinant, et21/et22 the inverse-transfer entries -e21/jac and 1/jac - 1.
// First differences of e21/e22 feed the second-derivative corrections.
struct FlowMap {
  ScalarField psi2;
  ScalarField e21, e22, jac;
  ScalarField et21, et22;
  ScalarField de21_d1, de21_d2, de22_d1, de22_d2;
  double min_jac = 1.0;
  double c_min = 0.0;  // min over nodes of (Ubar + vbar^(1)) composed with psi

  static FlowMap identity(Grid g);
};

// Integrates d(psi2)/dz1 = vt(z1, psi2) per row with classical RK4 at step h,
// together with the variational equation for e22. Throws DiffeoFailure when
// the Jacobian drops below j_floor or psi2 leaves [0,1] by more than h^2.
FlowMap build_flowmap(const TildeV& tv, const Params& params);

// Builds a map directly from given fields (Jacobian, inverse entries and
// difference fields derived; no diffeomorphism checks). Used for synthetic
// closed-form maps in diagnostics and tests.
FlowMap flowmap_from_fields(const ScalarField& psi2, const ScalarField& e21,
                            const ScalarField& e22);

// Convection coefficient of the transformed momentum operator, Ubar o psi.
ScalarField ubar_composed(const FlowMap& map);

// Operator differences R(f, D) = D_x f - D_z f computed through the map
// (x-derivatives reconstructed from z-differences via the inverse transfer).
ScalarField x_d1(const ScalarField& f, const FlowMap& map);
ScalarField x_d2(const ScalarField& f, const FlowMap& map);
ScalarField r_d1(const ScalarField& f, const FlowMap& map);
ScalarField r_d2(const ScalarField& f, const FlowMap& map);
VectorField r_grad(const ScalarField& f, const FlowMap& map);
ScalarField r_div(const VectorField& f, const FlowMap& map);
VectorField r_laplacian(const VectorField& f, const FlowMap& map);
VectorField r_grad_div(const VectorField& f, const FlowMap& map);
SymTensorField r_sym_grad(const VectorField& f, const FlowMap& map);

// Inverts z2 -> psi2(z1_i, z2) on one column by bisection on the monotone
// piecewise-linear interpolant. Throws InversionFailure when the column is
// not strictly increasing.
double invert_psi2_column(const FlowMap& map, int i, double x2, double tol);

struct DiffeoReport {
  double min_jac = 0.0;
  double max_abs_e21 = 0.0;
  double max_abs_e22 = 0.0;
  double e_norm_w1p = 0.0;
  double et_norm_w1p = 0.0;  // same norm of the inverse-transfer entries
  bool pass = false;
};

DiffeoReport check_diffeo(const FlowMap& map, const Params& params);

}  // namespace chflow
