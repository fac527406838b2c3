#pragma once

#include "chflow/params.hpp"
#include "chflow/profile.hpp"
#include "chflow/transform.hpp"

namespace chflow {

// Transport coefficient a(z) = (Ubar + vbar^(1)) composed with the map.
struct TransportCoeff {
  ScalarField a;
  double min_a = 0.0;
};

// a(z) = 1 + psi2(z) + vbar^(1) evaluated at psi(z) by bilinear interpolation.
// Throws DegenerateFlow when the floor is violated.
TransportCoeff coeff_a(const FlowMap& map, const VectorField& v_bar, const Params& params);

// Explicit solution operator of the transformed continuity equation:
// per row, w(z1, z2) = w_in(z2) + cumulative trapezoid of rhs/a in z1.
ScalarField transport_S(const ScalarField& rhs, const BoundaryProfile& w_in,
                        const TransportCoeff& a);

}  // namespace chflow
