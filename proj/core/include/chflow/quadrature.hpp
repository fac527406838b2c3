#pragma once

#include "chflow/field.hpp"
#include "chflow/profile.hpp"

namespace chflow {

// Composite trapezoid over all cells; exact for bilinear-per-cell integrands.
double integrate(const ScalarField& f);

// 1-D composite trapezoid on [0,1].
double integrate_profile(const BoundaryProfile& f);

// Trapezoid weight of node index i on a line of n cells (h/2 at the ends).
inline double trapezoid_weight(int i, int n, double h) {
  return (i == 0 || i == n) ? 0.5 * h : h;
}

}  // namespace chflow
