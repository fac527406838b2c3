#pragma once

#include "chflow/field.hpp"
#include "chflow/profile.hpp"

namespace chflow {

// Discrete derivatives on the nodal grid: centered second-order differences at
// interior nodes, one-sided second-order at boundary nodes. Exact on affine
// nodal data.
ScalarField d1_fd(const ScalarField& f);
ScalarField d2_fd(const ScalarField& f);
VectorField grad_fd(const ScalarField& f);
ScalarField div_fd(const VectorField& f);

// Classical second differences at interior nodes (3-point along axes, 4-point
// cross for the mixed derivative). Boundary nodes are left at zero; callers
// that need them integrate over the interior only.
ScalarField d11_fd(const ScalarField& f);
ScalarField d22_fd(const ScalarField& f);
ScalarField d12_fd(const ScalarField& f);

// 1-D analog for boundary profiles.
BoundaryProfile deriv_fd(const BoundaryProfile& f);

}  // namespace chflow
