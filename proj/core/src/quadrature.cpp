#include "chflow/quadrature.hpp"

namespace chflow {

double integrate(const ScalarField& f) {
  const Grid g = f.grid;
  double sum = 0.0;
  for (int j = 0; j <= g.n; ++j) {
    const double wj = trapezoid_weight(j, g.n, g.h);
    double row = 0.0;
    for (int i = 0; i <= g.n; ++i) row += trapezoid_weight(i, g.n, g.h) * f(i, j);
    sum += wj * row;
  }
  return sum;
}

double integrate_profile(const BoundaryProfile& f) {
  double sum = 0.0;
  for (int i = 0; i <= f.n; ++i) sum += trapezoid_weight(i, f.n, f.h()) * f[i];
  return sum;
}

}  // namespace chflow
