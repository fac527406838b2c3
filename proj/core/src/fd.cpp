#include "chflow/fd.hpp"

namespace chflow {

namespace {

// Second-order difference along one line of n+1 samples with spacing h.
inline double line_deriv(const double* f, int i, int n, int stride, double h) {
  if (i == 0) return (-3.0 * f[0] + 4.0 * f[stride] - f[2 * stride]) / (2.0 * h);
  if (i == n)
    return (3.0 * f[n * stride] - 4.0 * f[(n - 1) * stride] + f[(n - 2) * stride]) / (2.0 * h);
  return (f[(i + 1) * stride] - f[(i - 1) * stride]) / (2.0 * h);
}

}  // namespace

ScalarField d1_fd(const ScalarField& f) {
  const Grid g = f.grid;
  ScalarField out(g);
  for (int j = 0; j <= g.n; ++j) {
    const double* row = f.data.data() + g.idx(0, j);
    for (int i = 0; i <= g.n; ++i) out(i, j) = line_deriv(row, i, g.n, 1, g.h);
  }
  return out;
}

ScalarField d2_fd(const ScalarField& f) {
  const Grid g = f.grid;
  ScalarField out(g);
  const int stride = g.n + 1;
  for (int i = 0; i <= g.n; ++i) {
    const double* col = f.data.data() + g.idx(i, 0);
    for (int j = 0; j <= g.n; ++j) out(i, j) = line_deriv(col, j, g.n, stride, g.h);
  }
  return out;
}

VectorField grad_fd(const ScalarField& f) { return {d1_fd(f), d2_fd(f)}; }

ScalarField div_fd(const VectorField& f) {
  ScalarField out = d1_fd(f.c1);
  out += d2_fd(f.c2);
  return out;
}

ScalarField d11_fd(const ScalarField& f) {
  const Grid g = f.grid;
  ScalarField out(g);
  const double h2 = g.h * g.h;
  for (int j = 1; j < g.n; ++j)
    for (int i = 1; i < g.n; ++i)
      out(i, j) = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / h2;
  return out;
}

ScalarField d22_fd(const ScalarField& f) {
  const Grid g = f.grid;
  ScalarField out(g);
  const double h2 = g.h * g.h;
  for (int j = 1; j < g.n; ++j)
    for (int i = 1; i < g.n; ++i)
      out(i, j) = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / h2;
  return out;
}

ScalarField d12_fd(const ScalarField& f) {
  const Grid g = f.grid;
  ScalarField out(g);
  const double h2 = g.h * g.h;
  for (int j = 1; j < g.n; ++j)
    for (int i = 1; i < g.n; ++i)
      out(i, j) =
          (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1)) / (4.0 * h2);
  return out;
}

BoundaryProfile deriv_fd(const BoundaryProfile& f) {
  BoundaryProfile out(f.n);
  const double h = f.h();
  for (int i = 0; i <= f.n; ++i) out[i] = line_deriv(f.v.data(), i, f.n, 1, h);
  return out;
}

}  // namespace chflow
