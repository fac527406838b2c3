#include "chflow/norms.hpp"

#include <cmath>

#include "chflow/errors.hpp"
#include "chflow/fd.hpp"
#include "chflow/quadrature.hpp"

namespace chflow {

namespace {

double lp_of_magnitude(const ScalarField& mag, double p) {
  ScalarField powed(mag.grid);
  for (size_t k = 0; k < mag.data.size(); ++k) powed.data[k] = std::pow(mag.data[k], p);
  return integrate(powed);
}

ScalarField magnitude(const ScalarField& f) {
  ScalarField m(f.grid);
  for (size_t k = 0; k < f.data.size(); ++k) m.data[k] = std::abs(f.data[k]);
  return m;
}

ScalarField magnitude(const VectorField& f) {
  ScalarField m(f.grid());
  for (size_t k = 0; k < m.data.size(); ++k) m.data[k] = std::hypot(f.c1.data[k], f.c2.data[k]);
  return m;
}

// Frobenius magnitude of the discrete Jacobian.
ScalarField grad_magnitude(const ScalarField& f) {
  VectorField g = grad_fd(f);
  return magnitude(g);
}

ScalarField grad_magnitude(const VectorField& f) {
  VectorField g1 = grad_fd(f.c1);
  VectorField g2 = grad_fd(f.c2);
  ScalarField m(f.grid());
  for (size_t k = 0; k < m.data.size(); ++k)
    m.data[k] = std::sqrt(g1.c1.data[k] * g1.c1.data[k] + g1.c2.data[k] * g1.c2.data[k] +
                          g2.c1.data[k] * g2.c1.data[k] + g2.c2.data[k] * g2.c2.data[k]);
  return m;
}

// Frobenius magnitude of second differences (mixed term counted twice), valid
// at interior nodes.
ScalarField hess_magnitude(const ScalarField& f) {
  ScalarField f11 = d11_fd(f), f12 = d12_fd(f), f22 = d22_fd(f);
  ScalarField m(f.grid);
  for (size_t k = 0; k < m.data.size(); ++k)
    m.data[k] = std::sqrt(f11.data[k] * f11.data[k] + 2.0 * f12.data[k] * f12.data[k] +
                          f22.data[k] * f22.data[k]);
  return m;
}

ScalarField hess_magnitude(const VectorField& f) {
  ScalarField m1 = hess_magnitude(f.c1), m2 = hess_magnitude(f.c2);
  ScalarField m(f.grid());
  for (size_t k = 0; k < m.data.size(); ++k) m.data[k] = std::hypot(m1.data[k], m2.data[k]);
  return m;
}

// Integral of |mag|^p over interior nodes only (weight h^2 per node).
double interior_lp_pow(const ScalarField& mag, double p) {
  const Grid g = mag.grid;
  double sum = 0.0;
  for (int j = 1; j < g.n; ++j)
    for (int i = 1; i < g.n; ++i) sum += std::pow(std::abs(mag(i, j)), p);
  return sum * g.h * g.h;
}

template <class Field>
double norm_impl(const Field& f, NormKind kind, double p) {
  switch (kind) {
    case NormKind::Lsup:
      return f.max_abs();
    case NormKind::Lp:
      return std::pow(lp_of_magnitude(magnitude(f), p), 1.0 / p);
    case NormKind::H1: {
      double a = lp_of_magnitude(magnitude(f), 2.0);
      double b = lp_of_magnitude(grad_magnitude(f), 2.0);
      return std::sqrt(a + b);
    }
    case NormKind::W1p: {
      double a = lp_of_magnitude(magnitude(f), p);
      double b = lp_of_magnitude(grad_magnitude(f), p);
      return std::pow(a + b, 1.0 / p);
    }
    case NormKind::W2pDiscrete: {
      double a = lp_of_magnitude(magnitude(f), p);
      double b = lp_of_magnitude(grad_magnitude(f), p);
      double c = interior_lp_pow(hess_magnitude(f), p);
      return std::pow(a + b + c, 1.0 / p);
    }
  }
  return 0.0;
}

double profile_lp(const BoundaryProfile& f, double p) {
  BoundaryProfile powed(f.n);
  for (int i = 0; i <= f.n; ++i) powed[i] = std::pow(std::abs(f[i]), p);
  return std::pow(integrate_profile(powed), 1.0 / p);
}

}  // namespace

double norm(const ScalarField& f, NormKind kind, double p) { return norm_impl(f, kind, p); }
double norm(const VectorField& f, NormKind kind, double p) { return norm_impl(f, kind, p); }

double slobodeckij_seminorm(const BoundaryProfile& f, double s, double p) {
  const double h = f.h();
  double sum = 0.0;
  for (int i = 0; i <= f.n; ++i) {
    for (int j = 0; j <= f.n; ++j) {
      if (i == j) continue;
      double dt = std::abs(f.t(i) - f.t(j));
      sum += std::pow(std::abs(f[i] - f[j]), p) / std::pow(dt, 1.0 + s * p);
    }
  }
  return std::pow(sum * h * h, 1.0 / p);
}

double boundary_norm(const BoundaryProfile& f, TraceNormKind kind, double p, double s) {
  switch (kind) {
    case TraceNormKind::Lp:
      return profile_lp(f, p);
    case TraceNormKind::W1p:
      return profile_lp(f, p) + profile_lp(deriv_fd(f), p);
    case TraceNormKind::Frac:
      if (!(s > 0.0 && s < 1.0))
        throw SolverError(ErrorKind::Config, "fractional order must lie in (0,1)");
      return profile_lp(f, p) + slobodeckij_seminorm(f, s, p);
  }
  return 0.0;
}

double max_z1cut_l2(const ScalarField& f) {
  const Grid g = f.grid;
  double best = 0.0;
  for (int i = 0; i <= g.n; ++i) {
    double cut = 0.0;
    for (int j = 0; j <= g.n; ++j)
      cut += trapezoid_weight(j, g.n, g.h) * f(i, j) * f(i, j);
    best = std::max(best, cut);
  }
  return std::sqrt(best);
}

}  // namespace chflow
