#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <vector>

#include "chflow/grid.hpp"

namespace chflow {

// Nodal scalar field on a Grid, stored row-major in j then i.
struct ScalarField {
  Grid grid;
  std::vector<double> data;

  ScalarField() = default;
  explicit ScalarField(Grid g, double fill = 0.0)
      : grid(g), data(static_cast<size_t>(g.num_nodes()), fill) {}

  double& operator()(int i, int j) { return data[grid.idx(i, j)]; }
  double operator()(int i, int j) const { return data[grid.idx(i, j)]; }

  static ScalarField sample(Grid g, const std::function<double(double, double)>& f) {
    ScalarField out(g);
    for (int j = 0; j <= g.n; ++j)
      for (int i = 0; i <= g.n; ++i) out(i, j) = f(g.z1(i), g.z2(j));
    return out;
  }

  // Bilinear interpolation; queries are clamped to the unit square.
  double eval(double x1, double x2) const {
    const int n = grid.n;
    const double h = grid.h;
    x1 = std::clamp(x1, 0.0, 1.0);
    x2 = std::clamp(x2, 0.0, 1.0);
    int i = std::min(static_cast<int>(x1 / h), n - 1);
    int j = std::min(static_cast<int>(x2 / h), n - 1);
    double s = x1 / h - i;
    double t = x2 / h - j;
    return (1 - s) * (1 - t) * (*this)(i, j) + s * (1 - t) * (*this)(i + 1, j) +
           (1 - s) * t * (*this)(i, j + 1) + s * t * (*this)(i + 1, j + 1);
  }

  ScalarField& operator+=(const ScalarField& o) {
    assert(grid == o.grid);
    for (size_t k = 0; k < data.size(); ++k) data[k] += o.data[k];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    assert(grid == o.grid);
    for (size_t k = 0; k < data.size(); ++k) data[k] -= o.data[k];
    return *this;
  }
  ScalarField& operator*=(double c) {
    for (double& v : data) v *= c;
    return *this;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
  }
};

inline ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
inline ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
inline ScalarField operator*(double c, ScalarField a) { return a *= c; }

// Pair of nodal scalar fields sharing one grid (components 1 and 2).
struct VectorField {
  ScalarField c1, c2;

  VectorField() = default;
  explicit VectorField(Grid g) : c1(g), c2(g) {}
  VectorField(ScalarField a, ScalarField b) : c1(std::move(a)), c2(std::move(b)) {
    assert(c1.grid == c2.grid);
  }

  const Grid& grid() const { return c1.grid; }

  static VectorField sample(Grid g, const std::function<double(double, double)>& f1,
                            const std::function<double(double, double)>& f2) {
    return {ScalarField::sample(g, f1), ScalarField::sample(g, f2)};
  }

  VectorField& operator+=(const VectorField& o) {
    c1 += o.c1;
    c2 += o.c2;
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    c1 -= o.c1;
    c2 -= o.c2;
    return *this;
  }
  VectorField& operator*=(double s) {
    c1 *= s;
    c2 *= s;
    return *this;
  }

  double max_abs() const { return std::max(c1.max_abs(), c2.max_abs()); }
};

inline VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
inline VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
inline VectorField operator*(double c, VectorField a) { return a *= c; }

// Symmetric 2x2 tensor field (t21 == t12).
struct SymTensorField {
  ScalarField t11, t12, t22;
};

}  // namespace chflow
