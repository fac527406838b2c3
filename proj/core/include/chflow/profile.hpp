#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <vector>

namespace chflow {

// Samples of a function of one boundary coordinate at the n+1 nodes of one side.
struct BoundaryProfile {
  int n = 0;
  std::vector<double> v;

  BoundaryProfile() = default;
  explicit BoundaryProfile(int cells, double fill = 0.0)
      : n(cells), v(static_cast<size_t>(cells + 1), fill) {}

  double h() const { return 1.0 / n; }
  double t(int i) const { return static_cast<double>(i) / n; }
  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }
  int size() const { return n + 1; }

  static BoundaryProfile sample(int cells, const std::function<double(double)>& f) {
    BoundaryProfile out(cells);
    for (int i = 0; i <= cells; ++i) out[i] = f(out.t(i));
    return out;
  }

  BoundaryProfile& operator+=(const BoundaryProfile& o) {
    assert(n == o.n);
    for (size_t k = 0; k < v.size(); ++k) v[k] += o.v[k];
    return *this;
  }
  BoundaryProfile& operator-=(const BoundaryProfile& o) {
    assert(n == o.n);
    for (size_t k = 0; k < v.size(); ++k) v[k] -= o.v[k];
    return *this;
  }
  BoundaryProfile& operator*=(double c) {
    for (double& x : v) x *= c;
    return *this;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

inline BoundaryProfile operator+(BoundaryProfile a, const BoundaryProfile& b) { return a += b; }
inline BoundaryProfile operator-(BoundaryProfile a, const BoundaryProfile& b) { return a -= b; }
inline BoundaryProfile operator*(double c, BoundaryProfile a) { return a *= c; }

// Vector-valued boundary data (velocity traces).
struct VectorProfile {
  BoundaryProfile c1, c2;
};

}  // namespace chflow
