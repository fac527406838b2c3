#pragma once

namespace chflow {

// Uniform tensor grid of (n+1)x(n+1) nodes on the unit square.
// Node (i,j) sits at (i*h, j*h) with h = 1/n.
struct Grid {
  int n = 0;
  double h = 0.0;

  Grid() = default;
  explicit Grid(int cells) : n(cells), h(1.0 / cells) {}

  int nodes_per_side() const { return n + 1; }
  int num_nodes() const { return (n + 1) * (n + 1); }
  int idx(int i, int j) const { return j * (n + 1) + i; }
  double z1(int i) const { return i * h; }
  double z2(int j) const { return j * h; }

  bool operator==(const Grid& o) const { return n == o.n; }
  bool operator!=(const Grid& o) const { return n != o.n; }
};

}  // namespace chflow
