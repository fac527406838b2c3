#include "chflow/fem.hpp"

#include <array>
#include <cmath>

#include "chflow/errors.hpp"

namespace chflow::fem {

namespace {

constexpr double kGaussOffset = 0.28867513459481287;  // 1/(2 sqrt(3))
constexpr std::array<double, 2> kGauss = {0.5 - kGaussOffset, 0.5 + kGaussOffset};

struct ShapeValues {
  std::array<double, 4> N;
  std::array<double, 4> d1;  // d/dz1
  std::array<double, 4> d2;  // d/dz2
};

// Q1 shapes on the reference cell [0,1]^2; local nodes (0,0),(1,0),(0,1),(1,1).
ShapeValues shapes_at(double xi, double eta, double h) {
  ShapeValues s;
  s.N = {(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta, xi * eta};
  s.d1 = {-(1 - eta) / h, (1 - eta) / h, -eta / h, eta / h};
  s.d2 = {-(1 - xi) / h, -xi / h, (1 - xi) / h, xi / h};
  return s;
}

std::array<int, 4> cell_nodes(Grid g, int ci, int cj) {
  return {g.idx(ci, cj), g.idx(ci + 1, cj), g.idx(ci, cj + 1), g.idx(ci + 1, cj + 1)};
}

}  // namespace

DofMap DofMap::channel(Grid g) {
  DofMap m;
  m.grid = g;
  m.free_index.assign(static_cast<size_t>(2 * g.num_nodes()), -1);
  m.fixed_value.assign(static_cast<size_t>(2 * g.num_nodes()), 0.0);
  int next = 0;
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      const bool inout = (i == 0 || i == g.n);
      const bool wall = (j == 0 || j == g.n);
      for (int comp = 0; comp < 2; ++comp) {
        const int d = m.dof(i, j, comp);
        const bool fixed = inout || (wall && comp == 1);
        if (!fixed) m.free_index[static_cast<size_t>(d)] = next++;
      }
    }
  }
  m.n_free = next;
  return m;
}

void DofMap::set_dirichlet(const VectorProfile& inflow, const VectorProfile& outflow) {
  for (int j = 0; j <= grid.n; ++j) {
    fixed_value[static_cast<size_t>(dof(0, j, 0))] = inflow.c1[j];
    fixed_value[static_cast<size_t>(dof(0, j, 1))] = inflow.c2[j];
    fixed_value[static_cast<size_t>(dof(grid.n, j, 0))] = outflow.c1[j];
    fixed_value[static_cast<size_t>(dof(grid.n, j, 1))] = outflow.c2[j];
  }
}

Eigen::VectorXd DofMap::restrict_free(const VectorField& v) const {
  Eigen::VectorXd out(n_free);
  for (int j = 0; j <= grid.n; ++j) {
    for (int i = 0; i <= grid.n; ++i) {
      int d1i = free_index[static_cast<size_t>(dof(i, j, 0))];
      int d2i = free_index[static_cast<size_t>(dof(i, j, 1))];
      if (d1i >= 0) out[d1i] = v.c1(i, j);
      if (d2i >= 0) out[d2i] = v.c2(i, j);
    }
  }
  return out;
}

VectorField DofMap::extend(const Eigen::VectorXd& free_values) const {
  VectorField out(grid);
  for (int j = 0; j <= grid.n; ++j) {
    for (int i = 0; i <= grid.n; ++i) {
      for (int comp = 0; comp < 2; ++comp) {
        const int d = dof(i, j, comp);
        const int fi = free_index[static_cast<size_t>(d)];
        double val = fi >= 0 ? free_values[fi] : fixed_value[static_cast<size_t>(d)];
        (comp == 0 ? out.c1 : out.c2)(i, j) = val;
      }
    }
  }
  return out;
}

Eigen::Matrix<double, 8, 8> element_matrix(Grid g, int ci, int cj, const FormOptions& opt) {
  Eigen::Matrix<double, 8, 8> K = Eigen::Matrix<double, 8, 8>::Zero();
  const double h = g.h;
  const double wq = 0.25 * h * h;
  const auto nodes = cell_nodes(g, ci, cj);

  for (double xi : kGauss) {
    for (double eta : kGauss) {
      const ShapeValues s = shapes_at(xi, eta, h);
      double conv = 0.0;
      if (opt.convection) {
        for (int a = 0; a < 4; ++a)
          conv += s.N[a] * opt.convection->data[static_cast<size_t>(nodes[a])];
      }
      for (int a = 0; a < 4; ++a) {      // test
        for (int b = 0; b < 4; ++b) {    // trial
          const double gdot = s.d1[a] * s.d1[b] + s.d2[a] * s.d2[b];
          const std::array<double, 2> ga = {s.d1[a], s.d2[a]};
          const std::array<double, 2> gb = {s.d1[b], s.d2[b]};
          for (int alpha = 0; alpha < 2; ++alpha) {
            for (int beta = 0; beta < 2; ++beta) {
              double val = opt.mu * ((alpha == beta ? gdot : 0.0) + gb[alpha] * ga[beta]);
              val += opt.nu * gb[beta] * ga[alpha];
              if (opt.convection && alpha == beta) {
                val += conv * s.d1[b] * s.N[a];
                if (opt.upwind) val += 0.5 * h * conv * s.d1[b] * s.d1[a];
              }
              if (opt.shear_coupling && beta == 1 && alpha == 0) val += s.N[b] * s.N[a];
              K(2 * a + alpha, 2 * b + beta) += wq * val;
            }
          }
        }
      }
    }
  }

  // Wall friction alpha <v.tau, phi.tau> on bottom/top edges, tau = e1.
  if (opt.alpha != 0.0 && (cj == 0 || cj == g.n - 1)) {
    const bool bottom = (cj == 0);
    const int la = bottom ? 0 : 2;  // local edge nodes (la, la+1)
    for (double xi : kGauss) {
      const double m0 = 1 - xi, m1 = xi;
      const double we = 0.5 * h;
      const std::array<std::pair<int, double>, 2> edge = {{{la, m0}, {la + 1, m1}}};
      for (auto [a, na] : edge)
        for (auto [b, nb] : edge) K(2 * a + 0, 2 * b + 0) += we * opt.alpha * na * nb;
    }
  }
  return K;
}

VelocitySolver::VelocitySolver(DofMap dofs, const FormOptions& opt)
    : dofs_(std::move(dofs)), opt_(opt) {
  if (opt.convection) {
    convection_ = *opt.convection;
    opt_.convection = &convection_;
  }
  const Grid g = dofs_.grid;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(64 * g.n * g.n));
  rhs_dirichlet_ = Eigen::VectorXd::Zero(dofs_.n_free);

  for (int cj = 0; cj < g.n; ++cj) {
    for (int ci = 0; ci < g.n; ++ci) {
      const auto K = element_matrix(g, ci, cj, opt_);
      const auto nodes = cell_nodes(g, ci, cj);
      for (int a = 0; a < 4; ++a) {
        for (int alpha = 0; alpha < 2; ++alpha) {
          const int row = 2 * nodes[a] + alpha;
          const int rfree = dofs_.free_index[static_cast<size_t>(row)];
          if (rfree < 0) continue;
          for (int b = 0; b < 4; ++b) {
            for (int beta = 0; beta < 2; ++beta) {
              const int col = 2 * nodes[b] + beta;
              const int cfree = dofs_.free_index[static_cast<size_t>(col)];
              const double kv = K(2 * a + alpha, 2 * b + beta);
              if (kv == 0.0) continue;
              if (cfree >= 0) {
                trips.emplace_back(rfree, cfree, kv);
              } else {
                rhs_dirichlet_[rfree] -= kv * dofs_.fixed_value[static_cast<size_t>(col)];
              }
            }
          }
        }
      }
    }
  }

  A_.resize(dofs_.n_free, dofs_.n_free);
  A_.setFromTriplets(trips.begin(), trips.end());
  A_.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  lu_->compute(A_);
  if (lu_->info() != Eigen::Success)
    throw SolverError(ErrorKind::SingularSystem, "velocity system factorization failed");
}

Eigen::VectorXd VelocitySolver::rhs_body(const VectorField& gfield) const {
  const Grid g = dofs_.grid;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs_.n_free);
  const double wq = 0.25 * g.h * g.h;
  for (int cj = 0; cj < g.n; ++cj) {
    for (int ci = 0; ci < g.n; ++ci) {
      const auto nodes = cell_nodes(g, ci, cj);
      for (double xi : kGauss) {
        for (double eta : kGauss) {
          const ShapeValues s = shapes_at(xi, eta, g.h);
          double g1 = 0.0, g2 = 0.0;
          for (int a = 0; a < 4; ++a) {
            g1 += s.N[a] * gfield.c1.data[static_cast<size_t>(nodes[a])];
            g2 += s.N[a] * gfield.c2.data[static_cast<size_t>(nodes[a])];
          }
          for (int a = 0; a < 4; ++a) {
            const int r1 = dofs_.free_index[static_cast<size_t>(2 * nodes[a] + 0)];
            const int r2 = dofs_.free_index[static_cast<size_t>(2 * nodes[a] + 1)];
            if (r1 >= 0) rhs[r1] += wq * g1 * s.N[a];
            if (r2 >= 0) rhs[r2] += wq * g2 * s.N[a];
          }
        }
      }
    }
  }
  return rhs;
}

Eigen::VectorXd VelocitySolver::rhs_wall(const BoundaryProfile& bottom,
                                         const BoundaryProfile& top) const {
  const Grid g = dofs_.grid;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs_.n_free);
  auto edge_contrib = [&](int j, const BoundaryProfile& prof) {
    for (int ci = 0; ci < g.n; ++ci) {
      for (double xi : kGauss) {
        const double m0 = 1 - xi, m1 = xi;
        const double we = 0.5 * g.h;
        const double bval = m0 * prof[ci] + m1 * prof[ci + 1];
        const int r0 = dofs_.free_index[static_cast<size_t>(dofs_.dof(ci, j, 0))];
        const int r1 = dofs_.free_index[static_cast<size_t>(dofs_.dof(ci + 1, j, 0))];
        if (r0 >= 0) rhs[r0] += we * bval * m0;
        if (r1 >= 0) rhs[r1] += we * bval * m1;
      }
    }
  };
  edge_contrib(0, bottom);
  edge_contrib(g.n, top);
  return rhs;
}

Eigen::VectorXd VelocitySolver::rhs_pressure(const ScalarField& w) const {
  const Grid g = dofs_.grid;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs_.n_free);
  const double wq = 0.25 * g.h * g.h;
  for (int cj = 0; cj < g.n; ++cj) {
    for (int ci = 0; ci < g.n; ++ci) {
      const auto nodes = cell_nodes(g, ci, cj);
      for (double xi : kGauss) {
        for (double eta : kGauss) {
          const ShapeValues s = shapes_at(xi, eta, g.h);
          double wval = 0.0;
          for (int a = 0; a < 4; ++a) wval += s.N[a] * w.data[static_cast<size_t>(nodes[a])];
          for (int a = 0; a < 4; ++a) {
            const int r1 = dofs_.free_index[static_cast<size_t>(2 * nodes[a] + 0)];
            const int r2 = dofs_.free_index[static_cast<size_t>(2 * nodes[a] + 1)];
            if (r1 >= 0) rhs[r1] += wq * wval * s.d1[a];
            if (r2 >= 0) rhs[r2] += wq * wval * s.d2[a];
          }
        }
      }
    }
  }
  return rhs;
}

Eigen::VectorXd VelocitySolver::solve_free(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = lu_->solve(rhs);
  if (lu_->info() != Eigen::Success)
    throw SolverError(ErrorKind::SingularSystem, "velocity backsolve failed");
  return x;
}

VectorField VelocitySolver::solve(const Eigen::VectorXd& rhs) const {
  return dofs_.extend(solve_free(rhs));
}

EnergyReport energy_quadrature(const VectorField& v) {
  const Grid g = v.grid();
  EnergyReport rep;
  const double wq = 0.25 * g.h * g.h;
  for (int cj = 0; cj < g.n; ++cj) {
    for (int ci = 0; ci < g.n; ++ci) {
      const auto nodes = cell_nodes(g, ci, cj);
      for (double xi : kGauss) {
        for (double eta : kGauss) {
          const ShapeValues s = shapes_at(xi, eta, g.h);
          double v1 = 0, v2 = 0, d1v1 = 0, d2v1 = 0, d1v2 = 0, d2v2 = 0;
          for (int a = 0; a < 4; ++a) {
            const double a1 = v.c1.data[static_cast<size_t>(nodes[a])];
            const double a2 = v.c2.data[static_cast<size_t>(nodes[a])];
            v1 += s.N[a] * a1;
            v2 += s.N[a] * a2;
            d1v1 += s.d1[a] * a1;
            d2v1 += s.d2[a] * a1;
            d1v2 += s.d1[a] * a2;
            d2v2 += s.d2[a] * a2;
          }
          const double off = 0.5 * (d2v1 + d1v2);
          rep.two_int_D2 += wq * 2.0 * (d1v1 * d1v1 + d2v2 * d2v2 + 2.0 * off * off);
          const double dv = d1v1 + d2v2;
          rep.int_div2 += wq * dv * dv;
          rep.int_grad2 += wq * (d1v1 * d1v1 + d2v1 * d2v1 + d1v2 * d1v2 + d2v2 * d2v2);
          rep.int_v2 += wq * (v1 * v1 + v2 * v2);
        }
      }
    }
  }
  return rep;
}

}  // namespace chflow::fem
