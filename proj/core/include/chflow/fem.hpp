#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <memory>

#include "chflow/field.hpp"
#include "chflow/profile.hpp"

namespace chflow::fem {

// Constraint layout of the velocity space: both components fixed on the
// inflow/outflow sides (i = 0 and i = n), second component fixed to zero on
// the walls (j = 0 and j = n). Corner nodes belong to inflow/outflow.
struct DofMap {
  Grid grid;
  std::vector<int> free_index;      // 2*num_nodes, -1 when constrained
  std::vector<double> fixed_value;  // 2*num_nodes
  int n_free = 0;

  static DofMap channel(Grid g);

  // Prescribes inflow/outflow Dirichlet values; profiles are indexed by j.
  void set_dirichlet(const VectorProfile& inflow, const VectorProfile& outflow);

  int dof(int i, int j, int comp) const { return 2 * grid.idx(i, j) + comp; }
  bool is_free(int d) const { return free_index[static_cast<size_t>(d)] >= 0; }

  Eigen::VectorXd restrict_free(const VectorField& v) const;
  VectorField extend(const Eigen::VectorXd& free_values) const;
};

// Bilinear form of the velocity block:
//   2 mu (D(v), D(phi)) + nu (div v, div phi) + alpha <v.tau, phi.tau>_wall
//   [+ (c(z) d1 v, phi)] [+ (v2, phi1)] [+ upwind (h/2) (c d1 v, d1 phi)]
struct FormOptions {
  double mu = 1.0;
  double nu = 0.0;
  double alpha = 0.0;
  const ScalarField* convection = nullptr;  // nodal coefficient, Q1-interpolated
  bool shear_coupling = false;
  bool upwind = false;
};

// Assembles and factorizes the velocity system once; right-hand sides are
// built per solve. Piecewise-bilinear trial/test spaces, 2x2 Gauss per cell,
// wall terms by 2-point Gauss per edge.
class VelocitySolver {
 public:
  VelocitySolver(DofMap dofs, const FormOptions& opt);

  const DofMap& dofs() const { return dofs_; }
  const Eigen::SparseMatrix<double>& matrix() const { return A_; }

  // Contribution of the prescribed Dirichlet values, already on the RHS side.
  const Eigen::VectorXd& rhs_dirichlet() const { return rhs_dirichlet_; }

  Eigen::VectorXd rhs_body(const VectorField& g) const;
  Eigen::VectorXd rhs_wall(const BoundaryProfile& bottom, const BoundaryProfile& top) const;
  // integral of w * div(phi); scale by gamma at the call site.
  Eigen::VectorXd rhs_pressure(const ScalarField& w) const;

  Eigen::VectorXd solve_free(const Eigen::VectorXd& rhs) const;
  VectorField solve(const Eigen::VectorXd& rhs) const;

 private:
  DofMap dofs_;
  FormOptions opt_;
  ScalarField convection_;  // copy, may be empty
  Eigen::SparseMatrix<double> A_;
  Eigen::VectorXd rhs_dirichlet_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

// Full 8x8 element matrix on cell (ci, cj); exposed for patch tests.
Eigen::Matrix<double, 8, 8> element_matrix(Grid g, int ci, int cj, const FormOptions& opt);

// FE-consistent energy integrals of a nodal vector field (Q1 gradients, 2x2
// Gauss; exact for products of bilinear gradients). Feeds the Korn/Poincare
// diagnostics.
struct EnergyReport {
  double two_int_D2 = 0.0;  // 2 int |D(v)|^2
  double int_div2 = 0.0;    // int (div v)^2
  double int_grad2 = 0.0;   // int |grad v|^2
  double int_v2 = 0.0;      // int |v|^2
};
EnergyReport energy_quadrature(const VectorField& v);

}  // namespace chflow::fem
