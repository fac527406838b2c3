#include "chflow/linsolve.hpp"

#include <cmath>

#include "chflow/errors.hpp"
#include "chflow/fd.hpp"
#include "chflow/norms.hpp"

namespace chflow {

MomentumSystem::MomentumSystem(const LinearData& data) : gamma_(data.params.gamma) {
  const Grid g = data.params.grid();
  ScalarField ubar = ubar_composed(data.map);
  fem::FormOptions opt;
  opt.mu = data.params.mu;
  opt.nu = data.params.nu;
  opt.alpha = data.params.alpha;
  opt.convection = &ubar;
  opt.shear_coupling = true;
  opt.upwind = data.params.upwind;
  solver_ = std::make_unique<fem::VelocitySolver>(fem::DofMap::channel(g), opt);
  rhs_data_ = solver_->rhs_body(data.g) +
              solver_->rhs_wall(data.b_tilde_bottom, data.b_tilde_top);
}

Eigen::VectorXd MomentumSystem::rhs(const ScalarField& w) const {
  return rhs_data_ + gamma_ * solver_->rhs_pressure(w);
}

VectorField MomentumSystem::solve_with_density(const ScalarField& w) const {
  return solver_->solve(rhs(w));
}

namespace {

struct InnerResult {
  VectorField v;
  ScalarField w;
  int iterations = 0;
  double residual = 0.0;
};

InnerResult run_inner(const MomentumSystem& sys, const TransportCoeff& a,
                      const LinearData& data, double omega) {
  const Grid g = data.params.grid();
  VectorField v(g);
  ScalarField w(g);
  double prev_delta = std::numeric_limits<double>::max();
  int grow_streak = 0;
  int k = 0;
  double delta = 0.0;

  for (k = 1; k <= data.params.max_inner; ++k) {
    ScalarField rhs_w = data.f - div_fd(v);
    ScalarField w_new = transport_S(rhs_w, data.w_in, a);
    VectorField v_hat = sys.solve_with_density(w_new);
    VectorField v_new = (omega == 1.0) ? std::move(v_hat) : v + omega * (v_hat - v);

    delta = norm(v_new - v, NormKind::H1) + norm(w_new - w, NormKind::Lp, 2.0);
    v = std::move(v_new);
    w = std::move(w_new);
    if (delta < data.params.tol_inner) break;
    if (delta > prev_delta) {
      if (++grow_streak >= 5)
        throw SolverError(ErrorKind::InnerDivergence,
                          "inner increments grew for 5 consecutive steps (delta=" +
                              std::to_string(delta) + ")");
    } else {
      grow_streak = 0;
    }
    prev_delta = delta;
  }

  // Final density refresh so the returned pair satisfies w = S(f - div v).
  w = transport_S(data.f - div_fd(v), data.w_in, a);
  return {std::move(v), std::move(w), std::min(k, data.params.max_inner), delta};
}

}  // namespace

LinearSolution solve_linear_system(const LinearData& data) {
  data.params.validate();
  MomentumSystem sys(data);
  TransportCoeff a = coeff_a(data.map, data.v_bar, data.params);

  double omega = data.params.inner_relax;
  for (int attempt = 0;; ++attempt) {
    try {
      InnerResult r = run_inner(sys, a, data, omega);
      return {std::move(r.v), std::move(r.w), r.iterations, r.residual};
    } catch (const SolverError& e) {
      if (e.kind() != ErrorKind::InnerDivergence || attempt >= 3) throw;
      omega *= 0.5;
    }
  }
}

LinearSolution solve_monolithic(const LinearData& data) {
  data.params.validate();
  MomentumSystem sys(data);
  TransportCoeff a = coeff_a(data.map, data.v_bar, data.params);
  const fem::DofMap& dofs = sys.fem_solver().dofs();
  const int nfree = dofs.n_free;
  if (nfree > 5000)
    throw SolverError(ErrorKind::Config,
                      "monolithic assembly is a coarse-grid oracle (free dofs > 5000)");
  const double gamma = data.params.gamma;

  Eigen::MatrixXd M = Eigen::MatrixXd(sys.fem_solver().matrix());
  const BoundaryProfile zero_in(data.params.n, 0.0);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(nfree);
  for (int jdof = 0; jdof < nfree; ++jdof) {
    unit[jdof] = 1.0;
    VectorField basis = dofs.extend(unit);
    unit[jdof] = 0.0;
    ScalarField coupled = transport_S(div_fd(basis), zero_in, a);
    M.col(jdof) += gamma * sys.fem_solver().rhs_pressure(coupled);
  }

  ScalarField w_of_f = transport_S(data.f, data.w_in, a);
  Eigen::VectorXd rhs = sys.rhs(w_of_f);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  Eigen::VectorXd vfree = lu.solve(rhs);

  LinearSolution out;
  out.v = dofs.extend(vfree);
  out.w = transport_S(data.f - div_fd(out.v), data.w_in, a);
  return out;
}

}  // namespace chflow
